"""Arbitrary-precision forward iteration and positivity shooting.

Both quantum-minimal-surface recursions are violently unstable: an error
delta in the initial data grows roughly by a factor eps_n / v_n^2 per
step, so the positive solution is a measure-zero target that has to be
shot for.  The parabolic case bisects on v0; the cubic case seeds
(v0, v1) from the truncated series and polishes with a damped Newton
iteration against series values at a matching depth.

Every iterate carries a crude first-order error bound so that a sign is
only ever trusted when the value clears its own bound; otherwise
PrecisionExhausted is raised rather than silently corrupting the
bisection direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpf

from . import series


class SolverError(Exception):
    pass


class PrecisionExhausted(SolverError):
    """Sign of an iterate is not determined at the working precision."""


class BracketNotFound(SolverError):
    """Initial scan did not find opposite failure modes."""


class NewtonDiverged(SolverError):
    """Cubic two-parameter refinement failed to converge."""


def default_precision(N: int) -> int:
    # the recursion loses O(1) digits per step when v0 is off
    return 64 + 12 * N


@dataclass
class VSequence:
    """A solved recursion record with residuals and shot-parameter brackets."""

    flavor: str                  # "parabolic" | "cubic"
    eps: mpf
    N: int
    v: list                     # v_0 .. v_N
    precision: int
    bracket: tuple              # (lo, hi) for v0
    bracket_v1: tuple | None = None   # cubic only
    residual_max: mpf = mpf(0)
    residuals: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        digits = max(int(self.precision * 0.30103), 8)
        fmt = lambda x: mpmath.nstr(mpf(x), digits)
        out = {
            "flavor": self.flavor,
            "eps": fmt(self.eps),
            "n": self.N,
            "prec": self.precision,
            "v": [fmt(x) for x in self.v],
            "bracket": [fmt(self.bracket[0]), fmt(self.bracket[1])],
            "residual_max": mpmath.nstr(mpf(self.residual_max), 8),
        }
        if self.bracket_v1 is not None:
            out["bracket_v1"] = [fmt(self.bracket_v1[0]), fmt(self.bracket_v1[1])]
        return out


# ---------------------------------------------------------------------------
# forward iteration


def iterate_parabolic(v0, eps, N: int, precision: int,
                      track_errors: bool = True):
    """Iterate v_{n+1} = (n+1) eps / v_n - v_{n-1} - 1 with v_{-1} = 0.

    Returns (values, survival): values holds every computed v_n up to the
    first nonpositive one (inclusive); survival is the first failing index,
    or N + 1 if positivity held through n = N.
    """
    with mp.workprec(precision):
        eps = mpf(eps)
        ulp = mpf(2) ** (-precision)
        vm, vn = mpf(0), mpf(v0)
        em, en = mpf(0), ulp * abs(vn)
        values = [vn]
        if vn <= 0:
            return values, 0
        for n in range(N):
            if track_errors and en > abs(vn):
                raise PrecisionExhausted(
                    f"sign of v_{n} not determined at {precision} bits")
            vp = (n + 1) * eps / vn - vm - 1
            ep = ((n + 1) * eps / vn**2) * en + em + 4 * ulp * (abs(vp) + 1)
            values.append(vp)
            vm, vn, em, en = vn, vp, en, ep
            if vn <= 0:
                return values, n + 1
        return values, N + 1


def iterate_cubic(v0, v1, eps, N: int, precision: int,
                  track_errors: bool = True):
    """Iterate the cubic recursion with v_{-1} = 0 (v_{-2} never enters)."""
    with mp.workprec(precision):
        eps = mpf(eps)
        ulp = mpf(2) ** (-precision)
        v = [mpf(v0), mpf(v1)]
        err = [ulp * abs(v[0]), ulp * abs(v[1])]
        for i in (0, 1):
            if v[i] <= 0:
                return v[:i + 1], i
        for n in range(N - 1):
            # v_{n+2} = (1/v_{n+1})(eps_n/v_n - 1) - v_{n-1}(v_{n-2}/v_{n+1} + 1)
            en_ = (n + 1) * eps
            vn, vp1 = v[n], v[n + 1]
            vm1 = v[n - 1] if n >= 1 else mpf(0)
            vm2 = v[n - 2] if n >= 2 else mpf(0)
            if track_errors and err[n + 1] > abs(vp1):
                raise PrecisionExhausted(
                    f"sign of v_{n + 1} not determined at {precision} bits")
            vp2 = (en_ / vn - 1) / vp1 - vm1 * (vm2 / vp1 + 1)
            # first-order sensitivity bound, coarse on purpose
            d_vn = en_ / (vn**2 * abs(vp1))
            d_vp1 = abs(en_ / vn - 1) / vp1**2 + abs(vm1) * vm2 / vp1**2
            e2 = (d_vn * err[n] + d_vp1 * err[n + 1]
                  + (err[n - 1] if n >= 1 else mpf(0)) * (vm2 / vp1 + 1)
                  + (abs(vm1) / vp1) * (err[n - 2] if n >= 2 else mpf(0))
                  + 8 * ulp * (abs(vp2) + 1))
            v.append(vp2)
            err.append(e2)
            if vp2 <= 0:
                return v, n + 2
        return v, N + 1


# ---------------------------------------------------------------------------
# parabolic shooting


def _failure_parity(v0, eps, precision, max_steps):
    """Parity (0/1) of the first positivity failure, iterated past depth N."""
    with mp.workprec(precision):
        eps = mpf(eps)
        vm, vn = mpf(0), mpf(v0)
        if vn <= 0:
            return 0
        for n in range(max_steps):
            vp = (n + 1) * eps / vn - vm - 1
            if vp <= 0:
                return (n + 1) % 2
            vm, vn = vn, vp
    return None


def shoot_parabolic(eps, N: int, precision: int | None = None) -> VSequence:
    """Bisect on v0 so the forward iterates stay positive; certified record."""
    if precision is None:
        precision = default_precision(N)
    work = precision + 32
    with mp.workprec(work):
        eps = mpf(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        max_steps = N + int(1 / eps) + 2 * precision
        est, _ = series.truncated_v("parabolic", 0, eps, K=8)

        # establish the direction rule empirically from two coarse probes
        lo, hi = est * mpf("0.875"), est * mpf("1.125")
        for _ in range(60):
            cls_lo = _failure_parity(lo, eps, work, max_steps)
            cls_hi = _failure_parity(hi, eps, work, max_steps)
            if cls_lo is None or cls_hi is None:
                max_steps *= 2
                continue
            if cls_lo != cls_hi:
                break
            lo, hi = lo / 2, hi * 2
        else:
            raise BracketNotFound(
                f"no opposite failure modes around v0 ~ {mpmath.nstr(est, 12)}")

        width_target = mpf(2) ** (-(precision - 16))
        while hi - lo > width_target:
            mid = (lo + hi) / 2
            cls_mid = _failure_parity(mid, eps, work, max_steps)
            if cls_mid is None:
                max_steps *= 2
                cls_mid = _failure_parity(mid, eps, work, max_steps)
                if cls_mid is None:
                    raise PrecisionExhausted(
                        "midpoint never fails; raise precision")
            if cls_mid == cls_lo:
                lo = mid
            else:
                hi = mid

        v0 = (lo + hi) / 2
        values, survival = iterate_parabolic(v0, eps, N, work)
        if survival <= N:
            raise PrecisionExhausted(
                f"midpoint iterate lost positivity at n={survival}")
    seq = VSequence("parabolic", eps, N, values[:N + 1], precision,
                    bracket=(lo, hi))
    residual_report(seq)
    return seq


# ---------------------------------------------------------------------------
# cubic shooting


def _series_targets(eps, indices, K, precision):
    with mp.workprec(precision):
        return [series.truncated_v("cubic", n, eps, K=K)[0] for n in indices]


def shoot_cubic(eps, N: int, precision: int | None = None,
                match_depth: int | None = None, series_order: int = 5,
                max_newton: int = 60) -> VSequence:
    """Two-parameter refinement of (v0, v1) against series values at depth M."""
    if precision is None:
        precision = default_precision(N)
    M = match_depth if match_depth is not None else min(10, N // 2)
    work = precision + 32
    with mp.workprec(work):
        eps = mpf(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")

        def credible(value, gauge):
            # an asymptotic target is only usable while it is positive and
            # its own first-omitted-term gauge is small against it
            return value > 0 and gauge < value / 2

        while match_depth is None and M > 1:
            pairs = [series.truncated_v("cubic", n, eps, K=series_order)
                     for n in (M, M + 1)]
            if all(credible(v, g) for v, g in pairs):
                break
            M -= 1
        t = _series_targets(eps, [0, 1, M, M + 1], series_order, work)
        v0, v1 = t[0], t[1]
        targets = (t[2], t[3])

        def F(a, b):
            vals, survival = iterate_cubic(a, b, eps, M + 1, work,
                                           track_errors=False)
            if survival <= M + 1:
                return None
            return (vals[M] - targets[0], vals[M + 1] - targets[1])

        f = F(v0, v1)
        if f is None:
            raise NewtonDiverged("series seed lost positivity before depth M")
        tol = mpf(2) ** (-(precision - 24)) * eps
        step = mpf(0)
        for _ in range(max_newton):
            norm = abs(f[0]) + abs(f[1])
            if norm < tol:
                break
            h = mpf(2) ** (-work // 3) * eps
            fa = F(v0 + h, v1)
            fb = F(v0, v1 + h)
            if fa is None or fb is None:
                raise NewtonDiverged("finite-difference probe lost positivity")
            j00, j10 = (fa[0] - f[0]) / h, (fa[1] - f[1]) / h
            j01, j11 = (fb[0] - f[0]) / h, (fb[1] - f[1]) / h
            det = j00 * j11 - j01 * j10
            if det == 0:
                raise NewtonDiverged("singular Jacobian")
            d0 = (f[0] * j11 - f[1] * j01) / det
            d1 = (j00 * f[1] - j10 * f[0]) / det
            lam = mpf(1)
            for _ in range(40):
                trial = F(v0 - lam * d0, v1 - lam * d1)
                if trial is not None and abs(trial[0]) + abs(trial[1]) < norm:
                    break
                lam /= 2
            else:
                raise NewtonDiverged("damping failed to reduce the residual")
            v0, v1 = v0 - lam * d0, v1 - lam * d1
            f = trial
            step = lam * (abs(d0) + abs(d1))
        else:
            raise NewtonDiverged(f"no convergence in {max_newton} iterations")

        values, survival = iterate_cubic(v0, v1, eps, N, work)
        if survival <= N:
            raise PrecisionExhausted(
                f"refined seed lost positivity at n={survival}; the "
                f"truncated-series targets (depth M={M}) cannot certify this "
                f"depth at eps={mpmath.nstr(eps, 8)} -- reduce eps or N")
        delta = max(step, tol)
    seq = VSequence("cubic", eps, N, values[:N + 1], precision,
                    bracket=(v0 - delta, v0 + delta),
                    bracket_v1=(v1 - delta, v1 + delta))
    residual_report(seq)
    return seq


# ---------------------------------------------------------------------------
# residuals


def residual_report(seq: VSequence) -> dict:
    """Evaluate the defining identities over all stored n; updates the record."""
    prec = seq.precision + 64
    with mp.workprec(prec):
        eps = mpf(seq.eps)
        v = [mpf(x) for x in seq.v]
        res: dict[str, list] = {}
        if seq.flavor == "parabolic":
            rows = []
            for n in range(len(v) - 1):
                vm = v[n - 1] if n >= 1 else mpf(0)
                rows.append(abs(v[n + 1] - ((n + 1) * eps / v[n] - vm - 1)))
            res["recursion"] = rows
        else:
            def V(n):
                return v[n] if n >= 0 else mpf(0)
            rows38, rows39 = [], []
            for n in range(len(v) - 2):
                lhs = (V(n) - V(n - 1) + V(n) * V(n + 1) * V(n + 2)
                       - V(n - 1) * V(n - 2) * V(n - 3))
                rows38.append(abs(lhs - eps))
                lhs = V(n) * (V(n + 1) * V(n + 2) + V(n - 1) * V(n - 2)
                              + V(n + 1) * V(n - 1) + 1)
                rows39.append(abs(lhs - (n + 1) * eps))
            res["sum_form"] = rows38
            res["product_form"] = rows39
            if len(v) >= 4:
                res["spot_checks"] = [
                    abs(v[0] * (1 + v[1] * v[2]) - eps),
                    abs(v[1] * (1 + v[2] * v[3]) - v[0] - eps),
                    abs(v[1] * (1 + v[2] * v[3] + v[2] * v[0]) - 2 * eps),
                ]
        worst = mpf(0)
        location = None
        for name, rows in res.items():
            for i, r in enumerate(rows):
                if r > worst:
                    worst, location = r, (name, i)
        seq.residuals = {k: [mpmath.nstr(r, 8) for r in rows]
                         for k, rows in res.items()}
        seq.residual_max = worst
        seq.residuals["worst_at"] = location
    return res
