"""Exact bivariate polynomial tower u_n(x, eps), tau_n, q_n, p_n.

Seed convention (forced by tau_1 = x, tau_2 = x(eps - x), v_0 = x and
q_{-1} = eps, and documented here because everything below depends on
it):

    u_{-4} = u_{-3} = u_{-2} = u_{-1} = 1,   u_0 = x,   u_1 = eps - x.

The tower is grown with one exact division per step,

    q_n     = (u_{n+2} u_{n-2} + u_{n+1} u_{n-1}) / u_n,
    u_{n+4} = (eps_{n+3} u_{n+2} u_{n+1} - q_n u_{n+3}) / u_{n-1},

with eps_m := (m+1) eps.  A NotDivisible escaping from build_u means a
polynomiality identity of the tower failed.  All the other displayed
relations between the u, q and p polynomials are implemented as
verification identities over a frozen tower.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .polynomials import BiPoly, NotDivisible, Q

__all__ = ["UTower", "build_u", "IDENTITIES", "NotDivisible"]


def _eps_n(n: int) -> BiPoly:
    """eps_n = (n+1) eps as a BiPoly."""
    return BiPoly.eps().scale(n + 1)


@dataclass
class UTower:
    """Frozen u/q/p tables, indexed from -4 (u) resp. -2 (q), -1 (p)."""

    u: dict[int, BiPoly] = field(default_factory=dict)
    q: dict[int, BiPoly] = field(default_factory=dict)
    p: dict[int, BiPoly] = field(default_factory=dict)
    built_to: int = -1

    def tau(self, n: int) -> BiPoly:
        """tau_n = u_{n-1} u_{n-2} u_{n-3}."""
        return self.u[n - 1] * self.u[n - 2] * self.u[n - 3]

    def q_p(self, n: int) -> tuple[BiPoly, BiPoly]:
        """(q_n, p_n), with p_n cross-checked against its second defining row."""
        p_n = (_eps_n(n + 3) * self.u[n + 2] * self.u[n - 3]
               + self.u[n + 3] * self.u[n - 4]).exact_div(self.u[n - 1])
        lhs = p_n * self.u[n + 1]
        rhs = (_eps_n(n + 1) * self.u[n + 3] * self.u[n - 2]
               + self.u[n - 3] * self.u[n + 4])
        if lhs != rhs:
            raise NotDivisible(f"p_{n} cross-check failed",
                               remainder=lhs - rhs)
        return self.q[n], p_n


def build_u(n_max: int) -> UTower:
    """Grow the tower so that u is available through n_max + 4."""
    t = UTower()
    for k in range(-4, 0):
        t.u[k] = BiPoly.constant(1)
    t.u[0] = BiPoly.x()
    t.u[1] = BiPoly.eps() - BiPoly.x()
    for n in range(-2, n_max + 1):
        num = t.u[n + 2] * t.u[n - 2] + t.u[n + 1] * t.u[n - 1]
        t.q[n] = num.exact_div(t.u[n])
        t.u[n + 4] = (_eps_n(n + 3) * t.u[n + 2] * t.u[n + 1]
                      - t.q[n] * t.u[n + 3]).exact_div(t.u[n - 1])
        for m in (n + 3, n + 4):
            if m > 2:
                deg = (t.u[m - 1] * t.u[m - 2] * t.u[m - 3]).deg_x
                if deg != m + 1:
                    raise NotDivisible(f"deg_x tau_{m} = {deg}, expected {m + 1}")
        t.built_to = n
    for n in range(0, n_max + 1):
        _, t.p[n] = t.q_p(n)
    return t


# ---------------------------------------------------------------------------
# identity verification


def _check_tau_product(t: UTower, n: int, rng: random.Random) -> BiPoly | None:
    """tau_{n+1} = v_0^{n+1} v_1^n ... v_n at random rational points.

    Stated between rational functions, so checked by sampled evaluation
    with rejection of points that hit a pole of the v chain.
    """
    tau = t.tau(n + 1)
    checked = 0
    while checked < 5:
        x = Q(rng.randint(1, 60), rng.randint(1, 60))
        eps = Q(rng.randint(1, 60), rng.randint(1, 60))
        try:
            vm, vn = Q(0), x
            prod = Q(1)
            for k in range(n + 1):
                prod *= vn ** (n + 1 - k)
                vp = (k + 1) * eps / vn - vm - 1
                vm, vn = vn, vp
        except ZeroDivisionError:
            continue
        if tau.eval_rat(x, eps) != prod:
            return tau - BiPoly.constant(prod)  # witness; point lost, value kept
        checked += 1
    return None


def _poly_identity(lhs: BiPoly, rhs: BiPoly) -> BiPoly | None:
    diff = lhs - rhs
    return None if diff.is_zero() else diff


def _check_tau_chain_cleared(t, n, rng):
    # cleared-denominator form of the tau_{n+2} chain; same polynomial
    # statement as the u-chain identity
    return _check_u_chain(t, n, rng)


def _check_qp_bridge(t, n, rng):
    d1 = _poly_identity(
        -(t.u[n] * t.q[n - 3]) + _eps_n(n) * t.u[n - 2] * t.u[n - 1],
        t.u[n - 4] * t.u[n + 1])
    if d1 is not None:
        return d1
    return _poly_identity(
        t.u[n - 2] * t.p[n - 3] - _eps_n(n - 2) * t.u[n] * t.u[n - 5],
        t.u[n - 6] * t.u[n + 1])


def _check_u_chain(t, n, rng):
    lhs = (t.u[n + 1] * t.u[n - 4] * t.u[n - 6]
           + _eps_n(n - 2) * t.u[n] * t.u[n - 5] * t.u[n - 4])
    rhs = (_eps_n(n) * t.u[n - 1] * t.u[n - 2] * t.u[n - 6]
           + t.u[n] * t.u[n - 7] * t.u[n - 2])
    return _poly_identity(lhs, rhs)


def _check_u_window(t, n, rng):
    lhs = _eps_n(n + 2) * t.u[n + 1] * t.u[n] * t.u[n - 1]
    rhs = (t.u[n + 3] * t.u[n - 1] * t.u[n - 2]
           + t.u[n + 2] * (t.u[n + 1] * t.u[n - 3] + t.u[n] * t.u[n - 2]))
    return _poly_identity(lhs, rhs)


def _check_q_third_row(t, n, rng):
    # third q-row; the first two are the construction route itself
    lhs = t.q[n] * t.u[n - 3]
    rhs = _eps_n(n + 1) * t.u[n - 1] * t.u[n - 2] - t.u[n + 1] * t.u[n - 4]
    return _poly_identity(lhs, rhs)


def _check_p_rows(t, n, rng):
    d1 = _poly_identity(
        t.p[n] * t.u[n - 1],
        _eps_n(n + 3) * t.u[n + 2] * t.u[n - 3] + t.u[n + 3] * t.u[n - 4])
    if d1 is not None:
        return d1
    return _poly_identity(
        t.p[n] * t.u[n + 1],
        _eps_n(n + 1) * t.u[n + 3] * t.u[n - 2] + t.u[n - 3] * t.u[n + 4])


def _check_qp_difference(t, n, rng):
    eps = BiPoly.eps()
    d1 = _poly_identity(eps * t.u[n] * t.u[n - 1],
                        t.q[n + 1] * t.u[n - 2] - t.u[n + 1] * t.q[n - 2])
    if d1 is not None:
        return d1
    return _poly_identity(eps.scale(3) * t.u[n + 2] * t.u[n - 3],
                          t.p[n] * t.u[n - 1] - t.p[n - 1] * t.u[n])


def _check_q_shifted_square(t, n, rng):
    eps = BiPoly.eps()
    d1 = _poly_identity(
        t.q[n] * t.u[n + 3] * t.u[n + 3],
        t.u[n] * (t.u[n + 5] * t.u[n + 1] + t.u[n + 4] * t.u[n + 2])
        - t.u[n + 3] * eps * t.u[n + 1] * t.u[n + 2])
    if d1 is not None:
        return d1
    return _poly_identity(
        t.q[n] * t.u[n - 3] * t.u[n - 3],
        t.u[n] * (t.u[n - 1] * t.u[n - 5] + t.u[n - 2] * t.u[n - 4])
        + eps * t.u[n - 1] * t.u[n - 2] * t.u[n - 3])


# identity name -> (checker, lowest u index touched at step n, highest)
IDENTITIES = {
    "tau-product": (_check_tau_product, lambda n: (0, n)),
    "tau-chain-cleared": (_check_tau_chain_cleared, lambda n: (n - 7, n + 1)),
    "qp-bridge": (_check_qp_bridge, lambda n: (n - 6, n + 1)),
    "u-chain": (_check_u_chain, lambda n: (n - 7, n + 1)),
    "u-window": (_check_u_window, lambda n: (n - 3, n + 3)),
    "q-third-row": (_check_q_third_row, lambda n: (n - 4, n + 1)),
    "p-rows": (_check_p_rows, lambda n: (n - 4, n + 4)),
    "qp-difference": (_check_qp_difference, lambda n: (n - 3, n + 2)),
    "q-shifted-square": (_check_q_shifted_square, lambda n: (n - 5, n + 5)),
}

_Q_RANGE = range(-2, 10**9)   # q_n defined for n >= -2
_P_RANGE = range(0, 10**9)    # p_n defined for n >= 0


def _identity_applicable(t: UTower, name: str, n: int) -> bool:
    _, span = IDENTITIES[name]
    lo, hi = span(n)
    if lo < -4 or hi not in t.u:
        return False
    needed_q = {"qp-bridge": [n - 3], "qp-difference": [n + 1, n - 2],
                "q-third-row": [n], "q-shifted-square": [n]}.get(name, [])
    needed_p = {"qp-bridge": [n - 3], "p-rows": [n], "qp-difference": [n, n - 1]}.get(name, [])
    return (all(k in _Q_RANGE and k in t.q for k in needed_q)
            and all(k in _P_RANGE and k in t.p for k in needed_p))


def verify_identity(t: UTower, name: str, n: int, seed: int = 0):
    """Check one displayed identity at index n.

    Returns (passed, witness): witness is the nonzero exact difference
    when the identity fails, None otherwise.  Raises KeyError for an
    unknown identity and ValueError if the tower is too short.
    """
    if name not in IDENTITIES:
        raise KeyError(name)
    if not _identity_applicable(t, name, n):
        raise ValueError(f"{name} not applicable at n={n} for this tower")
    checker, _ = IDENTITIES[name]
    witness = checker(t, n, random.Random(f"{name}:{n}:{seed}"))
    return witness is None, witness


def applicable_range(t: UTower, name: str, n_cap: int) -> list[int]:
    return [n for n in range(-2, n_cap + 1) if _identity_applicable(t, name, n)]


# ---------------------------------------------------------------------------
# transfer operators


def transfer_verify(t: UTower, n: int, seed: int = 0) -> dict:
    """Three-step transport checks for the q- and p-chains at index n.

    The 'derived' entries are the exact cleared-denominator relations that
    follow from the q/p rows; the 'printed' entries evaluate the matrices
    exactly as displayed in the source text (state vector second
    component u_{n-2}, and the displayed p-chain second row) at random
    rational points.  A printed mismatch is a reported result, not an
    error: the displayed matrices are inconsistent with the defining rows,
    and the discrepancy is surfaced on purpose.
    """
    report = {"n": n}

    # derived, exact: q_{n+1} u_{n-2} = u_{n+1} q_{n-2} + eps u_n u_{n-1}
    d1 = _poly_identity(t.q[n + 1] * t.u[n - 2],
                        t.u[n + 1] * t.q[n - 2] + BiPoly.eps() * t.u[n] * t.u[n - 1])
    # derived, exact: u_{n+2} u_{n-3} = -u_{n+1} q_{n-2} + (n+2) eps u_n u_{n-1}
    d2 = _poly_identity(t.u[n + 2] * t.u[n - 3],
                        -(t.u[n + 1] * t.q[n - 2])
                        + _eps_n(n + 1) * t.u[n] * t.u[n - 1])
    # derived, exact: p_n u_{n-1} = u_n p_{n-1} + 3 eps u_{n-3} u_{n+2}
    d3 = _poly_identity(t.p[n] * t.u[n - 1],
                        t.u[n] * t.p[n - 1]
                        + BiPoly.eps().scale(3) * t.u[n - 3] * t.u[n + 2])
    # derived, exact: u_{n+3} u_{n-4} = u_n p_{n-1} - (n+1) eps u_{n-3} u_{n+2}
    d4 = _poly_identity(t.u[n + 3] * t.u[n - 4],
                        t.u[n] * t.p[n - 1]
                        - _eps_n(n) * t.u[n - 3] * t.u[n + 2])
    report["derived_ok"] = all(d is None for d in (d1, d2, d3, d4))
    report["derived_witness"] = next((str(d) for d in (d1, d2, d3, d4)
                                      if d is not None), None)

    # printed matrices at sampled rational points
    rng = random.Random(seed ^ n)
    mismatches = {"q_chain": 0, "p_chain": 0}
    samples = 0
    while samples < 5:
        x = Q(rng.randint(1, 40), rng.randint(1, 40))
        e = Q(rng.randint(1, 40), rng.randint(1, 40))
        u = {k: t.u[k].eval_rat(x, e) for k in t.u}
        if any(u[k] == 0 for k in (n - 4, n - 3, n - 2, n - 1)):
            continue
        samples += 1
        qm2 = t.q[n - 2].eval_rat(x, e)
        # printed q-chain: second state component u_{n-2}
        got_q = (u[n + 1] / u[n - 2] * qm2 + e * u[n] / u[n - 2] * u[n - 2])
        got_u = (-u[n + 1] / u[n - 3] * qm2
                 + e * (n + 2) * u[n] / u[n - 3] * u[n - 2])
        if got_q != t.q[n + 1].eval_rat(x, e):
            mismatches["q_chain"] += 1
        if got_u != t.u[n + 2].eval_rat(x, e):
            mismatches["q_chain"] += 1
        # printed p-chain second row
        pm1 = t.p[n - 1].eval_rat(x, e)
        got_p = u[n] / u[n - 1] * pm1 + 3 * e * u[n - 3] / u[n - 1] * u[n + 2]
        got_u3 = (-u[n] / u[n - 4] * pm1
                  - (n + 1) * e * u[n - 3] / u[n - 4] * u[n + 2])
        if got_p != t.p[n].eval_rat(x, e):
            mismatches["p_chain"] += 1
        if got_u3 != t.u[n + 3].eval_rat(x, e):
            mismatches["p_chain"] += 1
    report["printed_matrix_mismatches"] = mismatches
    return report
