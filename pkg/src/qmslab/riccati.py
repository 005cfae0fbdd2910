"""Riccati profiles, Schrödinger potentials and the boundary term.

Everything here lives in the variable s with eps = 1/(6s).  The base
pair (v_0, v_0') comes from the Bessel logarithmic derivative

    h_0 = psi_0'/psi_0,   psi_0 = sqrt(s) K_{1/6}(s),
    v_0 = -(1 + h_0)/2 + 1/(6s),

and all higher v_n, v_n' are transported analytically through the
differentiated recursion -- derivatives are never formed by numerical
differencing on the main path (the tests difference independently).

The Schrödinger residual check uses the logarithmic derivative of
psi_n = G_n phi_n: with G_n' = f_n G_n and phi_n' = -2 v_n phi_n the
ratio L_n = psi_n'/psi_n = f_n - 2 v_n is available in closed form, so
-psi''/psi reduces to -(L_n' + L_n^2) with no quadrature and no
normalization constant.  The eigenvalue is -1 by construction and is
never solved for.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .rationals import Q
from .solver import PrecisionExhausted
from .specfun import GUARD_BITS, Jet, bessel_jet


@dataclass
class RiccatiProfile:
    """v_0..v_n with s-derivatives, at a fixed s > 0 (eps = 1/(6s))."""

    s: mpf
    n: int
    v: list
    vprime: list
    precision: int

    def f(self, n: int) -> mpf:
        """Drift f_n = -1 + eps gamma0^{(n)} - 2 sum_{i=2}^n (-1)^i v_{n-i}."""
        with mp.workprec(self.precision + GUARD_BITS):
            eps = 1 / (6 * self.s)
            acc = -1 + eps * (2 if n % 2 == 0 else 1)
            for i in range(2, n + 1):
                acc -= 2 * (-1) ** i * self.v[n - i]
            return acc

    def f_prime(self, n: int) -> mpf:
        with mp.workprec(self.precision + GUARD_BITS):
            acc = -mpf(2 if n % 2 == 0 else 1) / (6 * self.s ** 2)
            for i in range(2, n + 1):
                acc -= 2 * (-1) ** i * self.vprime[n - i]
            return acc

    def g(self, n: int) -> mpf:
        with mp.workprec(self.precision + GUARD_BITS):
            return mpf(n + 1) / (6 * self.s)


def psi0_jet(s, order: int, precision: int) -> Jet:
    """Jet of psi_0 = sqrt(s) K_{1/6}(s)."""
    return bessel_jet("K", Q(1, 6), mpf(1), s, order, precision)


def h0(s, precision: int) -> mpf:
    """Logarithmic derivative psi_0'/psi_0."""
    j = psi0_jet(s, 1, precision)
    return j.ders[1] / j.ders[0]


def v0_closed_form(s, precision: int) -> tuple[mpf, mpf]:
    """(v_0, v_0') from the Bessel closed form."""
    with mp.workprec(precision + GUARD_BITS):
        s = mpf(s)
        j = psi0_jet(s, 2, precision + GUARD_BITS)
        h = j.ders[1] / j.ders[0]
        hp = j.ders[2] / j.ders[0] - h * h
        v0 = -(1 + h) / 2 + 1 / (6 * s)
        v0p = -hp / 2 - 1 / (6 * s ** 2)
        return v0, v0p


def v_profile(n_max: int, s, precision: int) -> RiccatiProfile:
    """Transport (v_0, v_0') through the differentiated recursion."""
    with mp.workprec(precision + GUARD_BITS):
        s = mpf(s)
        v0, v0p = v0_closed_form(s, precision)
        v, vp = [v0], [v0p]
        for n in range(n_max):
            vm = v[n - 1] if n >= 1 else mpf(0)
            vmp = vp[n - 1] if n >= 1 else mpf(0)
            c = mpf(n + 1) / 6
            if v[n] <= 0:
                raise PrecisionExhausted(
                    f"v_{n} lost positivity at s={mpmath.nstr(s, 8)}")
            v.append(c / (s * v[n]) - vm - 1)
            vp.append(-c / (s ** 2 * v[n]) - c * vp[n] / (s * v[n] ** 2) - vmp)
        return RiccatiProfile(s, n_max, v, vp, precision)


def riccati_residual(profile: RiccatiProfile, n: int) -> mpf:
    """|1/2 v_n' - v_n^2 + f_n v_n + g_n|."""
    with mp.workprec(profile.precision + GUARD_BITS):
        vn, vnp = profile.v[n], profile.vprime[n]
        return abs(vnp / 2 - vn * vn + profile.f(n) * vn + profile.g(n))


def f_recursion_residual(profile: RiccatiProfile, n: int) -> mpf:
    """|f_{n+1} + f_n - 1/(2s) + 2(v_{n-1} + 1)| from the induction bracket."""
    with mp.workprec(profile.precision + GUARD_BITS):
        vm = profile.v[n - 1] if n >= 1 else mpf(0)
        return abs(profile.f(n + 1) + profile.f(n)
                   - 1 / (2 * profile.s) + 2 * (vm + 1))


def potential_W(n: int, s, precision: int,
                profile: RiccatiProfile | None = None) -> mpf:
    """W_n = f_n' + f_n^2 - 1 + 4(n+1)/(6s)."""
    with mp.workprec(precision + GUARD_BITS):
        s = mpf(s)
        if profile is None:
            profile = v_profile(max(n - 2, 0), s, precision)
        fn, fnp = profile.f(n), profile.f_prime(n)
        return fnp + fn * fn - 1 + 4 * mpf(n + 1) / (6 * s)


def schrodinger_residual(n: int, s, precision: int) -> mpf:
    """Relative residual of -psi_n'' + W_n psi_n = -psi_n at one point."""
    with mp.workprec(precision + GUARD_BITS):
        s = mpf(s)
        profile = v_profile(max(n, 1), s, precision)
        L = profile.f(n) - 2 * profile.v[n]
        Lp = profile.f_prime(n) - 2 * profile.vprime[n]
        W = potential_W(n, s, precision, profile=profile)
        return abs(-(Lp + L * L) + W + 1)


def schrodinger_check(n: int, s_grid, precision: int) -> mpf:
    """Max Schrödinger residual over a grid; deterministic reduction order."""
    worst = mpf(0)
    for s in s_grid:
        worst = max(worst, schrodinger_residual(n, s, precision))
    return worst


def scaled_ground_family(lam, s, precision: int) -> mpf:
    """psi_0(lam s): exposed for exploring the scale family, nothing asserted."""
    return psi0_jet(mpf(lam) * mpf(s), 0, precision).value


# ---------------------------------------------------------------------------
# boundary term of the quadratic-form identity


def _F(s, precision: int) -> mpf:
    """F(s) = psi (psi/(3s) - psi') for psi = sqrt(s) K_{1/6}(s)."""
    with mp.workprec(precision + GUARD_BITS):
        s = mpf(s)
        j = psi0_jet(s, 1, precision)
        return j.value * (j.value / (3 * s) - j.ders[1])


def boundary_term(precision: int, nodes: int = 6) -> mpf:
    """[psi (psi/(3s) - psi')] from 0 to infinity.

    F approaches its s -> 0 limit in powers of s^(1/3), so the limit is
    taken by Richardson extrapolation on the nodes s_j = s0 * 8^-j
    (s^(1/3) halving per node); the s -> infinity limit decays like
    e^(-2s) and is evaluated directly.
    """
    with mp.workprec(precision + 8 * GUARD_BITS):
        s0 = mpf(2) ** (-precision // 4)
        samples = [_F(s0 * mpf(8) ** (-j), precision + 8 * GUARD_BITS)
                   for j in range(nodes)]
        # Richardson in t = s^(1/3); t halves per node
        table = list(samples)
        for level in range(1, nodes):
            factor = mpf(2) ** level
            table = [(factor * table[j + 1] - table[j]) / (factor - 1)
                     for j in range(len(table) - 1)]
        F0 = table[0]
        Finf = _F(mpf(40) + precision, precision)
        return Finf - F0


def boundary_term_oracle(precision: int) -> mpf:
    """Independent small-s expansion value.

    K_{1/6}(s) = a' s^(-1/6) + b' s^(1/6) + O(s^(11/6)) with
    a' = Gamma(1/6) 2^(1/6) / 2 and b' = Gamma(-1/6) 2^(-1/6) / 2 gives
    F(0) = -a'b'/3 = -Gamma(1/6)Gamma(-1/6)/12, hence a boundary value
    of Gamma(1/6)Gamma(-1/6)/12 = -pi by the reflection formula.
    """
    with mp.workprec(precision + GUARD_BITS):
        a = mpmath.gamma(mpf(1) / 6) * mpf(2) ** (mpf(1) / 6) / 2
        b = mpmath.gamma(-mpf(1) / 6) * mpf(2) ** (-mpf(1) / 6) / 2
        return a * b / 3


def quadratic_form_identity(precision: int) -> dict:
    """Both sides of the integrated factorization identity.

    lhs  = integral of psi (-psi'' - (2/(9s^2)) psi),
    rhs  = integral of (-psi' + psi/(3s))^2 + boundary term.
    """
    with mp.workprec(precision + GUARD_BITS):
        def lhs_integrand(s):
            j = psi0_jet(s, 2, precision)
            return j.value * (-j.ders[2] - 2 / (9 * s * s) * j.value)

        def rhs_integrand(s):
            j = psi0_jet(s, 1, precision)
            return (-j.ders[1] + j.value / (3 * s)) ** 2

        lhs = mpmath.quad(lhs_integrand, [0, 1, mpmath.inf])
        rhs_int = mpmath.quad(rhs_integrand, [0, 1, mpmath.inf])
        bterm = boundary_term(precision)
        return {"lhs": lhs, "rhs_integral": rhs_int, "boundary": bterm,
                "rhs": rhs_int + bterm}
