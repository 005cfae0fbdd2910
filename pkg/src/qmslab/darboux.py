"""Factorization ladder on the inverse-square-potential Hamiltonian.

The base operator H0 = -d^2/ds^2 - 2/(9 s^2) factorizes as
(d + h_0)(-d + h_0) - 1 with h_0 = psi_0'/psi_0, psi_0 = sqrt(s)
K_{1/6}(s).  Repeated factorization with shift constants
kappa_1 = 1 < kappa_2 < ... produces potentials

    W_N = W_{N-1} + 2 h_N' = W_0 + 2 sum_{i<=N} h_i',   W_0 = -2/(9 s^2),

whose eigenfunctions chi_N = A_{N-1} ... A_1 (sqrt(s) B_{1/6}(kappa_N s))
are built by applying the first-order operators A_i = d + h_i with
h_i = -chi_i'/chi_i (i >= 1; note the sign differs from h_0).

All evaluation is pointwise through Taylor jets: a chi_N jet of order m
consumes a base Bessel jet of order exactly m + N - 1, and every
division is by an intermediate chi_i value.  Zeros of intermediates are
refused (NodeEncountered), not continued through.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .rationals import Q
from .specfun import GUARD_BITS, Jet, bessel_jet


class NodeEncountered(Exception):
    """An intermediate chi_i is numerically indistinguishable from zero."""


@dataclass(frozen=True)
class LadderSpec:
    """Shift constants and Bessel kinds, one (kappa_i, kind_i) per level.

    kappa_1 must equal 1 and the kappa_i must be strictly increasing.
    Kind 'K' decays like e^(-kappa s) at +infinity, 'I' grows like
    e^(+kappa s).
    """

    levels: tuple

    def __post_init__(self):
        if not self.levels:
            raise ValueError("ladder needs at least one level")
        kappas = [mpf(k) for k, _ in self.levels]
        if kappas[0] != 1:
            raise ValueError("kappa_1 must be 1")
        if any(b <= a for a, b in zip(kappas, kappas[1:])):
            raise ValueError("kappas must be strictly increasing")
        if any(kind not in ("K", "I") for _, kind in self.levels):
            raise ValueError("kinds must be 'K' or 'I'")

    @staticmethod
    def make(kappas, kinds) -> "LadderSpec":
        if len(kappas) != len(kinds):
            raise ValueError("kappas and kinds must have equal length")
        return LadderSpec(tuple(zip([mpf(k) for k in kappas], kinds)))

    @staticmethod
    def all_K(kappas) -> "LadderSpec":
        return LadderSpec.make(kappas, ["K"] * len(kappas))

    def __len__(self) -> int:
        return len(self.levels)

    def kappa(self, i: int) -> mpf:
        return mpf(self.levels[i - 1][0])

    def kind(self, i: int) -> str:
        return self.levels[i - 1][1]


NU = Q(1, 6)


def _is_node(jet: Jet, precision: int) -> bool:
    """True when the jet value is lost in rounding noise at this precision.

    The comparison scale is |f'| (1 + s), not an absolute floor, so
    exponentially small but well-resolved values (f ~ e^(-kappa s) with
    f' ~ -kappa f) are not mistaken for zeros.
    """
    scale = abs(jet.ders[1]) * (1 + abs(jet.point)) if jet.order >= 1 else mpf(1)
    return abs(jet.value) <= mpf(2) ** (-(precision - 32)) * max(scale, abs(jet.value))


def _apply_A(h_source: Jet, target: Jet, precision: int) -> Jet:
    """(d + h) target with h = -h_source'/h_source; drops one jet order."""
    if _is_node(h_source, precision):
        raise NodeEncountered(
            f"intermediate function ~ 0 at s={mpmath.nstr(h_source.point, 8)}")
    h = -(h_source.derivative_shift() / h_source)
    return target.derivative_shift() + h * target


def ladder_chi(spec: LadderSpec, N: int, s, order: int, precision: int) -> Jet:
    """Jet of chi_N at s to the given order."""
    if not 1 <= N <= len(spec):
        raise ValueError(f"N must be in [1, {len(spec)}]")
    with mp.workprec(precision + 2 * GUARD_BITS):
        s = mpf(s)
        chis = _chi_tower(spec, N, s, order, precision)
        return chis[N]


def _chi_tower(spec: LadderSpec, N: int, s: mpf, order: int,
               precision: int) -> dict:
    """Jets chi_1..chi_N; chi_i carries order `order` + (N - i) extra."""
    chis = {}
    for i in range(1, N + 1):
        # chi_i is consumed by the i+1..N applications above it, each of
        # which costs one order; base order m + i - 1 for the top level.
        m = order + (N - i)
        base = bessel_jet(spec.kind(i), NU, spec.kappa(i), s,
                          m + i - 1, precision)
        assert base.order == m + i - 1
        cur = base
        for j in range(1, i):
            cur = _apply_A(chis[j], cur, precision)
        assert cur.order == m
        chis[i] = cur
    return chis


def h_level(spec: LadderSpec, i: int, s, order: int, precision: int) -> Jet:
    """Jet of h_i = -chi_i'/chi_i (i >= 1)."""
    chi = ladder_chi(spec, i, s, order + 1, precision)
    if _is_node(chi, precision):
        raise NodeEncountered(f"chi_{i} ~ 0 at s={mpmath.nstr(mpf(s), 8)}")
    return -(chi.derivative_shift() / chi)


def W0(s, precision: int) -> mpf:
    with mp.workprec(precision + GUARD_BITS):
        s = mpf(s)
        return -2 / (9 * s * s)


def ladder_W(spec: LadderSpec, N: int, s, precision: int) -> mpf:
    """W_N = W_0 + 2 sum_{i<=N} h_i' from order-2 jets of chi_1..chi_N.

    Each step of the factorization chain adds 2 h_i' with
    h_i = -chi_i'/chi_i, so h_i' = -(ln chi_i)''.
    """
    with mp.workprec(precision + 2 * GUARD_BITS):
        s = mpf(s)
        acc = W0(s, precision)
        if N == 0:
            return acc
        chis = _chi_tower(spec, N, s, 2, precision)
        for i in range(1, N + 1):
            if _is_node(chis[i], precision):
                raise NodeEncountered(
                    f"chi_{i} ~ 0 at s={mpmath.nstr(s, 8)}")
            acc -= 2 * chis[i].log_second_derivative()
        return acc


def ladder_W_factorized(spec: LadderSpec, N: int, s, precision: int) -> mpf:
    """W_{N-1} by the alternative route h_N^2 - h_N' - kappa_N^2."""
    with mp.workprec(precision + 2 * GUARD_BITS):
        h = h_level(spec, N, s, 1, precision)
        return h.value ** 2 - h.ders[1] - spec.kappa(N) ** 2


def ladder_W_raised(spec: LadderSpec, N: int, s, precision: int) -> mpf:
    """W_N by the companion route h_N^2 + h_N' - kappa_N^2."""
    with mp.workprec(precision + 2 * GUARD_BITS):
        h = h_level(spec, N, s, 1, precision)
        return h.value ** 2 + h.ders[1] - spec.kappa(N) ** 2


def eigen_residual(spec: LadderSpec, N: int, s, precision: int) -> mpf:
    """| -chi_N'' + W_{N-1} chi_N + kappa_N^2 chi_N | / max(|chi_N|, 1)."""
    with mp.workprec(precision + 2 * GUARD_BITS):
        s = mpf(s)
        chi = ladder_chi(spec, N, s, 2, precision)
        W_prev = ladder_W(spec, N - 1, s, precision)
        num = abs(-chi.ders[2] + W_prev * chi.value
                  + spec.kappa(N) ** 2 * chi.value)
        return num / max(abs(chi.value), mpf(1))


def base_equation_residual(kappa, kind: str, s, precision: int) -> mpf:
    """|(-d^2 - 2/(9s^2)) f + kappa^2 f| for f = sqrt(s) B_{1/6}(kappa s)."""
    with mp.workprec(precision + 2 * GUARD_BITS):
        s = mpf(s)
        j = bessel_jet(kind, NU, mpf(kappa), s, 2, precision)
        return abs(-j.ders[2] + W0(s, precision) * j.value
                   + mpf(kappa) ** 2 * j.value)


def factorization_base_residual(s, precision: int) -> mpf:
    """|(d + h_0)(-d + h_0) psi - psi - (-psi'' + W_0 psi)| for the base pair.

    h_0 = psi'/psi with psi = sqrt(s) K_{1/6}(s); note the opposite sign
    convention from the h_i of the upper levels.
    """
    with mp.workprec(precision + 2 * GUARD_BITS):
        s = mpf(s)
        psi = bessel_jet("K", NU, mpf(1), s, 3, precision)
        h0 = psi.derivative_shift() / psi      # order 2
        inner = -psi.derivative_shift() + h0 * psi   # (-d + h_0) psi, order 2
        outer = inner.ders[1] + h0.value * inner.value  # (d + h_0) applied
        lhs = outer - psi.value
        rhs = -psi.ders[2] + W0(s, precision) * psi.value
        return abs(lhs - rhs)


def wronskian_route_residual(s, precision: int) -> mpf:
    """chi_2 built two equivalent ways for kappa = (1, 2), all K.

    Direct route chi_tilde' - (chi_1'/chi_1) chi_tilde versus the
    Wronskian form (chi_1 chi_tilde' - chi_1' chi_tilde)/chi_1.
    """
    with mp.workprec(precision + 2 * GUARD_BITS):
        s = mpf(s)
        spec = LadderSpec.all_K([1, 2])
        chi1 = bessel_jet("K", NU, mpf(1), s, 1, precision)
        tilde = bessel_jet("K", NU, mpf(2), s, 1, precision)
        direct = ladder_chi(spec, 2, s, 0, precision).value
        wron = (chi1.value * tilde.ders[1]
                - chi1.ders[1] * tilde.value) / chi1.value
        return abs(direct - wron)


def asymptotic_signature(spec: LadderSpec, N: int, precision: int,
                         s=mpf(60)) -> dict:
    """Large-s check for all-K ladders.

    (-1)^(N-1) chi_N e^(+kappa_N s) should approach
    prod_{i<N}(kappa_N - kappa_i) * sqrt(pi/(2 kappa_N)), the product
    prefactor times the leading K-Bessel amplitude.
    """
    if any(kind != "K" for _, kind in spec.levels[:N]):
        raise ValueError("asymptotic signature check is for all-K ladders")
    with mp.workprec(precision + 2 * GUARD_BITS):
        s = mpf(s)
        chi = ladder_chi(spec, N, s, 0, precision).value
        kN = spec.kappa(N)
        measured = (-1) ** (N - 1) * chi * mpmath.exp(kN * s)
        expected = mpmath.sqrt(mp.pi / (2 * kN))
        for i in range(1, N):
            expected *= kN - spec.kappa(i)
        return {"measured": measured, "expected": expected,
                "relative_gap": abs(measured - expected) / abs(expected)}


def consistency_report(spec: LadderSpec, N: int, s, precision: int) -> dict:
    """Residuals tying the ladder together at one point s."""
    with mp.workprec(precision + 2 * GUARD_BITS):
        s = mpf(s)
        out = {"s": s, "N": N}
        out["eigen"] = eigen_residual(spec, N, s, precision)
        out["w_two_route"] = abs(ladder_W(spec, N - 1, s, precision)
                                 - ladder_W_factorized(spec, N, s, precision))
        out["w_raised_route"] = abs(ladder_W(spec, N, s, precision)
                                    - ladder_W_raised(spec, N, s, precision))
        chiN = ladder_chi(spec, N, s, 2, precision)
        out["telescoping"] = abs(
            ladder_W(spec, N, s, precision)
            - ladder_W(spec, N - 1, s, precision)
            + 2 * chiN.log_second_derivative())
        return out
