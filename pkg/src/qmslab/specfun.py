"""Arbitrary-precision reals, Gamma, fractional-order modified Bessel
functions, and Taylor jets of s -> sqrt(s) B_nu(kappa s).

The heavy numerics (Gamma, I_nu, K_nu at arbitrary precision) are
delegated to mpmath, evaluated with guard bits behind the contracts
below; the Wronskian and reflection tests in the suite are the accuracy
oracle.  Jets, and the closed derivative recurrences that turn a Bessel
jet into a finite combination of orders nu + k, are implemented here --
no numerical differentiation anywhere in the jet path.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .rationals import Q, rat_to_mpf

GUARD_BITS = 16


class PoleError(Exception):
    """Gamma evaluated at a nonpositive integer."""


def to_decimal(x, precision: int) -> str:
    return mpmath.nstr(mpf(x), max(int(precision * 0.30103), 8))


def gamma_fn(x, precision: int) -> mpf:
    """Gamma(x) with relative error within the contract at `precision` bits."""
    with mp.workprec(precision + GUARD_BITS):
        x = mpf(x)
        if x <= 0 and x == mpmath.floor(x):
            raise PoleError(f"gamma pole at {x}")
        return mpmath.gamma(x)


def bessel_IK(kind: str, nu, x, precision: int) -> mpf:
    """Modified Bessel function I_nu or K_nu at x > 0."""
    if kind not in ("I", "K"):
        raise ValueError("kind must be 'I' or 'K'")
    with mp.workprec(precision + 2 * GUARD_BITS):
        x = mpf(x)
        if x <= 0:
            raise ValueError("x must be positive")
        nu = rat_to_mpf(Q(nu))
        f = mpmath.besseli if kind == "I" else mpmath.besselk
        return f(nu, x)


# ---------------------------------------------------------------------------
# jets


@dataclass(frozen=True)
class Jet:
    """Value and derivatives d^0..d^m of a function at a point.

    Arithmetic follows the Leibniz rule at the stored order; combining
    jets of different orders truncates to the shorter one.
    """

    point: mpf
    ders: tuple

    @property
    def order(self) -> int:
        return len(self.ders) - 1

    @property
    def value(self) -> mpf:
        return self.ders[0]

    @staticmethod
    def constant(c, point, order: int) -> "Jet":
        return Jet(mpf(point), (mpf(c),) + (mpf(0),) * order)

    @staticmethod
    def variable(point, order: int) -> "Jet":
        ders = [mpf(point), mpf(1)] + [mpf(0)] * max(order - 1, 0)
        return Jet(mpf(point), tuple(ders[:order + 1]))

    def __add__(self, other: "Jet") -> "Jet":
        m = min(self.order, other.order)
        return Jet(self.point, tuple(a + b for a, b in
                                     zip(self.ders[:m + 1], other.ders[:m + 1])))

    def __sub__(self, other: "Jet") -> "Jet":
        m = min(self.order, other.order)
        return Jet(self.point, tuple(a - b for a, b in
                                     zip(self.ders[:m + 1], other.ders[:m + 1])))

    def __neg__(self) -> "Jet":
        return Jet(self.point, tuple(-a for a in self.ders))

    def scale(self, c) -> "Jet":
        c = mpf(c)
        return Jet(self.point, tuple(c * a for a in self.ders))

    def __mul__(self, other: "Jet") -> "Jet":
        m = min(self.order, other.order)
        out = []
        for k in range(m + 1):
            acc = mpf(0)
            for j in range(k + 1):
                acc += mpmath.binomial(k, j) * self.ders[j] * other.ders[k - j]
            out.append(acc)
        return Jet(self.point, tuple(out))

    def __truediv__(self, other: "Jet") -> "Jet":
        m = min(self.order, other.order)
        if other.ders[0] == 0:
            raise ZeroDivisionError("jet division by zero value")
        out = []
        for k in range(m + 1):
            acc = self.ders[k]
            for j in range(k):
                acc -= mpmath.binomial(k, j) * out[j] * other.ders[k - j]
            out.append(acc / other.ders[0])
        return Jet(self.point, tuple(out))

    def derivative_shift(self) -> "Jet":
        """The jet of f', one order lower."""
        if self.order < 1:
            raise ValueError("order-0 jet has no derivative jet")
        return Jet(self.point, self.ders[1:])

    def log_second_derivative(self) -> mpf:
        """(ln f)'' = f''/f - (f'/f)^2; needs order >= 2."""
        f, fp, fpp = self.ders[0], self.ders[1], self.ders[2]
        return fpp / f - (fp / f) ** 2


def sqrt_s_jet(s: mpf, order: int) -> Jet:
    """Jet of sqrt(s): d_k = (1/2)(1/2-1)...(1/2-k+1) s^(1/2-k)."""
    ders, c = [], mpf(1)
    root = mpmath.sqrt(s)
    for k in range(order + 1):
        ders.append(c * root / s**k)
        c *= mpf(1) / 2 - k
    return Jet(mpf(s), tuple(ders))


def _bessel_derivative_combos(kind: str, order: int) -> list[dict]:
    """Order-offset -> coefficient maps for B^(j), j = 0..order.

    Uses K' = -(K_{nu-1} + K_{nu+1})/2 resp. I' = (I_{nu-1} + I_{nu+1})/2,
    so each derivative is a finite combination of shifted orders.
    """
    sign = Q(-1, 2) if kind == "K" else Q(1, 2)
    combos = [{0: Q(1)}]
    for _ in range(order):
        nxt: dict = {}
        for off, c in combos[-1].items():
            for d in (-1, 1):
                nxt[off + d] = nxt.get(off + d, Q(0)) + sign * c
        combos.append(nxt)
    return combos


def bessel_jet(kind: str, nu, kappa, s, order: int, precision: int) -> Jet:
    """Jet of f(s) = sqrt(s) B_nu(kappa s) via the closed recurrences."""
    with mp.workprec(precision + 2 * GUARD_BITS):
        s, kappa = mpf(s), mpf(kappa)
        if s <= 0 or kappa <= 0:
            raise ValueError("s and kappa must be positive")
        nu = Q(nu)
        combos = _bessel_derivative_combos(kind, order)
        offsets = sorted({off for combo in combos for off in combo})
        vals = {off: bessel_IK(kind, nu + off, kappa * s,
                               precision + 2 * GUARD_BITS)
                for off in offsets}
        ders = []
        for j, combo in enumerate(combos):
            acc = mpf(0)
            for off, c in combo.items():
                acc += rat_to_mpf(c) * vals[off]
            ders.append(kappa**j * acc)
        return sqrt_s_jet(s, order) * Jet(s, tuple(ders))
