"""Dense univariate and sparse bivariate polynomials over the exact rationals.

UniPoly stores ascending coefficients in one variable (conventionally z,
or eps for truncated series work).  BiPoly stores a sparse monomial map
x^a * eps^b -> coefficient.  Exact division back-multiplies to verify and
raises NotDivisible otherwise; a NotDivisible escaping from the tau tower
means a polynomiality identity failed, which is treated as a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .rationals import Q, rat, rat_str, rat_to_mpf

ZERO = Q(0)
ONE = Q(1)


class NotDivisible(Exception):
    """Exact polynomial division left a nonzero remainder."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


# ---------------------------------------------------------------------------
# univariate


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial; coeffs ascending, trailing zeros stripped."""

    coeffs: tuple
    var: str = "z"

    @staticmethod
    def from_coeffs(coeffs, var="z") -> "UniPoly":
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return UniPoly(tuple(cs), var)

    @staticmethod
    def zero(var="z") -> "UniPoly":
        return UniPoly((), var)

    @staticmethod
    def constant(c, var="z") -> "UniPoly":
        return UniPoly.from_coeffs([c], var)

    @staticmethod
    def x(var="z") -> "UniPoly":
        return UniPoly.from_coeffs([0, 1], var)

    @property
    def degree(self) -> int:
        # zero polynomial reports -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Q:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly.from_coeffs(
            [self[k] + other[k] for k in range(n)], self.var)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly.from_coeffs(
            [self[k] - other[k] for k in range(n)], self.var)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs), self.var)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.var)
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly.from_coeffs(out, self.var)

    __rmul__ = __mul__

    def scale(self, c) -> "UniPoly":
        c = Q(c)
        if c == 0:
            return UniPoly.zero(self.var)
        return UniPoly(tuple(a * c for a in self.coeffs), self.var)

    def shift_var(self, a) -> "UniPoly":
        """Return p(z + a), expanded exactly via Horner in (z + a)."""
        a = Q(a)
        out = UniPoly.zero(self.var)
        za = UniPoly.from_coeffs([a, 1], self.var)
        for c in reversed(self.coeffs):
            out = out * za + UniPoly.constant(c, self.var)
        return out

    def eval_rat(self, point) -> Q:
        point = Q(point)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def eval_real(self, point: mpmath.mpf) -> mpmath.mpf:
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * point + rat_to_mpf(c)
        return acc

    def divmod(self, den: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if den.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd, lead = den.degree, den.coeffs[-1]
        quot = [ZERO] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] / lead
            if c == 0:
                continue
            quot[k - dd] = c
            for j, b in enumerate(den.coeffs):
                rem[k - dd + j] -= c * b
        return (UniPoly.from_coeffs(quot, self.var),
                UniPoly.from_coeffs(rem, self.var))

    def exact_div(self, den: "UniPoly") -> "UniPoly":
        q, r = self.divmod(den)
        if not r.is_zero() or q * den != self:
            raise NotDivisible(f"{self} not divisible by {den}", remainder=r)
        return q

    def derivative(self) -> "UniPoly":
        return UniPoly.from_coeffs(
            [Q(k) * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def truncate(self, order: int) -> "UniPoly":
        """Drop all terms of degree > order."""
        return UniPoly.from_coeffs(self.coeffs[:order + 1], self.var)

    def min_nonzero_degree(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return None

    def to_json(self) -> dict:
        return {"vars": [self.var], "coeffs": [rat_str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(obj: dict) -> "UniPoly":
        return UniPoly.from_coeffs([rat(c) for c in obj["coeffs"]],
                                   obj["vars"][0])

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(rat_str(c))
            else:
                mono = self.var if k == 1 else f"{self.var}^{k}"
                parts.append(mono if c == 1 else f"{rat_str(c)}*{mono}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# bivariate (x, eps)


@dataclass(frozen=True)
class BiPoly:
    """Sparse bivariate polynomial in (x, eps); no stored zero coefficients."""

    terms: dict = field(default_factory=dict)  # (deg_x, deg_eps) -> Q

    @staticmethod
    def from_terms(terms: dict) -> "BiPoly":
        return BiPoly({k: Q(v) for k, v in terms.items() if Q(v) != 0})

    @staticmethod
    def zero() -> "BiPoly":
        return BiPoly({})

    @staticmethod
    def constant(c) -> "BiPoly":
        return BiPoly.from_terms({(0, 0): c})

    @staticmethod
    def x() -> "BiPoly":
        return BiPoly.from_terms({(1, 0): 1})

    @staticmethod
    def eps() -> "BiPoly":
        return BiPoly.from_terms({(0, 1): 1})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def deg_x(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    @property
    def deg_eps(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    @property
    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, ZERO) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return BiPoly(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other) -> "BiPoly":
        if not isinstance(other, BiPoly):
            return self.scale(other)
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                s = out.get(k, ZERO) + c1 * c2
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return BiPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "BiPoly":
        c = Q(c)
        if c == 0:
            return BiPoly.zero()
        return BiPoly({k: v * c for k, v in self.terms.items()})

    def coeff_in_x(self, a: int) -> UniPoly:
        """Coefficient of x^a, as a polynomial in eps."""
        cs: dict = {}
        for (ax, b), c in self.terms.items():
            if ax == a:
                cs[b] = c
        if not cs:
            return UniPoly.zero("eps")
        out = [ZERO] * (max(cs) + 1)
        for b, c in cs.items():
            out[b] = c
        return UniPoly.from_coeffs(out, "eps")

    @staticmethod
    def from_x_coeffs(coeffs: list[UniPoly]) -> "BiPoly":
        terms: dict = {}
        for a, p in enumerate(coeffs):
            for b, c in enumerate(p.coeffs):
                if c != 0:
                    terms[(a, b)] = c
        return BiPoly(terms)

    def exact_div(self, den: "BiPoly") -> "BiPoly":
        """Exact division in Q[x, eps], long division in x with exact
        eps-coefficient division at each step; verified by back-multiplication."""
        if den.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        num = self
        dd = den.deg_x
        dlead = den.coeff_in_x(dd)
        qx: dict[int, UniPoly] = {}
        while not num.is_zero():
            dn = num.deg_x
            if dn < dd:
                raise NotDivisible("x-degree dropped below divisor",
                                   remainder=num)
            try:
                c = num.coeff_in_x(dn).exact_div(dlead)
            except NotDivisible as exc:
                raise NotDivisible("leading eps-coefficient not divisible",
                                   remainder=num) from exc
            qx[dn - dd] = c
            term = BiPoly.from_x_coeffs([UniPoly.zero("eps")] * (dn - dd) + [c])
            num = num - term * den
        coeffs = [qx.get(a, UniPoly.zero("eps"))
                  for a in range(max(qx, default=0) + 1)]
        quot = BiPoly.from_x_coeffs(coeffs)
        if quot * den != self:
            raise NotDivisible("back-multiplication mismatch", remainder=num)
        return quot

    def eval_rat(self, x, eps) -> Q:
        x, eps = Q(x), Q(eps)
        acc = ZERO
        for (a, b), c in self.terms.items():
            acc += c * x**a * eps**b
        return acc

    def eval_real(self, x: mpmath.mpf, eps: mpmath.mpf) -> mpmath.mpf:
        acc = mpmath.mpf(0)
        for (a, b), c in sorted(self.terms.items()):
            acc += rat_to_mpf(c) * x**a * eps**b
        return acc

    def to_json(self) -> list:
        return [{"x": a, "eps": b, "c": rat_str(self.terms[(a, b)])}
                for a, b in sorted(self.terms)]

    @staticmethod
    def from_json(obj: list) -> "BiPoly":
        return BiPoly.from_terms(
            {(rec["x"], rec["eps"]): rat(rec["c"]) for rec in obj})

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for (a, b) in sorted(self.terms):
            c = self.terms[(a, b)]
            mono = "*".join(
                ([] if a == 0 else ["x" if a == 1 else f"x^{a}"])
                + ([] if b == 0 else ["eps" if b == 1 else f"eps^{b}"]))
            if not mono:
                parts.append(rat_str(c))
            else:
                parts.append(mono if c == 1 else f"{rat_str(c)}*{mono}")
        return " + ".join(parts)
