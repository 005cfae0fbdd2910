"""Exact arbitrary-size rational scalars.

`Q` is the coefficient type used by every exact computation in the
package.  It is gmpy2's `mpq` (always stored in lowest terms with a
positive denominator), which is a drop-in, much faster replacement for
`fractions.Fraction` at the coefficient sizes the tau tower produces.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz
import mpmath

Q = mpq

QLike = object  # int | str | mpq; kept loose on purpose


def rat(value, den=None) -> Q:
    """Build an exact rational from int/str ('num/den' accepted)."""
    if den is not None:
        return mpq(value, den)
    return mpq(value)


def rat_str(q) -> str:
    """Canonical 'num/den' (or plain integer) string form."""
    return str(mpq(q))


def rat_to_mpf(q, prec: int | None = None) -> mpmath.mpf:
    """Convert an exact rational to an mpf at the current (or given) precision."""
    q = mpq(q)
    if prec is None:
        return mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))
    with mpmath.workprec(prec):
        return mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))


def is_integer(q) -> bool:
    return mpq(q).denominator == mpz(1)
