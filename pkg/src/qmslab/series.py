"""Asymptotic-expansion polynomial families of both surfaces.

Three memoized families of exact polynomials in z:

* parabolic_P(k): degree k, parity and leading sign (-1)^k, generated by
  the quadratic convolution recursion with shifts z +- 1,
* gamma_poly(l): the eps-expansion coefficients of the Riccati drift f_n,
* cubic_P(l): degree 2l, even, generated by the triple convolution with
  shifts z +- 1, z +- 2.

Truncated series for v_n and f_n come in a symbolic flavor (a polynomial
in eps, used by the exact residual tests) and a numeric flavor (used to
seed the shooting solvers).  The series are asymptotic, so the numeric
evaluators also report the magnitude of the first omitted term.
"""

from __future__ import annotations

import threading

import mpmath

from .polynomials import Q, UniPoly
from .rationals import rat_to_mpf

DEFAULT_ORDER = 6

_lock = threading.RLock()
_parabolic_P: list[UniPoly] = []
_gamma: list[UniPoly] = []
_cubic_P: list[UniPoly] = []


def _z_plus(a) -> UniPoly:
    return UniPoly.from_coeffs([a, 1])


def parabolic_P(k: int) -> UniPoly:
    """P_k for the parabolic surface series v_n = (n+1) eps sum eps^k P_k(n+1)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    with _lock:
        if not _parabolic_P:
            _parabolic_P.append(UniPoly.constant(1))
        while len(_parabolic_P) <= k:
            m = len(_parabolic_P) - 1  # building P_{m+1}
            acc = UniPoly.zero()
            for i in range(m + 1):
                j = m - i
                pi = _parabolic_P[i]
                bracket = (_z_plus(1) * pi.shift_var(1)
                           + _z_plus(-1) * pi.shift_var(-1))
                acc = acc + _parabolic_P[j] * bracket
            _parabolic_P.append(-acc)
        return _parabolic_P[k]


def gamma_poly(l: int) -> UniPoly:
    """gamma_l, solved order by order from the Riccati-compatible recursion."""
    if l < 0:
        raise ValueError("l must be >= 0")
    with _lock:
        while len(_gamma) <= l:
            k = len(_gamma)  # building gamma_k
            z = UniPoly.x()
            acc = parabolic_P(k + 1) + parabolic_P(k).scale(3 * (k + 1))
            conv = UniPoly.zero()
            for i in range(k + 1):
                conv = conv + parabolic_P(i) * parabolic_P(k - i)
            acc = acc + z * conv
            for lo in range(k):
                acc = acc - _gamma[lo] * parabolic_P(k - lo)
            _gamma.append(acc)
        return _gamma[l]


def cubic_P(l: int) -> UniPoly:
    """P_l for the cubic surface series v_n = (n+1) eps (1 + eps^2 P_1 + ...)."""
    if l < 0:
        raise ValueError("l must be >= 0")
    with _lock:
        if not _cubic_P:
            _cubic_P.append(UniPoly.constant(1))
        while len(_cubic_P) <= l:
            m = len(_cubic_P) - 1  # building P_{m+1}
            acc = UniPoly.zero()
            for k in range(m + 1):
                for i in range(m - k + 1):
                    j = m - k - i
                    pk, pi, pj = _cubic_P[k], _cubic_P[i], _cubic_P[j]
                    bracket = (
                        pi.shift_var(1) * pj.shift_var(-1)
                        * (_z_plus(1) * _z_plus(-1))
                        + pi.shift_var(1) * pj.shift_var(2)
                        * (_z_plus(1) * _z_plus(2))
                        + pi.shift_var(-1) * pj.shift_var(-2)
                        * (_z_plus(-1) * _z_plus(-2)))
                    acc = acc + pk * bracket
            _cubic_P.append(-acc)
        return _cubic_P[l]


def check_family_invariants(flavor: str, k: int) -> None:
    """Assert the structural invariants of table entry k; raises on violation."""
    if flavor == "parabolic-P":
        p = parabolic_P(k)
        assert p.degree == k, f"P_{k} degree {p.degree} != {k}"
        sign = 1 if k % 2 == 0 else -1
        assert sign * p.coeffs[-1] > 0, f"P_{k} leading sign wrong"
        for d, c in enumerate(p.coeffs):
            if (d - k) % 2 != 0:
                assert c == 0, f"P_{k} parity violated at degree {d}"
    elif flavor == "gamma":
        g = gamma_poly(k)
        if k > 0:
            assert g.eval_rat(1) + g.eval_rat(2) == 0, \
                f"gamma_{k}(1)+gamma_{k}(2) != 0"
    elif flavor == "cubic-P":
        p = cubic_P(k)
        assert p.degree == 2 * k, f"cubic P_{k} degree {p.degree} != {2 * k}"
        for d, c in enumerate(p.coeffs):
            if d % 2 != 0:
                assert c == 0, f"cubic P_{k} parity violated at degree {d}"
    else:
        raise ValueError(f"unknown flavor {flavor!r}")


# ---------------------------------------------------------------------------
# truncated series


def v_series_poly(flavor: str, n: int, K: int) -> UniPoly:
    """v_n as an exact polynomial in eps, truncated at family order K."""
    z = Q(n + 1)
    if flavor == "parabolic":
        # (n+1) eps sum_{k<=K} eps^k P_k(n+1): degrees 1 .. K+1
        coeffs = [Q(0)] + [z * parabolic_P(k).eval_rat(z) for k in range(K + 1)]
    elif flavor == "cubic":
        # (n+1) eps (1 + sum_{l<=K} eps^{2l} P_l(n+1)): odd degrees 1 .. 2K+1
        coeffs = [Q(0)] * (2 * K + 2)
        for l in range(K + 1):
            coeffs[2 * l + 1] = z * cubic_P(l).eval_rat(z)
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return UniPoly.from_coeffs(coeffs, "eps")


def f_series_poly(n: int, K: int) -> UniPoly:
    """f_n as an exact polynomial in eps: -1 + sum_{l<=K} eps^{l+1} gamma_l(n+1)."""
    z = Q(n + 1)
    coeffs = [Q(-1)] + [gamma_poly(l).eval_rat(z) for l in range(K + 1)]
    return UniPoly.from_coeffs(coeffs, "eps")


def truncated_v(flavor: str, n: int, eps: mpmath.mpf, K: int = DEFAULT_ORDER
                ) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Partial sum for v_n plus |first omitted term| as an error gauge."""
    eps = mpmath.mpf(eps)
    value = v_series_poly(flavor, n, K).eval_real(eps)
    z = Q(n + 1)
    if flavor == "parabolic":
        omitted = rat_to_mpf(z * parabolic_P(K + 1).eval_rat(z)) * eps**(K + 2)
    else:
        omitted = rat_to_mpf(z * cubic_P(K + 1).eval_rat(z)) * eps**(2 * K + 3)
    return value, abs(omitted)


def truncated_f(n: int, eps: mpmath.mpf, K: int = DEFAULT_ORDER
                ) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Partial sum for f_n plus |first omitted term|."""
    eps = mpmath.mpf(eps)
    value = f_series_poly(n, K).eval_real(eps)
    omitted = rat_to_mpf(gamma_poly(K + 1).eval_rat(Q(n + 1))) * eps**(K + 2)
    return value, abs(omitted)
