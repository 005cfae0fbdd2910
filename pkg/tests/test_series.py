import mpmath
import pytest

from qmslab import series
from qmslab.polynomials import Q, UniPoly

Z = UniPoly.x()
ONE = UniPoly.constant(1)


class TestParabolicFamily:
    def test_first_members(self):
        assert series.parabolic_P(0) == ONE
        assert series.parabolic_P(1) == UniPoly.from_coeffs([0, -2])
        assert series.parabolic_P(2) == UniPoly.from_coeffs([4, 0, 8])
        assert series.parabolic_P(3) == UniPoly.from_coeffs([0, -72, 0, -40])

    def test_structural_invariants(self):
        for k in range(10):
            series.check_family_invariants("parabolic-P", k)


class TestGammaFamily:
    def test_first_members(self):
        assert series.gamma_poly(0) == -(Z - ONE.scale(3))
        assert series.gamma_poly(1) == (Z - ONE) * (Z - ONE.scale(2)) * 2
        assert series.gamma_poly(2) == \
            (Z - ONE) * (Z - ONE.scale(2)) * (Z.scale(2) - ONE.scale(3)) * (-4)
        assert series.gamma_poly(3) == \
            (Z - ONE) * (Z - ONE.scale(2)) * UniPoly.from_coeffs([14, -15, 5]) * 8

    def test_shift_identity(self):
        # gamma_k(z+1) + gamma_k(z) telescopes onto the parabolic family
        for k in range(1, 13):
            g = series.gamma_poly(k)
            rhs = (Z - ONE) * series.parabolic_P(k).shift_var(-1) * (-2)
            assert g.shift_var(1) + g == rhs

    def test_anchor_values(self):
        for k in range(1, 13):
            g = series.gamma_poly(k)
            assert g.eval_rat(1) + g.eval_rat(2) == 0


class TestCubicFamily:
    def test_first_members(self):
        assert series.cubic_P(0) == ONE
        assert series.cubic_P(1) == (Z * Z + ONE) * (-3)

    def test_second_member_values_and_prefactor(self):
        p2 = series.cubic_P(2)
        assert p2.eval_rat(1) == 306
        assert p2.eval_rat(2) == 1305
        shape = UniPoly.from_coeffs([9, 0, 22, 0, 3])
        assert p2.exact_div(shape) == UniPoly.constant(9)

    def test_even_parity(self):
        for l in range(6):
            series.check_family_invariants("cubic-P", l)


class TestTruncatedSeries:
    def test_parabolic_v_polynomial(self):
        # v_0 through order 4: eps - 2 eps^2 + 12 eps^3 - 112 eps^4
        p = series.v_series_poly("parabolic", 0, 3)
        assert p == UniPoly.from_coeffs([0, 1, -2, 12, -112], "eps")

    def test_cubic_v_polynomial(self):
        p = series.v_series_poly("cubic", 0, 2)
        assert p == UniPoly.from_coeffs([0, 1, 0, -6, 0, 306], "eps")

    def test_f_series_low_order(self):
        # the n = 2 drift at first order: gamma_0(3) = 0, so -1 + 4 eps^2
        p = series.f_series_poly(2, 1)
        assert p == UniPoly.from_coeffs([-1, 0, 4], "eps")

    def test_truncated_v_reports_omitted_term(self):
        eps = mpmath.mpf("0.01")
        val, gauge = series.truncated_v("parabolic", 0, eps, K=2)
        exact_next = abs(series.parabolic_P(3).eval_rat(Q(1))) * eps ** 4
        assert mpmath.almosteq(gauge, exact_next)
        assert abs(val - (eps - 2 * eps**2 + 12 * eps**3)) < mpmath.mpf("1e-30")

    def test_flavor_validation(self):
        with pytest.raises(ValueError):
            series.v_series_poly("quartic", 0, 3)
        with pytest.raises(ValueError):
            series.parabolic_P(-1)
