import mpmath
import pytest
from mpmath import mp, mpf

from qmslab import semiclassical as sc
from qmslab.rationals import Q

PREC = 128


class TestRadialCoordinate:
    def test_rtilde_exact_on_rationals(self):
        assert sc.rtilde(Q(1, 2)) == Q(1, 8) + Q(3, 128)
        assert sc.rtilde(2) == 2 + 96

    def test_rtilde_derivative_matches_difference(self):
        with mp.workprec(PREC):
            r, h = mpf("0.7"), mpf(2) ** (-40)
            d = (sc.rtilde(r + h) - sc.rtilde(r - h)) / (2 * h)
            assert abs(d - sc.rtilde_derivative(r)) < mpf("1e-18")

    def test_rtilde_derivative_exact_form(self):
        assert sc.rtilde_derivative(Q(1, 3)) == Q(1, 3) * (1 + Q(9, 81))


class TestInversion:
    def test_roundtrip_through_rtilde(self):
        with mp.workprec(PREC):
            for x in (mpf("0.01"), mpf("0.5"), mpf(3), mpf(100)):
                y = sc.invert_radial(x, PREC)       # y = 3 r^2
                r = mpmath.sqrt(y / 3)
                assert abs(9 * sc.rtilde(r) - x) < mpf("1e-30")

    def test_cardano_route_agrees(self):
        with mp.workprec(PREC):
            for x in (mpf("0.02"), mpf(1), mpf(40)):
                a = sc.invert_radial(x, PREC)
                b = sc.invert_radial_cardano(x, PREC)
                assert abs(a - b) / a < mpf("1e-30")

    def test_large_x_growth(self):
        # for x >> 1 the root behaves like (2x)^(1/3)
        with mp.workprec(PREC):
            x = mpf("1e12")
            ratio = sc.invert_radial(x, PREC) / mpmath.cbrt(2 * x)
            assert abs(ratio - 1) < mpf("1e-7")

    def test_domain_validated(self):
        with pytest.raises(ValueError):
            sc.invert_radial(mpf(0), PREC)
        with pytest.raises(ValueError):
            sc.invert_radial_cardano(mpf(-1), PREC)

    def test_real_cbrt_of_negative(self):
        assert sc._real_cbrt(mpf(-8)) == -2


class TestSeries:
    def test_low_order_x_coefficients(self):
        s = sc.semiclassical_series(7)
        assert s.x_coeffs.coeffs[1] == Q(2, 3)
        assert s.x_coeffs.coeffs[3] == Q(-8, 81)

    def test_odd_parity(self):
        sc.semiclassical_series(11).check_parity()

    def test_vn_conversion(self):
        s = sc.semiclassical_series(7)
        assert s.vn_coeffs.coeffs[1] == 1
        assert s.vn_coeffs.coeffs[3] == -3
        assert s.vn_coeffs.coeffs[5] == 27

    def test_series_matches_closed_form_at_small_x(self):
        with mp.workprec(PREC):
            s = sc.semiclassical_series(11)
            x = mpf("0.001")
            assert abs(sc.series_eval(s, x, PREC)
                       - sc.invert_radial(x, PREC)) < 10 * x ** 13

    def test_order_validated(self):
        with pytest.raises(ValueError):
            sc.semiclassical_series(0)


class TestComparison:
    def test_low_orders_match_exact_leading_coefficients(self):
        rows = {r["order"]: r for r in sc.quantum_compare(8)}
        assert rows[1]["match"] and rows[3]["match"] and rows[5]["match"]

    def test_printed_fifth_order_sign_mismatch_is_reported(self):
        rows = {r["order"]: r for r in sc.quantum_compare(6)}
        row = rows[5]
        assert row["printed"] == "-81/8"
        assert row["printed_sign_mismatch"] is True

    def test_orders_without_printed_value_have_no_flag(self):
        rows = {r["order"]: r for r in sc.quantum_compare(8)}
        assert "printed" not in rows[7]
