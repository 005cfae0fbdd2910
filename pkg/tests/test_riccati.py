import mpmath
import pytest
from mpmath import mp, mpf

from qmslab import riccati
from qmslab.solver import PrecisionExhausted

PREC = 192
TOL = mpf(2) ** (-(PREC - 48))


@pytest.fixture(scope="module")
def profile():
    return riccati.v_profile(8, mpf(5), PREC)


class TestBasePair:
    def test_v0_matches_small_eps_series(self):
        # v_0(s) = eps - 2 eps^2 + 12 eps^3 - ... with eps = 1/(6s)
        with mp.workprec(PREC):
            s = mpf(200)
            eps = 1 / (6 * s)
            v0, _ = riccati.v0_closed_form(s, PREC)
            pred = eps - 2 * eps**2 + 12 * eps**3 - 112 * eps**4
            assert abs(v0 - pred) < 1500 * eps**5

    def test_v0_prime_against_central_difference(self):
        with mp.workprec(PREC):
            s, h = mpf(3), mpf(2) ** (-40)
            _, v0p = riccati.v0_closed_form(s, PREC)
            vp = riccati.v0_closed_form(s + h, PREC)[0]
            vm = riccati.v0_closed_form(s - h, PREC)[0]
            assert abs(v0p - (vp - vm) / (2 * h)) < mpf("1e-20")

    def test_h0_is_log_derivative(self):
        with mp.workprec(PREC):
            s = mpf(2)
            j = riccati.psi0_jet(s, 1, PREC)
            assert abs(riccati.h0(s, PREC) - j.ders[1] / j.value) < TOL


class TestProfile:
    def test_positivity_and_decrease_toward_asymptote(self, profile):
        assert all(v > 0 for v in profile.v)

    def test_riccati_residuals_vanish(self, profile):
        for n in range(profile.n + 1):
            assert riccati.riccati_residual(profile, n) < TOL

    def test_f_recursion_residuals_vanish(self, profile):
        for n in range(profile.n):
            assert riccati.f_recursion_residual(profile, n) < TOL

    def test_f2_recovers_log_derivative(self):
        # f_2 = -1 + 2 eps - 2 v_0 equals h_0 identically
        with mp.workprec(PREC):
            for s in (mpf("0.7"), mpf(4), mpf(30)):
                p = riccati.v_profile(2, s, PREC)
                assert abs(p.f(2) - riccati.h0(s, PREC)) < TOL

    def test_deep_transport_at_low_precision_raises(self):
        # forward transport is unstable; at 64 bits the profile cannot
        # reach depth 60 and must fail loudly rather than go negative
        with pytest.raises(PrecisionExhausted):
            riccati.v_profile(60, mpf(5), 64)


class TestPotentials:
    def test_W0_closed_form(self):
        # W_0 = -2/(9 s^2): drift f_0 = -1 + 2 eps
        with mp.workprec(PREC):
            for s in (mpf(1), mpf(7)):
                w = riccati.potential_W(0, s, PREC)
                assert abs(w + 2 / (9 * s * s)) < TOL

    def test_W3_against_independent_difference_of_f3(self):
        with mp.workprec(PREC):
            s, h = mpf(4), mpf(2) ** (-40)
            prof = riccati.v_profile(3, s, PREC)
            w = riccati.potential_W(3, s, PREC, profile=prof)
            f = lambda t: riccati.v_profile(3, t, PREC).f(3)
            fp = (f(s + h) - f(s - h)) / (2 * h)
            ref = fp + f(s) ** 2 - 1 + 4 * mpf(4) / (6 * s)
            assert abs(w - ref) < mpf("1e-20")

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_schrodinger_eigen_residual(self, n):
        grid = [mpf("0.5"), mpf(2), mpf(10), mpf(40)]
        assert riccati.schrodinger_check(n, grid, PREC) < TOL

    def test_scaled_ground_family_positive_decaying(self):
        with mp.workprec(PREC):
            a = riccati.scaled_ground_family(1, 2, PREC)
            b = riccati.scaled_ground_family(2, 2, PREC)
            assert a > b > 0


class TestBoundaryTerm:
    def test_value_is_minus_pi(self):
        with mp.workprec(PREC):
            bt = riccati.boundary_term(PREC)
            assert bt < 0
            assert abs(bt + mp.pi) < mpf("1e-30")

    def test_oracle_agrees(self):
        with mp.workprec(PREC):
            oracle = riccati.boundary_term_oracle(PREC)
            assert abs(oracle + mp.pi) < mpf(2) ** (-(PREC - 16))
            assert abs(riccati.boundary_term(PREC) - oracle) < mpf("1e-30")

    def test_quadratic_form_identity(self):
        prec = 128
        with mp.workprec(prec):
            rep = riccati.quadratic_form_identity(prec)
            assert abs(rep["lhs"] - rep["rhs"]) / abs(rep["lhs"]) < mpf("1e-6")
            assert rep["rhs_integral"] > 0
