import mpmath
import pytest
from mpmath import mp, mpf

from qmslab import specfun
from qmslab.rationals import Q

PREC = 192


class TestScalars:
    def test_gamma_half(self):
        with mp.workprec(PREC):
            g = specfun.gamma_fn(mpf("0.5"), PREC)
            assert abs(g - mpmath.sqrt(mp.pi)) < mpf(2) ** (-(PREC - 8))

    def test_gamma_reflection_product(self):
        with mp.workprec(PREC):
            lhs = (specfun.gamma_fn(mpf(1) / 6, PREC)
                   * specfun.gamma_fn(mpf(5) / 6, PREC))
            assert abs(lhs - 2 * mp.pi) < mpf(2) ** (-(PREC - 8))

    def test_gamma_pole(self):
        with pytest.raises(specfun.PoleError):
            specfun.gamma_fn(-3, PREC)

    def test_bessel_wronskian(self):
        # I_nu'(x) K_nu(x) - I_nu(x) K_nu'(x) = 1/x
        nu = Q(1, 6)
        with mp.workprec(PREC):
            for x in (mpf("0.5"), mpf(2), mpf(10)):
                jI = specfun.bessel_jet("I", nu, mpf(1), x, 1, PREC)
                jK = specfun.bessel_jet("K", nu, mpf(1), x, 1, PREC)
                # jets carry sqrt(s) B(s); the Wronskian of the bare pair
                # follows after dividing the prefactor back out
                f = lambda j: j.ders[0] / mpmath.sqrt(x)
                fp = lambda j: (j.ders[1] - j.ders[0] / (2 * x)) / mpmath.sqrt(x)
                w = fp(jI) * f(jK) - f(jI) * fp(jK)
                assert abs(w - 1 / x) < mpf(2) ** (-(PREC - 16))

    def test_reflection_between_kinds(self):
        # K_nu = pi (I_{-nu} - I_nu) / (2 sin(pi nu)) at nu = 1/6
        with mp.workprec(PREC):
            x = mpf(3)
            k = specfun.bessel_IK("K", Q(1, 6), x, PREC)
            im = specfun.bessel_IK("I", Q(-1, 6), x, PREC)
            ip = specfun.bessel_IK("I", Q(1, 6), x, PREC)
            rhs = mp.pi * (im - ip) / (2 * mpmath.sin(mp.pi / 6))
            assert abs(k - rhs) < mpf(2) ** (-(PREC - 16))

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            specfun.bessel_IK("J", Q(1, 6), 1, PREC)
        with pytest.raises(ValueError):
            specfun.bessel_IK("K", Q(1, 6), -1, PREC)


class TestJets:
    def test_product_rule(self):
        with mp.workprec(PREC):
            s = mpf(2)
            a = specfun.Jet.variable(s, 3)          # f(s) = s
            b = a * a                                # s^2
            assert b.ders[0] == 4 and b.ders[1] == 4
            assert b.ders[2] == 2 and b.ders[3] == 0

    def test_division_inverts_product(self):
        with mp.workprec(PREC):
            s = mpf("1.5")
            a = specfun.sqrt_s_jet(s, 4)
            b = specfun.Jet.variable(s, 4)
            assert all(abs(x - y) < mpf(2) ** (-(PREC - 24))
                       for x, y in zip(((a * b) / b).ders, a.ders))

    def test_division_by_zero_value(self):
        j = specfun.Jet(mpf(1), (mpf(0), mpf(1)))
        with pytest.raises(ZeroDivisionError):
            specfun.Jet.variable(mpf(1), 1) / j

    def test_sqrt_jet_derivatives(self):
        with mp.workprec(PREC):
            s = mpf(4)
            j = specfun.sqrt_s_jet(s, 2)
            assert abs(j.ders[0] - 2) < mpf("1e-50")
            assert abs(j.ders[1] - mpf(1) / 4) < mpf("1e-50")
            assert abs(j.ders[2] + mpf(1) / 32) < mpf("1e-50")

    def test_log_second_derivative(self):
        # (ln s^2)'' = -2/s^2
        with mp.workprec(PREC):
            s = mpf(3)
            j = specfun.Jet.variable(s, 2) * specfun.Jet.variable(s, 2)
            assert abs(j.log_second_derivative() + 2 / s ** 2) < mpf("1e-50")


class TestBesselJets:
    @pytest.mark.parametrize("kind", ["I", "K"])
    @pytest.mark.parametrize("kappa", ["1", "2", "3.5"])
    def test_defining_equation(self, kind, kappa):
        # f = sqrt(s) B_{1/6}(kappa s) solves -f'' - (2/(9 s^2)) f = -kappa^2 f
        with mp.workprec(PREC):
            kappa = mpf(kappa)
            for s in (mpf("0.4"), mpf(2), mpf(15)):
                j = specfun.bessel_jet(kind, Q(1, 6), kappa, s, 2, PREC)
                res = -j.ders[2] - 2 / (9 * s * s) * j.ders[0] \
                    + kappa ** 2 * j.ders[0]
                scale = max(abs(j.ders[0]), mpf(1))
                assert abs(res) / scale < mpf(2) ** (-(PREC - 32))

    def test_jet_against_central_differences(self):
        with mp.workprec(PREC + 128):
            s, h = mpf(2), mpf(2) ** (-40)
            j = specfun.bessel_jet("K", Q(1, 6), mpf(1), s, 2, PREC + 128)
            f = lambda t: specfun.bessel_jet(
                "K", Q(1, 6), mpf(1), t, 0, PREC + 128).value
            d1 = (f(s + h) - f(s - h)) / (2 * h)
            d2 = (f(s + h) - 2 * f(s) + f(s - h)) / h ** 2
            assert abs(j.ders[1] - d1) < mpf("1e-20")
            assert abs(j.ders[2] - d2) < mpf("1e-15")

    def test_derivative_combos_shape(self):
        combos = specfun._bessel_derivative_combos("K", 3)
        assert combos[0] == {0: Q(1)}
        # j-th derivative reaches offsets -j..j of the same parity
        assert sorted(combos[3]) == [-3, -1, 1, 3]
