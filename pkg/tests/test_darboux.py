import mpmath
import pytest
from mpmath import mp, mpf

from qmslab import darboux
from qmslab.darboux import LadderSpec, NodeEncountered
from qmslab.specfun import Jet

PREC = 192
TOL = mpf(2) ** (-(PREC - 64))


@pytest.fixture(scope="module")
def spec4():
    return LadderSpec.all_K([1, 2, 3, 4])


class TestLadderSpec:
    def test_make_and_accessors(self):
        spec = LadderSpec.make([1, 2], ["K", "I"])
        assert len(spec) == 2
        assert spec.kappa(2) == 2 and spec.kind(2) == "I"

    def test_first_shift_must_be_one(self):
        with pytest.raises(ValueError):
            LadderSpec.all_K([2, 3])

    def test_shifts_strictly_increasing(self):
        with pytest.raises(ValueError):
            LadderSpec.all_K([1, 3, 3])

    def test_kinds_validated(self):
        with pytest.raises(ValueError):
            LadderSpec.make([1], ["J"])
        with pytest.raises(ValueError):
            LadderSpec.make([1, 2], ["K"])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            LadderSpec(())


class TestBaseLevel:
    @pytest.mark.parametrize("kind", ["K", "I"])
    @pytest.mark.parametrize("kappa", ["1", "2", "3.5"])
    def test_base_equation(self, kind, kappa):
        for s in ("0.5", "2", "8"):
            assert darboux.base_equation_residual(
                mpf(kappa), kind, mpf(s), PREC) < TOL

    def test_factorization_identity_at_base(self):
        for s in ("0.7", "3", "12"):
            assert darboux.factorization_base_residual(mpf(s), PREC) < TOL

    def test_wronskian_route_matches_direct(self):
        for s in ("0.5", "2", "9"):
            assert darboux.wronskian_route_residual(mpf(s), PREC) < TOL


class TestLadder:
    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_consistency_report(self, spec4, N):
        for s in (mpf("0.5"), mpf(2), mpf(8)):
            rep = darboux.consistency_report(spec4, N, s, PREC)
            assert rep["eigen"] < TOL
            assert rep["w_two_route"] < TOL
            assert rep["w_raised_route"] < TOL
            assert rep["telescoping"] < TOL

    def test_mixed_kind_ladder(self):
        spec = LadderSpec.make([1, 2, 3], ["K", "I", "K"])
        rep = darboux.consistency_report(spec, 3, mpf(2), PREC)
        assert rep["eigen"] < TOL and rep["w_two_route"] < TOL

    def test_level_one_potential_is_base(self, spec4):
        # W_1 = W_0 + 2 h_1' must match the raised route at N = 1
        with mp.workprec(PREC):
            s = mpf(3)
            assert abs(darboux.ladder_W(spec4, 1, s, PREC)
                       - darboux.ladder_W_raised(spec4, 1, s, PREC)) < TOL

    def test_chi_order_bookkeeping(self, spec4):
        j = darboux.ladder_chi(spec4, 3, mpf(2), 2, PREC)
        assert j.order == 2

    def test_invalid_level_rejected(self, spec4):
        with pytest.raises(ValueError):
            darboux.ladder_chi(spec4, 5, mpf(2), 1, PREC)
        with pytest.raises(ValueError):
            darboux.ladder_chi(spec4, 0, mpf(2), 1, PREC)

    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_asymptotic_signature(self, spec4, N):
        rep = darboux.asymptotic_signature(spec4, N, PREC)
        assert rep["relative_gap"] < mpf("0.01")

    def test_asymptotic_signature_rejects_growing_kinds(self):
        spec = LadderSpec.make([1, 2], ["K", "I"])
        with pytest.raises(ValueError):
            darboux.asymptotic_signature(spec, 2, PREC)

    def test_far_tail_not_mistaken_for_node(self, spec4):
        # chi ~ e^(-4s) is ~ 1e-105 at s = 60 but is a genuine value
        rep = darboux.consistency_report(spec4, 4, mpf(60), PREC)
        assert rep["eigen"] < TOL


class TestNodeDetection:
    def test_relative_node_detection(self):
        noise = mpf(2) ** (-(PREC + 10))
        node = Jet(mpf(2), (noise, mpf(1), mpf(0)))
        assert darboux._is_node(node, PREC)
        tiny_but_resolved = Jet(mpf(60), (mpf("1e-100"), mpf("-4e-100")))
        assert not darboux._is_node(tiny_but_resolved, PREC)

    def test_apply_A_refuses_node(self):
        node = Jet(mpf(2), (mpf(0), mpf(1), mpf(0)))
        target = Jet(mpf(2), (mpf(1), mpf(1), mpf(1)))
        with pytest.raises(NodeEncountered):
            darboux._apply_A(node, target, PREC)

    def test_apply_A_drops_one_order(self):
        with mp.workprec(PREC):
            src = Jet(mpf(2), (mpf(3), mpf(1), mpf(2), mpf(1)))
            target = Jet(mpf(2), (mpf(5), mpf(4), mpf(3), mpf(2)))
            out = darboux._apply_A(src, target, PREC)
            assert out.order == 2
            # (d + h) target at value level: target' + h target
            h = -src.ders[1] / src.ders[0]
            assert abs(out.value - (target.ders[1] + h * target.ders[0])) \
                < mpf(2) ** (-(PREC - 16))
