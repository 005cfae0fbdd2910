import pytest

from qmslab import tau
from qmslab.polynomials import BiPoly, NotDivisible, Q

X, E = BiPoly.x(), BiPoly.eps()
ONE = BiPoly.constant(1)


@pytest.fixture(scope="module")
def tower():
    return tau.build_u(12)


class TestConstruction:
    def test_seeds(self, tower):
        for k in range(-4, 0):
            assert tower.u[k] == ONE
        assert tower.u[0] == X
        assert tower.u[1] == E - X

    def test_tau_low_members(self, tower):
        assert tower.tau(1) == X
        assert tower.tau(2) == X * (E - X)
        assert tower.tau(3).deg_x == 4

    def test_tau_degree_growth(self, tower):
        for n in range(3, 13):
            assert tower.tau(n).deg_x == n + 1

    def test_divisibility_never_fails_through_20(self):
        tau.build_u(20)   # raises NotDivisible on any failure

    def test_printed_low_values(self, tower):
        q, p, u = tower.q, tower.p, tower.u
        assert q[-1] == E and u[0] + u[1] == E
        assert q[0] == X + E
        assert q[2] == E * ((ONE + E.scale(2)) * X - E)
        assert p[0] == q[2].scale(3)
        assert X * p[1] == E.scale(5) * u[3] + u[4]
        assert p[2] * u[1] == E.scale(6) * u[4] + u[5]

    def test_p_cross_check_row(self, tower):
        q2, p2 = tower.q_p(2)
        assert p2 == tower.p[2]


class TestIdentities:
    @pytest.mark.parametrize("name", sorted(tau.IDENTITIES))
    def test_identity_holds_over_applicable_range(self, tower, name):
        ns = tau.applicable_range(tower, name, 10)
        assert ns, f"no applicable indices for {name}"
        for n in ns:
            passed, witness = tau.verify_identity(tower, name, n)
            assert passed, f"{name} failed at n={n}: {witness}"

    def test_unknown_identity_rejected(self, tower):
        with pytest.raises(KeyError):
            tau.verify_identity(tower, "no-such-identity", 3)

    def test_out_of_range_rejected(self, tower):
        with pytest.raises(ValueError):
            tau.verify_identity(tower, "u-window", 10**6)

    def test_product_formula_samples(self, tower):
        for n in range(0, 8):
            passed, witness = tau.verify_identity(tower, "tau-product", n)
            assert passed, witness


class TestTransfer:
    def test_derived_relations_exact(self, tower):
        for n in range(2, 8):
            rep = tau.transfer_verify(tower, n)
            assert rep["derived_ok"], rep["derived_witness"]

    def test_printed_matrices_disagree_as_documented(self, tower):
        # the displayed three-step matrices are inconsistent with the
        # defining rows; the q-chain misses on both components and the
        # p-chain on its second row only
        rep = tau.transfer_verify(tower, 4)
        assert rep["printed_matrix_mismatches"]["q_chain"] == 10
        assert rep["printed_matrix_mismatches"]["p_chain"] == 5
