import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmslab.polynomials import BiPoly, NotDivisible, UniPoly
from qmslab.rationals import Q, rat, rat_str


def small_unipoly():
    return st.lists(st.integers(-9, 9), min_size=0, max_size=5).map(
        UniPoly.from_coeffs)


class TestRationals:
    def test_rat_parses_fraction_strings(self):
        assert rat("3/4") == Q(3, 4)
        assert rat(5) == Q(5)
        assert rat_str(Q(6, 4)) == "3/2"

    def test_rat_normalizes_sign(self):
        assert rat_str(Q(1, -2)) == "-1/2"


class TestUniPoly:
    def test_trailing_zeros_stripped(self):
        assert UniPoly.from_coeffs([1, 2, 0, 0]).degree == 1

    def test_mul_and_eval_agree(self):
        p = UniPoly.from_coeffs([1, 2, 3])
        q = UniPoly.from_coeffs([-1, 1])
        assert (p * q).eval_rat(Q(5)) == p.eval_rat(Q(5)) * q.eval_rat(Q(5))

    def test_shift_var_is_composition(self):
        p = UniPoly.from_coeffs([2, 0, 1])     # z^2 + 2
        shifted = p.shift_var(3)               # (z+3)^2 + 2
        assert shifted == UniPoly.from_coeffs([11, 6, 1])

    def test_exact_div_round_trip(self):
        a = UniPoly.from_coeffs([1, 2, 1])
        b = UniPoly.from_coeffs([1, 1])
        assert a.exact_div(b) == b

    def test_exact_div_rejects_remainder(self):
        with pytest.raises(NotDivisible) as exc:
            UniPoly.from_coeffs([1, 0, 1]).exact_div(UniPoly.from_coeffs([1, 1]))
        assert exc.value.remainder is not None

    def test_derivative(self):
        p = UniPoly.from_coeffs([7, 0, 5])
        assert p.derivative() == UniPoly.from_coeffs([0, 10])

    def test_json_round_trip(self):
        p = UniPoly.from_coeffs([Q(1, 3), 0, -2], "eps")
        assert UniPoly.from_json(p.to_json()) == p

    def test_min_nonzero_degree(self):
        assert UniPoly.from_coeffs([0, 0, 5]).min_nonzero_degree() == 2
        assert UniPoly.zero().min_nonzero_degree() is None

    @settings(max_examples=60, deadline=None)
    @given(small_unipoly(), small_unipoly())
    def test_product_division_inverts(self, a, b):
        if b.is_zero():
            return
        assert (a * b).exact_div(b) == a

    @settings(max_examples=60, deadline=None)
    @given(small_unipoly(), small_unipoly(), st.integers(-5, 5))
    def test_ring_laws_at_points(self, a, b, x):
        x = Q(x)
        assert (a + b).eval_rat(x) == a.eval_rat(x) + b.eval_rat(x)
        assert (a * b).eval_rat(x) == a.eval_rat(x) * b.eval_rat(x)


class TestBiPoly:
    def test_constructors_and_degrees(self):
        p = BiPoly.x() * BiPoly.x() + BiPoly.eps().scale(3)
        assert p.deg_x == 2 and p.deg_eps == 1

    def test_exact_div_back_multiplies(self):
        a = BiPoly.x() + BiPoly.eps()
        b = BiPoly.x() - BiPoly.eps()
        assert (a * b).exact_div(b) == a

    def test_exact_div_rejects_nondivisible(self):
        with pytest.raises(NotDivisible):
            (BiPoly.x() + BiPoly.constant(1)).exact_div(BiPoly.x())

    def test_coeff_in_x_round_trip(self):
        p = (BiPoly.x() * BiPoly.eps()).scale(2) + BiPoly.constant(7)
        coeffs = [p.coeff_in_x(a) for a in range(p.deg_x + 1)]
        assert BiPoly.from_x_coeffs(coeffs) == p

    def test_eval_matches_expansion(self):
        p = (BiPoly.x() + BiPoly.eps()) * (BiPoly.x() - BiPoly.eps())
        assert p.eval_rat(Q(3), Q(2)) == 9 - 4

    def test_json_round_trip(self):
        p = BiPoly.from_terms({(2, 0): Q(1, 2), (0, 3): -1})
        assert BiPoly.from_json(p.to_json()) == p
