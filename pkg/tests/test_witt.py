"""Tests for divided powers, Witt and Zassenhaus algebras."""

from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders.divided_powers import build_divided_powers, lucas_binomial, p_digits
from builders.registry import build_algebra
from builders.witt_builder import (
    WittAlgebra,
    bracket_generation_by_bottom,
    formula_weight,
    iota_embed,
    product_lemma_check,
    top_and_min_structures,
    torus_weights,
    zassenhaus_coefficient,
)
from core.field import codes
from core.liealg import validate
from utils.exceptions import DimensionCapExceeded, PreconditionError


class TestDividedPowers:
    """O(m, n) arithmetic."""

    @given(a=st.integers(0, 200), b=st.integers(0, 200))
    def test_lucas_matches_binomial(self, a, b):
        expected = comb(a, b) % 5 if b <= a else 0
        assert lucas_binomial(a, b, 5) == expected

    def test_digits(self):
        assert p_digits(7, 5) == [2, 1]
        assert p_digits(7, 5, width=3) == [2, 1, 0]
        with pytest.raises(PreconditionError):
            p_digits(25, 5, width=2)

    def test_divided_power_product(self, f5):
        O = build_divided_powers(1, (1,), f5)
        x = O.variable(0)
        assert O.dim == 5
        assert np.array_equal(codes(O.multiply(x, x)), codes(2 * O.monomial((2,))))
        # x^4 = 4! x^(4) and x^p = 0
        assert np.array_equal(codes(O.power(x, 4)), codes(24 * O.monomial((4,))))
        assert not np.any(codes(O.power(x, 5)))

    def test_dimension_of_two_variables(self, f5):
        O = build_divided_powers(2, (1, 2), f5)
        assert O.dim == 125
        assert O.top_degree == 4 + 24

    def test_product_criterion_in_o(self, f5):
        O = build_divided_powers(2, (1, 1), f5)
        x1, x2 = O.variable(0), O.variable(1)
        assert product_lemma_check("omn", O, [x1, x2]) is False
        assert product_lemma_check("omn", O, [x1, 2 * x1]) is True


class TestWittShape:
    """Dimensions, degrees and components."""

    @pytest.mark.parametrize(
        "text,dim,top",
        [("W:1:1", 5, 3), ("W:1:2", 25, 23), ("W:2:1", 50, 7), ("Zass:1", 5, 3), ("Zass:2", 25, 23)],
    )
    def test_dimension_and_top_degree(self, f5, text, dim, top):
        W = build_algebra(text, f5)
        assert isinstance(W, WittAlgebra)
        assert W.dim == dim
        assert W.top_degree == top
        assert validate(W.base).passed

    def test_top_component_has_m_vectors(self, w21: WittAlgebra):
        assert len(w21.component_indices(w21.top_degree)) == 2
        assert len(w21.component_indices(-1)) == 2
        assert w21.restricted

    def test_dimension_cap(self, f5):
        with pytest.raises(DimensionCapExceeded):
            build_algebra("W:3:1", f5)
        with pytest.raises(DimensionCapExceeded):
            build_algebra("Zass:2", f5, cap=10)

    def test_lowest_degree(self, w11: WittAlgebra):
        v = w11.element((2,), 0) + w11.element((4,), 0)
        assert w11.lowest_degree(v) == 1
        assert w11.lowest_degree(w11.base.zero()) is None


class TestZassenhaus:
    """The e_i presentation of W(1, n)."""

    def test_agrees_with_witt(self, zass1: WittAlgebra, w11: WittAlgebra):
        assert zass1.base.upper_constants() == w11.base.upper_constants()

    def test_coefficients(self):
        # [e_-1, e_j] = e_{j-1}
        assert zassenhaus_coefficient(-1, 2, 5) == 1
        # [e_1, e_1] vanishes
        assert zassenhaus_coefficient(1, 1, 5) == 0

    def test_e_outside_one_variable(self, w21: WittAlgebra):
        with pytest.raises(PreconditionError):
            w21.e(0)


class TestTorus:
    """Weights of the standard torus."""

    def test_formula(self):
        assert formula_weight((2, 0), 1, 5) == (2, 4)

    def test_weights_of_w11(self, w11: WittAlgebra):
        assert torus_weights(w11, -1) == [(4,)]
        assert torus_weights(w11, 0) == [(0,)]

    def test_degree_zero_of_w21(self, w21: WittAlgebra):
        assert torus_weights(w21, 0) == [(0, 0), (1, 4), (4, 1)]


class TestStructures:
    """Top component, minimal ideal and the embedding into W(|n|, 1)."""

    def test_top_and_minimal_ideal(self, w21: WittAlgebra):
        found = top_and_min_structures(w21)
        assert found.consistent
        assert found.top_component.dim == 2

    def test_bottom_generates_downward(self, w11: WittAlgebra):
        assert all(bracket_generation_by_bottom(w11).values())

    def test_operator_criterion(self, w21: WittAlgebra):
        d1, d2 = w21.partial(0), w21.partial(1)
        assert product_lemma_check("w", w21, [d1, d2]) is False
        assert product_lemma_check("w", w21, [d1, 3 * d1]) is True

    def test_operator_criterion_needs_bottom(self, w21: WittAlgebra):
        with pytest.raises(PreconditionError):
            product_lemma_check("w", w21, [w21.torus()[0]])

    def test_embedding(self, f5):
        source = build_algebra("W:1:2", f5)
        target, matrix, report = iota_embed(source)
        assert target.descriptor == "W:2:1,1"
        assert matrix.shape == (50, 25)
        assert report.injective
        assert report.bracket_preserving
        assert report.top_to_top
        assert report.first_failure is None
