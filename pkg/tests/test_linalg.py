"""Tests for exact linear algebra and p-polynomials."""

import galois
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.field import FieldSpec, codes
from core.linalg import (
    PPolynomial,
    additive_span,
    eigenvalues,
    is_semisimple,
    jordan_block,
    mat_pow,
    min_poly,
    null_space,
    p_min_poly,
    p_order,
    product_of_linear_factors,
    random_matrix,
    rank,
    roots_form_subgroup,
    semisimple_exponent,
    solve,
)
from utils.exceptions import DimensionMismatch
from utils.helpers import trial_rng

F5 = FieldSpec.create(5)
F25 = FieldSpec.create(5, 2)


def is_zero(m) -> bool:
    return not np.any(codes(m))


class TestRowReduction:
    """Tests for rank, solve and null spaces."""

    def test_rank(self):
        m = F5.gf([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        assert rank(m) == 2
        assert rank(F5.gf.Zeros((0, 3))) == 0

    def test_solve_and_inconsistent_system(self):
        a = F5.gf([[1, 1], [0, 1]])
        x = solve(a, F5.gf([3, 1]))
        assert is_zero(a @ x - F5.gf([3, 1]))
        assert solve(F5.gf([[1, 1], [1, 1]]), F5.gf([1, 2])) is None

    def test_null_space(self):
        m = F5.gf([[1, 2, 3], [2, 4, 6]])
        kernel = null_space(m)
        assert kernel.shape == (2, 3)
        assert is_zero(m @ kernel.T)

    def test_mat_pow_needs_square(self):
        with pytest.raises(DimensionMismatch):
            mat_pow(F5.gf.Zeros((2, 3)), 2)


class TestMinimalPolynomials:
    """Tests for min_poly and semisimplicity."""

    def test_nilpotent_block(self):
        f = min_poly(jordan_block(F5, 3))
        assert f == galois.Poly([1, 0, 0, 0], field=F5.gf)
        assert not is_semisimple(jordan_block(F5, 2))

    def test_diagonal_is_semisimple(self):
        u = F5.gf(np.diag([1, 2, 2]))
        assert is_semisimple(u)
        assert sorted(int(v) for v in eigenvalues(u)) == [1, 2]


class TestPPolynomials:
    """Tests for minimal p-polynomials and p-orders."""

    def test_split_diagonal(self):
        u = F5.gf(np.diag([1, 2]))
        f = p_min_poly(u)
        assert f == PPolynomial(F5.gf([4, 1]))
        assert p_order(u, cross_check=True) == 1

    def test_nilpotent_has_order_zero(self):
        u = jordan_block(F5, 2)
        assert p_min_poly(u) == PPolynomial(F5.gf([0, 1]))
        assert semisimple_exponent(u) == 1
        assert p_order(u) == 0

    def test_p_min_poly_of_power_shifts(self):
        u = jordan_block(F5, 2, eigenvalue=3)
        k = semisimple_exponent(u)
        assert p_min_poly(u) == p_min_poly(mat_pow(u, 5**k)).shift(k)

    def test_field_generator_has_order_two(self):
        # eigenvalues theta and 1 are independent over F_5
        u = F25.gf([[5, 0], [0, 1]])
        assert p_order(u, cross_check=True) == 2

    def test_power_is_frobenius_then_shift(self):
        f = PPolynomial(F25.gf([7, 1]))
        assert f.power(1) == f.frobenius_twist(1).shift(1)
        assert f.power(1).degree == 25

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 5), st.booleans())
    def test_p_min_poly_annihilates(self, seed, n, extension):
        spec = F25 if extension else F5
        u = random_matrix(spec, n, trial_rng(seed, n))
        f = p_min_poly(u)
        assert is_zero(f.evaluate_matrix(u))
        assert p_order(mat_pow(u, 5)) == p_order(u)

    def test_roots_of_a_p_polynomial_form_a_group(self):
        assert roots_form_subgroup(PPolynomial(F25.gf([4, 1])), F25)
        assert roots_form_subgroup(PPolynomial(F25.gf([3, 0, 1])), F25)

    def test_additive_span(self):
        assert len(additive_span(F25.gf([1]))) == 5
        assert len(additive_span(F25.gf([1, 5]))) == 25
        assert len(additive_span(F25.gf([1, 2, 3]))) == 5

    def test_split_semisimple_min_poly(self):
        u = F5.gf(np.diag([0, 1, 2, 3, 4]))
        span = additive_span(eigenvalues(u))
        assert p_min_poly(u).to_poly() == product_of_linear_factors(span)
