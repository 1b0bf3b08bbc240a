"""Tests for p-powers, toral spans, dependence data and filtrations."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders.registry import build_algebra
from core.field import codes
from core.liealg import LieAlgebra
from core.linalg import PPolynomial, mat_pow
from core.pstruct import (
    delta_element,
    dependence_data,
    filtration_view,
    module_span,
    ord_compare,
    p_ary,
    p_power,
    toral_span,
    y_module,
)
from utils.exceptions import ElementBelowFiltrationZero, PreconditionError


def same(a, b) -> bool:
    return np.array_equal(codes(a), codes(b))


class TestPPower:
    """y^[p] through the adjoint representation."""

    def test_toral_element_is_fixed(self, w11):
        t = w11.torus()[0]
        assert same(p_power(w11.base, t, witt=w11), t)

    def test_partial_derivative_vanishes(self, w11):
        assert not np.any(codes(p_power(w11.base, w11.partial(0), witt=w11)))

    def test_center_blocks_uniqueness(self, f5):
        abelian = LieAlgebra(f5, 1, {}, name="F")
        with pytest.raises(PreconditionError):
            p_power(abelian, abelian.basis_vector(0))

    @settings(max_examples=25, deadline=None)
    @given(coords=st.lists(st.integers(0, 4), min_size=3, max_size=3))
    def test_adjoint_of_p_power(self, sl2: LieAlgebra, coords):
        y = sl2.field(coords)
        z = p_power(sl2, y)
        assert same(sl2.ad(z), mat_pow(sl2.ad(y), 5))

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 1000))
    def test_operator_composition_agrees(self, w11, seed):
        y = w11.base.random_vector(np.random.default_rng(seed))
        p_power(w11.base, y, witt=w11)


class TestToralSpan:
    """Spans of iterated p-powers."""

    def test_torus_of_w21(self, w21):
        t1, t2 = w21.torus()
        y = t1 + 2 * t2
        T = toral_span(w21.base, y)
        assert T.dim == 1
        assert T.contains(y)

    def test_start_below_semisimple_exponent(self, w11):
        # ad D is nilpotent, so the semisimple exponent is 1
        with pytest.raises(PreconditionError):
            toral_span(w11.base, w11.partial(0), j0=0)


class TestDependenceData:
    """Dependence index of the degree -1 components of y^[p^j]."""

    def test_partial_in_one_variable(self, w11):
        data = dependence_data(w11, w11.partial(0))
        assert data.k == 1
        assert data.f == PPolynomial(w11.base.field([0, 1]))
        assert not np.any(codes(data.f_of_y))

    def test_torus_element(self, w11):
        data = dependence_data(w11, w11.torus()[0])
        assert data.k == 0
        assert same(data.h, w11.torus()[0])

    def test_partial_in_two_variables(self, w21):
        data = dependence_data(w21, w21.partial(0))
        assert data.k == 1
        assert data.k < w21.m

    def test_needs_restricted_algebra(self, f5):
        W = build_algebra("W:1:2", f5)
        with pytest.raises(PreconditionError):
            dependence_data(W, W.partial(0))

    def test_delta_for_the_top_element(self, w11):
        x = w11.e(w11.top_degree)
        y = w11.partial(0)
        result = delta_element(w11, x, y)
        assert result.expected_degree == -1
        assert result.degree_ok
        assert result.in_module
        assert same(result.delta, w11.partial(0))
        assert module_span(w11, result.delta).contains(x)

    def test_delta_needs_top_x(self, w11):
        with pytest.raises(PreconditionError):
            delta_element(w11, w11.partial(0), w11.partial(0))

    def test_y_module(self, w11):
        M = y_module(w11.base, w11.e(3), w11.partial(0))
        assert M.dim == 5


class TestPAry:
    """Base-p digits."""

    def test_digits_and_length(self):
        assert p_ary(7, 5) == ([2, 1], 3)
        assert p_ary(0, 5) == ([], 0)
        assert p_ary(24, 5) == ([4, 4], 8)

    def test_negative(self):
        with pytest.raises(PreconditionError):
            p_ary(-1, 5)


class TestFiltration:
    """ord(h) against ord(gr h)."""

    def test_degree_zero_element(self, w11):
        view = filtration_view(w11.base)
        h = w11.torus()[0] + w11.element((2,), 0)
        comparison = ord_compare(view, h)
        assert comparison.nu == 0
        assert comparison.equal

    def test_element_below_degree_zero(self, w11):
        view = filtration_view(w11.base)
        h = w11.partial(0) + w11.torus()[0]
        with pytest.raises(ElementBelowFiltrationZero) as info:
            ord_compare(view, h)
        comparison = info.value.comparison
        assert comparison.nu == -1
        assert (comparison.ord_h, comparison.ord_gr) == (1, 0)
        assert not comparison.equal

    def test_levels(self, w11):
        view = filtration_view(w11.base)
        assert view.level(-1).dim == 5
        assert view.level(1).dim == 3
        assert same(view.gr(w11.e(0) + w11.e(2)), w11.e(0))

    def test_needs_grading(self, f5):
        with pytest.raises(PreconditionError):
            filtration_view(LieAlgebra(f5, 1, {}))
