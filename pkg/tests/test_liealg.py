"""Tests for the structure-constant Lie algebra core."""

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from core.field import codes
from core.liealg import (
    LieAlgebra,
    center,
    center_and_quotient,
    centralizer,
    derived_algebra,
    derived_series_last,
    direct_sum,
    generated_subalgebra,
    naive_closure,
    pair_dimension,
    quotient,
    validate,
    weight_decomposition,
)
from schemas.algebra import AlgebraFile
from utils.exceptions import DimensionMismatch, PreconditionError, SpecMismatch

coords = st.lists(st.integers(0, 4), min_size=3, max_size=3)


class TestBracket:
    """Bracket, adjoint and basic subspaces."""

    def test_bracket_of_basis(self, sl2: LieAlgebra):
        e, h, f = (sl2.basis_vector(i) for i in range(3))
        assert np.array_equal(codes(sl2.bracket(e, f)), codes(h))
        assert np.array_equal(codes(sl2.bracket(f, e)), codes(-h))
        assert np.array_equal(codes(sl2.bracket(h, e)), codes(sl2.vector({0: 2})))

    def test_ad_matches_bracket(self, sl2: LieAlgebra, rng):
        x, y = sl2.random_vector(rng), sl2.random_vector(rng)
        assert np.array_equal(codes(sl2.ad(x) @ y), codes(sl2.bracket(x, y)))

    def test_wrong_shape_rejected(self, sl2: LieAlgebra):
        with pytest.raises(DimensionMismatch):
            sl2.bracket(sl2.field.Zeros(2), sl2.zero())

    def test_foreign_field_rejected(self, sl2: LieAlgebra, f25):
        with pytest.raises(SpecMismatch):
            sl2.bracket(f25.gf.Zeros(3), sl2.zero())

    def test_labels_must_fit(self, f5):
        with pytest.raises(DimensionMismatch):
            LieAlgebra(f5, 2, {}, labels=["a"])

    def test_describe(self, sl2: LieAlgebra):
        assert sl2.describe(sl2.vector({0: 1, 2: 3})) == "1*e + 3*f"
        assert sl2.describe(sl2.zero()) == "0"


class TestValidation:
    """Antisymmetry, Jacobi and grading checks."""

    def test_sl2_is_valid(self, sl2: LieAlgebra):
        report = validate(sl2)
        assert report.passed
        assert [c.name for c in report.checks] == ["antisymmetry", "jacobi", "grading"]

    def test_mirror_pair_must_be_negated(self, f5):
        L = LieAlgebra(f5, 2, {(0, 1): {0: 1}, (1, 0): {0: 1}})
        report = validate(L)
        assert not report.passed
        assert report.first_failure().startswith("antisymmetry")

    def test_self_bracket_must_vanish(self, f5):
        L = LieAlgebra(f5, 2, {(1, 1): {0: 1}})
        assert not validate(L).passed

    def test_jacobi_failure(self, f5):
        # [b0,[b1,b2]] + [b1,[b2,b0]] + [b2,[b0,b1]] = -b0
        L = LieAlgebra(f5, 3, {(0, 1): {1: 1}, (1, 2): {0: 1}})
        report = validate(L)
        assert report.checks[0].passed
        assert not report.checks[1].passed

    def test_grading_failure(self, f5):
        constants = {(0, 1): {0: -2}, (0, 2): {1: 1}, (1, 2): {2: -2}}
        L = LieAlgebra(f5, 3, constants, grading=[1, 0, 1])
        report = validate(L)
        assert not report.checks[2].passed
        assert "degree 0" in report.checks[2].detail

    def test_builtin_algebras_validate(self, a2, w11, zass1):
        for algebra in (a2, w11, zass1):
            assert validate(algebra.base).passed


class TestGeneration:
    """Generated subalgebras."""

    def test_e_and_f_generate(self, sl2: LieAlgebra):
        e, f = sl2.basis_vector(0), sl2.basis_vector(2)
        assert pair_dimension(sl2, e, f) == 3

    def test_borel(self, sl2: LieAlgebra):
        e, h = sl2.basis_vector(0), sl2.basis_vector(1)
        S = generated_subalgebra(sl2, e, h)
        assert S.dim == 2
        assert S.is_closed()

    def test_single_generator(self, sl2: LieAlgebra):
        e = sl2.basis_vector(0)
        assert pair_dimension(sl2, e, 2 * e) == 1

    @settings(max_examples=40, deadline=None)
    @given(xs=coords, ys=coords)
    def test_module_chain_agrees_with_naive_closure(self, sl2: LieAlgebra, xs, ys):
        assume(any(xs))
        x, y = sl2.field(xs), sl2.field(ys)
        assert generated_subalgebra(sl2, x, y) == naive_closure(sl2, [x, y])

    def test_naive_closure_on_a2(self, a2, rng):
        L = a2.base
        x, y = L.random_vector(rng), L.random_vector(rng)
        assert generated_subalgebra(L, x, y) == naive_closure(L, [x, y])


class TestSubspaces:
    """Centralizers, centers, quotients and sums."""

    def test_centralizer_of_h(self, sl2: LieAlgebra):
        C = centralizer(sl2, [sl2.basis_vector(1)])
        assert C.dim == 1
        assert C.contains(sl2.basis_vector(1))

    def test_sl2_is_perfect_and_centerless(self, sl2: LieAlgebra):
        assert center(sl2).dim == 0
        assert derived_algebra(sl2, sl2.whole()).dim == 3

    def test_direct_sum_and_quotient(self, sl2: LieAlgebra, f5):
        line = LieAlgebra(f5, 1, {}, grading=[0], labels=["z"], name="F")
        total = direct_sum(sl2, line)
        assert total.dim == 4
        assert total.blocks == [(0, 3), (3, 1)]
        assert total.label(3) == "z|2"
        assert validate(total).passed

        z = center(total)
        assert z.dim == 1 and z.contains(total.basis_vector(3))
        q = quotient(total, z)
        assert q.dim == 3
        assert q.parent_indices == [0, 1, 2]
        assert validate(q).passed

    def test_derived_series(self, sl2: LieAlgebra):
        assert derived_series_last(sl2, sl2.whole()).dim == 3
        # the Borel span{e, h} is solvable
        borel = sl2.span([sl2.basis_vector(0), sl2.basis_vector(1)])
        assert derived_algebra(sl2, borel).dim == 1
        assert derived_series_last(sl2, borel).dim == 0

    def test_center_and_quotient(self, sl2: LieAlgebra, f5):
        total = direct_sum(sl2, LieAlgebra(f5, 1, {}, name="F"))
        z, q = center_and_quotient(total)
        assert z.dim == 1
        assert q.dim == 3
        assert center(q).dim == 0

    def test_quotient_by_non_ideal(self, sl2: LieAlgebra):
        with pytest.raises(PreconditionError):
            quotient(sl2, sl2.span([sl2.basis_vector(0)]))

    def test_direct_sum_needs_one_field(self, sl2: LieAlgebra, f25):
        with pytest.raises(SpecMismatch):
            direct_sum(sl2, sl2.over(f25))

    def test_weight_decomposition(self, sl2: LieAlgebra):
        weights = weight_decomposition(sl2, [sl2.basis_vector(1)])
        assert weights.dimensions() == {(0,): 1, (2,): 1, (3,): 1}
        assert weights.weight_of(sl2.basis_vector(0)) == (2,)
        assert weights.total_dim == 3

    def test_support_degrees(self, sl2: LieAlgebra):
        v = sl2.vector({0: 1, 2: 4})
        assert sl2.support_degrees(v) == [-1, 1]
        assert np.array_equal(codes(sl2.component(v, -1)), codes(sl2.vector({2: 4})))


class TestAlgebraFile:
    """The JSON algebra file schema."""

    def test_round_trip(self, sl2: LieAlgebra):
        data = AlgebraFile.from_algebra(sl2)
        rebuilt = AlgebraFile.model_validate_json(data.model_dump_json()).to_algebra()
        assert rebuilt.upper_constants() == sl2.upper_constants()
        assert rebuilt.labels == ["e", "h", "f"]
        assert validate(rebuilt).passed

    def test_lower_pairs_rejected(self):
        with pytest.raises(ValidationError):
            AlgebraFile(
                name="bad", spec={"p": 5, "k": 1, "modulus": [3, 1]}, dim=2, sc=[(1, 0, [(0, [1])])]
            )

    def test_indices_must_fit(self):
        with pytest.raises(ValidationError):
            AlgebraFile(
                name="bad", spec={"p": 5, "k": 1, "modulus": [3, 1]}, dim=2, sc=[(0, 1, [(5, [1])])]
            )

    def test_schema_example_is_sl2(self):
        example = AlgebraFile.model_config["json_schema_extra"]["example"]
        L = AlgebraFile.model_validate(example).to_algebra()
        assert validate(L).passed
