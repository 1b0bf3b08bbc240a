"""Tests for finite field arithmetic."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from core.field import (
    FieldSpec,
    element,
    element_from_json,
    element_to_json,
    embed,
    enumerate_field,
    field_arith,
    frobenius,
    generator,
    in_prime_field,
)
from utils.exceptions import DivisionByZero, FieldTooLargeForEnumeration, PreconditionError, SpecMismatch

F25 = FieldSpec.create(5, 2)


class TestFieldSpec:
    """Tests for FieldSpec."""

    def test_shipped_moduli(self):
        assert FieldSpec.create(5).modulus == (3, 1)
        assert F25.modulus == (2, 4, 1)
        assert F25.order == 25

    def test_labels(self):
        assert FieldSpec.create(7).label == "F7"
        assert F25.label == "F5^2"
        assert FieldSpec.create(5).extension(2) == F25

    @pytest.mark.parametrize("p", [2, 3, 6, 9])
    def test_rejects_small_or_composite_characteristic(self, p):
        with pytest.raises(ValidationError):
            FieldSpec(p=p, k=1, modulus=(1, 1))

    def test_rejects_non_monic_modulus(self):
        with pytest.raises(ValidationError):
            FieldSpec(p=5, k=2, modulus=(2, 4, 2))

    def test_create_needs_a_prime(self):
        with pytest.raises(PreconditionError):
            FieldSpec.create(4)

    def test_json(self):
        assert FieldSpec.from_json(F25.to_json()) == F25


class TestArithmetic:
    """Tests for field_arith and friends."""

    def test_inverse_of_zero(self):
        with pytest.raises(DivisionByZero):
            field_arith("inv", F25.gf(0))

    def test_mixed_fields(self):
        with pytest.raises(SpecMismatch):
            field_arith("add", F25.gf(1), FieldSpec.create(5).gf(1))

    def test_generator_is_primitive(self):
        theta = generator(F25)
        assert theta ** 24 == 1
        assert theta ** 12 != 1
        assert theta ** 8 != 1

    def test_element_coefficients(self):
        a = element(F25, [1, 2])
        assert int(a) == 11
        assert element_to_json(a) == [1, 2]
        assert element_from_json(F25, [1, 2]) == a

    def test_enumeration_bound(self):
        assert len(enumerate_field(F25)) == 25
        with pytest.raises(FieldTooLargeForEnumeration):
            enumerate_field(F25, bound=10)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 24), st.integers(0, 24))
    def test_frobenius_is_additive_and_multiplicative(self, a, b):
        x, y = F25.gf(a), F25.gf(b)
        assert frobenius(x + y) == frobenius(x) + frobenius(y)
        assert frobenius(x * y) == frobenius(x) * frobenius(y)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 24))
    def test_inverse(self, a):
        x = F25.gf(a)
        assert field_arith("mul", x, field_arith("inv", x)) == 1


class TestEmbedding:
    """Tests for subfield embeddings."""

    def test_prime_field_keeps_codes(self):
        f5 = FieldSpec.create(5)
        values = f5.gf([0, 1, 2, 3, 4])
        lifted = embed(values, F25)
        assert [int(v) for v in lifted] == [0, 1, 2, 3, 4]
        assert in_prime_field(lifted)

    def test_no_embedding_into_a_smaller_field(self):
        with pytest.raises(SpecMismatch):
            embed(F25.gf([7]), FieldSpec.create(5))

    def test_embedding_is_a_homomorphism(self):
        f625 = FieldSpec.create(5, 4)
        a, b = F25.gf(7), F25.gf(13)
        assert embed(a * b, f625) == embed(a, f625) * embed(b, f625)
        assert embed(a + b, f625) == embed(a, f625) + embed(b, f625)
