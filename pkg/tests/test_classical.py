"""Tests for classical algebras and their generating partners."""

import numpy as np
import pytest

from builders.classical_builder import ClassicalAlgebra, coroot_span_dim, root_space_dimensions
from builders.divided_powers import DividedPowerAlgebra
from builders.registry import build_algebra, lie_algebra_of, parse_descriptor
from core.field import codes
from core.liealg import center, validate
from schemas.report import GenerationCertificate
from services.classical_service import ClassicalService, is_regular
from services.generation_service import GenerationService, replay
from utils.exceptions import FieldTooSmall, ParseError, PreconditionError, UnsupportedType


class TestDescriptors:
    """Descriptor parsing."""

    @pytest.mark.parametrize(
        "text,family",
        [
            ("A2", "chevalley-simple"),
            ("g2", "chevalley-simple"),
            ("psl:5", "psl"),
            ("gl:3", "gl"),
            ("W:2:1", "witt"),
            ("Zass:2", "zassenhaus"),
            ("O:1:1", "divided-powers"),
            ("A1+A1", "sum"),
        ],
    )
    def test_families(self, text, family):
        assert parse_descriptor(text).family == family

    def test_witt_heights_broadcast(self):
        assert parse_descriptor("W:2:1").heights == (1, 1)
        assert parse_descriptor("W:2:1,2").heights == (1, 2)

    @pytest.mark.parametrize("text", ["E6", "F4"])
    def test_exceptional_series_unsupported(self, text):
        with pytest.raises(UnsupportedType):
            parse_descriptor(text)

    @pytest.mark.parametrize("text", ["", "sl5", "W:2:1,1,1", "A1+W:1:1", "Zass:"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_descriptor(text)

    def test_divided_powers_are_not_lie(self, f5):
        built = build_algebra("O:1:1", f5)
        assert isinstance(built, DividedPowerAlgebra)
        with pytest.raises(ParseError):
            lie_algebra_of(built)


class TestConstruction:
    """Dimensions and root data of the classical families over F_5."""

    @pytest.mark.parametrize(
        "text,dim",
        [("A1", 3), ("A2", 8), ("B2", 10), ("G2", 14), ("C3", 21), ("gl:2", 4), ("pgl:2", 3)],
    )
    def test_dimensions(self, f5, text, dim):
        g = build_algebra(text, f5)
        assert g.dim == dim
        assert validate(g.base).passed

    def test_sl_with_central_scalars(self, f5):
        sl5 = build_algebra("sl:5", f5)
        assert sl5.dim == 24
        assert center(sl5.base).dim == 1
        assert not sl5.is_simple_kind

    def test_psl_drops_the_center(self, f5):
        psl5 = build_algebra("psl:5", f5)
        assert psl5.dim == 23
        assert psl5.is_simple_kind
        assert center(psl5.base).dim == 0

    def test_root_spaces_of_a2(self, a2: ClassicalAlgebra):
        dims = root_space_dimensions(a2)
        assert len(dims) == 6
        assert set(dims.values()) == {1}
        assert coroot_span_dim(a2) == 2

    def test_a2_grading_by_height(self, a2: ClassicalAlgebra):
        assert a2.base.degrees == [-2, -1, 0, 1, 2]

    def test_direct_sum(self, f5):
        g = build_algebra("A1+A1", f5)
        assert g.dim == 6
        assert g.kind == "direct-sum"
        assert len(g.roots) == 4
        assert center(g.base).dim == 0
        assert not g.is_simple_kind


class TestRegularCartanPartners:
    """Partners from regular Cartan elements after densifying x."""

    def test_no_regular_element_of_a2_over_f5(self, a2: ClassicalAlgebra):
        with pytest.raises(FieldTooSmall):
            ClassicalService(seed=0, budget=10).regular_cartan_element(a2)

    def test_regular_element_over_f25(self, a2: ClassicalAlgebra, f25):
        g = a2.over(f25)
        y = ClassicalService(seed=0).regular_cartan_element(g)
        assert is_regular(g, y)

    def test_a2_needs_the_quadratic_extension(self, a2: ClassicalAlgebra, rng):
        x = a2.base.random_vector(rng)
        result = GenerationService(seed=0).one_and_half_search(a2, x)
        assert isinstance(result, GenerationCertificate)
        assert result.method == "theoremB"
        assert result.details["extension_degree"] == 2
        assert result.closure_dim == 8
        assert replay(a2.over(a2.spec.extension(2)).base, result)

    def test_sl2_partner_in_prime_field(self, f5):
        g = build_algebra("A1", f5)
        x = g.root_vector(g.roots[0])
        result = GenerationService(seed=1).one_and_half_search(g, x)
        assert result.details["extension_degree"] == 1
        assert result.closure_dim == 3

    def test_zero_x_rejected(self, a2: ClassicalAlgebra):
        with pytest.raises(PreconditionError):
            GenerationService(seed=0).one_and_half_search(a2, a2.base.zero())


class TestCentralExtension:
    """gl_n through its quotient by the scalars."""

    def test_gl2_partner(self, f5):
        g = build_algebra("gl:2", f5)
        x = g.base.vector({0: 1, 1: 1})  # E12 + E11
        result = GenerationService(seed=0).one_and_half_search(g, x)
        assert result.method == "central-extension"
        assert result.closure_dim == 4

    def test_scalar_x_rejected(self, f5):
        g = build_algebra("gl:2", f5)
        scalar = g.base.vector({1: 1, 2: 1})
        assert center(g.base).contains(scalar)
        with pytest.raises(PreconditionError):
            GenerationService(seed=0).one_and_half_search(g, scalar)

    def test_root_automorphism_is_automorphism(self, a2: ClassicalAlgebra):
        service = ClassicalService(seed=0)
        sigma = service.exp_ad_automorphism(a2, a2.roots[0], a2.base.field(3))
        assert service.is_automorphism(a2.base, sigma)
        assert not np.any(codes(sigma @ a2.root_vector(a2.roots[0]) - a2.root_vector(a2.roots[0])))
