"""Tests for the generation service."""

import pytest

from builders.registry import build_algebra
from core.liealg import LieAlgebra
from schemas.report import GenerationCertificate, NotFound
from services.generation_service import GenerationService, certify, replay, top_element_branches
from utils.exceptions import BudgetExceeded, FieldTooSmall, PreconditionError


@pytest.fixture
def service() -> GenerationService:
    return GenerationService(seed=0)


class TestStrataCensus:
    """Histograms of dim F<x, y>."""

    def test_exhaustive_on_a_line(self, service, f5):
        line = LieAlgebra(f5, 1, {}, name="F")
        census = service.strata_census(line, plan="exhaustive")
        assert census.histogram == {0: 1, 1: 24}
        assert census.sample_size == 25
        assert census.seed is None

    def test_budget(self, service, sl2: LieAlgebra):
        with pytest.raises(BudgetExceeded):
            service.strata_census(sl2, plan="exhaustive", pair_budget=100)

    def test_random_sample(self, service, sl2: LieAlgebra):
        census = service.strata_census(sl2, sample_size=40)
        assert sum(census.histogram.values()) == 40
        assert max(census.histogram) <= 3
        assert census.seed == 0

    def test_shards_merge(self, service, sl2: LieAlgebra):
        whole = service.strata_census(sl2, sample_size=30)
        first = service.strata_census(sl2, sample_size=12)
        second = service.strata_census(sl2, sample_size=18, start=12)
        assert first.merge(second).histogram == whole.histogram

    def test_reproducible(self, sl2: LieAlgebra):
        a = GenerationService(seed=5).strata_census(sl2, sample_size=20)
        b = GenerationService(seed=5).strata_census(sl2, sample_size=20)
        assert a == b


class TestCertificates:
    """Certificates and their replay."""

    def test_certify_and_replay(self, sl2: LieAlgebra):
        cert = certify(sl2, sl2.basis_vector(0), sl2.basis_vector(2), "search", seed=3)
        assert cert.closure_dim == 3
        assert cert.field == "F5"
        assert replay(sl2, cert)

    def test_tampered_certificate(self, sl2: LieAlgebra):
        cert = certify(sl2, sl2.basis_vector(0), sl2.basis_vector(1), "search")
        assert cert.closure_dim == 2
        forged = cert.model_copy(update={"closure_dim": 3})
        assert not replay(sl2, forged)


class TestGradedRecipe:
    """x = x_-1 + x_0 + x_s with y in the standard torus."""

    def test_w11_over_prime_field(self, service, w11):
        cert = service.graded_recipe_pair(w11)
        assert cert.method == "graded-recipe"
        assert cert.closure_dim == 5
        assert cert.details["alpha_bottom"] == [4]
        assert cert.details["alpha_top"] == [3]
        assert replay(w11.base, cert)

    def test_w21_needs_extension(self, service, w21):
        with pytest.raises(FieldTooSmall):
            service.graded_recipe_pair(w21)

    @pytest.mark.slow
    def test_w21_over_f25(self, service, w21, f25):
        cert = service.graded_recipe_pair(w21.over(f25))
        assert cert.closure_dim == 50
        assert cert.field == "F5^2"
        assert len(cert.details["y0_coefficients"]) == 2


class TestZassenhaus:
    """Partners e_-1 + alpha e_s in W(1, n)."""

    def test_top_element(self, service, zass1):
        cert = service.zassenhaus_partner(zass1, zass1.e(3))
        assert cert.details["alpha"] is None
        assert cert.y == [[1], [0], [0], [0], [0]]
        assert cert.closure_dim == 5

    def test_bottom_element(self, service, zass1):
        cert = service.zassenhaus_partner(zass1, zass1.e(-1))
        assert cert.details["extension_degree"] == 1
        assert cert.details["alpha"] == [1]
        assert cert.closure_dim == 5

    def test_determinant(self, zass1):
        x = zass1.e(-1)
        y = zass1.e(-1) + zass1.e(3)
        assert GenerationService.zassenhaus_det(zass1, x, y) != 0
        assert GenerationService.zassenhaus_det(zass1, x, zass1.e(-1)) == 0

    def test_determinant_polynomial_needs_room(self, zass1, f25):
        assert GenerationService.det_polynomial(zass1, zass1.e(-1)) is None
        poly = GenerationService.det_polynomial(zass1.over(f25), zass1.over(f25).e(-1))
        assert poly is not None
        assert poly.degree >= 1

    def test_needs_one_variable(self, service, w21):
        with pytest.raises(PreconditionError):
            service.zassenhaus_partner(w21, w21.partial(0))

    def test_recipe_strategy_dispatch(self, service, zass1):
        result = service.one_and_half_search(zass1, zass1.e(1))
        assert isinstance(result, GenerationCertificate)
        assert result.method == "zassenhaus"
        assert result.closure_dim == 5


class TestObstruction:
    """Subalgebras generated by a top-degree element of W(m, 1)."""

    def test_top_basis_vector(self, service, w21):
        x = w21.base.basis_vector(int(w21.component_indices(w21.top_degree)[0]))
        report = service.obstruction_report(w21, x, trials=3, include_zero=True)
        assert report.bound == 25
        assert len(report.trials) == 3
        assert report.trials[0].pair_dim == 1
        assert report.trials[0].derived_dim == 0
        assert report.trials[0].branch == "k<m"
        assert report.violations == []

    def test_branch_checks_for_a_sum_of_partials(self, w21):
        x = w21.base.basis_vector(int(w21.component_indices(w21.top_degree)[0]))
        y = w21.partial(0) + w21.partial(1)
        k, branch, checks = top_element_branches(w21, x, y)
        assert k <= w21.m
        assert all(checks.values())

    def test_needs_several_variables(self, service, w11):
        with pytest.raises(PreconditionError):
            service.obstruction_report(w11, w11.e(3), trials=1)

    def test_needs_top_element(self, service, w21):
        with pytest.raises(PreconditionError):
            service.obstruction_report(w21, w21.partial(0), trials=1)


class TestSearch:
    """Exhaustive and random partner searches."""

    def test_exhaustive_on_a1(self, service, f5):
        g = build_algebra("A1", f5)
        result = service.one_and_half_search(g, g.root_vector(g.roots[0]), "exhaustive")
        assert isinstance(result, GenerationCertificate)
        assert result.closure_dim == 3

    def test_exhaustive_grid_without_partner(self, service, f5):
        g = build_algebra("A1", f5)
        e = g.root_vector(g.roots[0])
        # partners inside F e never generate
        result = service.one_and_half_search(g, e, "exhaustive", grid=[g.root_index[g.roots[0]]])
        assert isinstance(result, NotFound)
        assert result.exhaustive
        assert "exhaustive" in result.verdict

    def test_exhaustive_budget(self, service, a2):
        with pytest.raises(BudgetExceeded):
            service.one_and_half_search(a2, a2.base.basis_vector(0), "exhaustive")

    def test_random_ladder(self, f5):
        g = build_algebra("A1", f5)
        result = GenerationService(seed=2, budget=50).one_and_half_search(
            g, g.root_vector(g.roots[0]), "random"
        )
        assert result.method == "search"
        assert result.closure_dim == 3
