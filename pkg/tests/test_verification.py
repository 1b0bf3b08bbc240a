"""Tests for the assertion suites."""

import pytest

from services import verification_service
from services.verification_service import VerificationService, available_checks
from utils.exceptions import ParseError, PreconditionError

CHEAP_CHECKS = [
    "field-axioms",
    "frobenius-homomorphism",
    "p-polynomial-roots-subgroup",
    "divided-power-p-th-powers",
    "zassenhaus-witt-isomorphism",
    "grading-compatibility",
    "weight-brackets-add",
    "orders-agree-remark",
]


@pytest.fixture
def service() -> VerificationService:
    return VerificationService(seed=0, trials=5)


class TestRegistry:
    """Registered lemma checks."""

    def test_names_are_unique_and_descriptive(self):
        names = available_checks()
        assert len(names) == len(set(names))
        assert set(CHEAP_CHECKS) <= set(names)
        assert all(name == name.lower() and " " not in name for name in names)

    def test_unknown_check(self, service):
        with pytest.raises(ParseError):
            service.run("lemmas", checks=["no-such-check"])

    def test_errors_become_failures(self, service, monkeypatch):
        def broken(svc):
            raise PreconditionError("outside the domain")

        monkeypatch.setitem(verification_service.LEMMA_CHECKS, "broken", broken)
        record = service.run_check("broken")
        assert not record.passed
        assert record.detail.startswith("PreconditionError")

    def test_internal_errors_become_failures(self, service, monkeypatch):
        def crashing(svc):
            return len(None)

        monkeypatch.setitem(verification_service.LEMMA_CHECKS, "crashing", crashing)
        records = service.run("lemmas", checks=["crashing", "orders-agree-remark"])
        assert [r.passed for r in records] == [False, True]
        assert records[0].detail.startswith("internal error TypeError")


class TestLemmas:
    """A selection of checks that run quickly."""

    @pytest.mark.parametrize("name", CHEAP_CHECKS)
    def test_check_passes(self, service, name):
        record = service.run_check(name)
        assert record.name == name
        assert record.passed, record.detail

    def test_run_returns_one_record_per_check(self, service):
        records = service.run("lemmas", checks=CHEAP_CHECKS[:3])
        assert [r.name for r in records] == CHEAP_CHECKS[:3]

    def test_weight_spaces_fill_w21(self, service):
        record = service.run_check("weight-brackets-add")
        assert record.passed, record.detail
        assert record.detail == "1225 cases"


class TestFullSuite:
    """Every registered check on a small corpus."""

    @pytest.mark.slow
    @pytest.mark.parametrize("name", available_checks())
    def test_check_passes(self, name):
        record = VerificationService(seed=0, trials=2).run_check(name)
        assert record.passed, record.detail

    @pytest.mark.slow
    def test_graded_recipe_at_seven(self):
        record = VerificationService(seed=0, trials=2, p=7).run_check("graded-recipe-generates")
        assert record.passed, record.detail


class TestAxioms:
    """Validation of built algebras."""

    def test_single_algebra(self):
        records = VerificationService(seed=0, trials=5, algebra="A1").run("axioms")
        assert [r.name for r in records] == ["axioms:A1@F5", "closure-oracle:A1@F5"]
        assert all(r.passed for r in records)

    def test_divided_powers_rejected(self):
        with pytest.raises(ParseError):
            VerificationService(algebra="O:1:1").run("axioms")

    def test_build_cache(self, service):
        assert service.build("W:1:1") is service.build("W:1:1")
