"""Tests for reports, their storage and export."""

import json

import pytest
from openpyxl import load_workbook

from core.liealg import LieAlgebra
from schemas.experiment import ExperimentConfig
from schemas.report import CheckResult, NotFound, ObstructionReport, ObstructionTrial
from services.experiment_service import ExperimentService
from services.export_service import ExportService
from services.report_service import ReportService, canonical_json, report_hash
from storage.algebra_repository import AlgebraRepository
from storage.report_repository import ReportRepository
from utils.exceptions import ParseError, ValidationFailure


def sample_report(seed: int = 0):
    service = ReportService("census", algebra="A1", field="F5")
    service.set_parameters(seed=seed, trials=3)
    service.add_histogram("pair_dimension", {3: 2, 1: 1})
    service.add_assertion("counts-sum-to-sample", True, "3 of 3")
    service.add_assertion("top-stratum-nonempty", False, "0 generating pairs")
    service.add_not_found(NotFound(searched="random partners", field="F5^2"))
    return service.finalize()


class TestReportService:
    """Report assembly and hashing."""

    def test_hash_ignores_meta(self):
        a = sample_report()
        b = sample_report()
        assert a.hash == b.hash
        b.meta["host"] = "elsewhere"
        assert report_hash(b) == a.hash

    def test_hash_follows_content(self):
        assert sample_report(seed=0).hash != sample_report(seed=1).hash

    def test_canonical_form(self):
        report = sample_report()
        text = canonical_json(report)
        assert '"meta"' not in text and '"hash"' not in text
        assert " " not in text.replace("0 generating pairs", "").replace("3 of 3", "").replace(
            "random partners", ""
        )
        assert json.loads(text)["assertions"][0]["pass"] is True

    def test_passed_needs_every_assertion(self):
        assert not sample_report().passed

    def test_checks_become_assertions(self):
        service = ReportService("verify")
        service.add_checks([CheckResult(name="jacobi", passed=True)], prefix="axioms:")
        assert service.report.assertions[0].name == "axioms:jacobi"

    def test_obstruction_histograms(self):
        service = ReportService("obstruction")
        obstruction = ObstructionReport(
            algebra="W:2:1",
            x=[[1]],
            bound=25,
            algebra_dim=50,
            trials=[
                ObstructionTrial(trial=0, pair_dim=1, derived_dim=0, dependence_index=0),
                ObstructionTrial(trial=1, pair_dim=12, derived_dim=9, dependence_index=2),
            ],
        )
        service.add_obstruction(obstruction, label="x^(4,4)D_1")
        report = service.report
        assert report.histograms["derived_dimension[x^(4,4)D_1]"] == {0: 1, 9: 1}
        assert report.histograms["dependence_index[x^(4,4)D_1]"] == {0: 1, 2: 1}
        assert report.assertions[-1].passed

    def test_same_config_same_hash(self):
        config = ExperimentConfig(algebra="A1", experiment="census", trials=60, seed=4, budget_pairs=1000)
        first = ExperimentService(config).run()
        second = ExperimentService(config).run()
        assert first.hash == second.hash
        assert first.passed


class TestReportRepository:
    """Append-only JSON lines."""

    def test_append_and_read(self, tmp_path):
        repo = ReportRepository(tmp_path / "runs" / "reports.jsonl")
        first, second = sample_report(0), sample_report(1)
        repo.append(first)
        repo.append(second)
        lines = repo.path.read_text().splitlines()
        assert len(lines) == 2
        assert repo.latest().hash == second.hash
        assert repo.get_by_hash(first.hash).parameters["seed"] == 0
        assert repo.get_by_hash("0" * 64) is None

    def test_reload_keeps_hash(self, tmp_path):
        repo = ReportRepository(tmp_path / "reports.jsonl")
        report = sample_report()
        repo.append(report)
        loaded = repo.get_all()[0]
        assert loaded.histograms["pair_dimension"] == {1: 1, 3: 2}
        assert report_hash(loaded) == report.hash

    def test_missing_file_is_empty(self, tmp_path):
        assert ReportRepository(tmp_path / "none.jsonl").get_all() == []

    def test_corrupt_line(self, tmp_path):
        path = tmp_path / "reports.jsonl"
        path.write_text('{"experiment": 3}\n')
        with pytest.raises(ParseError):
            ReportRepository(path).get_all()


class TestAlgebraRepository:
    """Algebra files."""

    def test_save_and_load(self, tmp_path, sl2: LieAlgebra):
        repo = AlgebraRepository(tmp_path)
        path = repo.save(sl2)
        assert path == tmp_path / "sl2.json"
        assert repo.exists("sl2")
        L, report = repo.load(path)
        assert report.passed
        assert L.upper_constants() == sl2.upper_constants()

    def test_invalid_algebra_not_written(self, tmp_path, f5):
        broken = LieAlgebra(f5, 3, {(0, 1): {1: 1}, (1, 2): {0: 1}}, name="broken")
        repo = AlgebraRepository(tmp_path)
        with pytest.raises(ValidationFailure):
            repo.save(broken)
        assert not repo.exists("broken")

    def test_invalid_file_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(
            json.dumps(
                {
                    "name": "broken",
                    "spec": {"p": 5, "k": 1, "modulus": [3, 1]},
                    "dim": 3,
                    "sc": [[0, 1, [[1, [1]]]], [1, 2, [[0, [1]]]]],
                }
            )
        )
        with pytest.raises(ValidationFailure):
            AlgebraRepository(tmp_path).load(path)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ParseError):
            AlgebraRepository(tmp_path).load(tmp_path / "missing.json")
        (tmp_path / "garbage.json").write_text("{")
        with pytest.raises(ParseError):
            AlgebraRepository(tmp_path).load(tmp_path / "garbage.json")


class TestExport:
    """Excel export."""

    def test_workbook(self):
        report = sample_report()
        workbook = load_workbook(ExportService().export_report_to_excel(report))
        assert workbook.sheetnames == ["Summary", "Assertions", "Certificates", "Histograms", "Not found"]
        assertions = workbook["Assertions"]
        assert assertions["B2"].value == "counts-sum-to-sample"
        assert assertions["C3"].value == "FAIL"
        assert assertions.freeze_panes == "A2"
        histograms = workbook["Histograms"]
        assert [histograms.cell(row=r, column=2).value for r in (2, 3)] == [1, 3]
