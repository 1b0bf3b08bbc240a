"""Tests for the command line."""

import json

import pytest

from cli.main import EXIT_ASSERTION_FAILED, EXIT_CONFIGURATION_ERROR, EXIT_OK, main
from storage.report_repository import ReportRepository


class TestBuild:
    """modlie build."""

    def test_writes_validated_algebra(self, tmp_path):
        out = tmp_path / "a2.json"
        assert main(["build", "A2", "--out", str(out)]) == EXIT_OK
        data = json.loads(out.read_text())
        assert data["dim"] == 8
        assert data["spec"]["p"] == 5

    @pytest.mark.parametrize(
        "argv",
        [
            ["build", "E6"],
            ["build", "sl5"],
            ["build", "W:3:1", "--cap-dim", "100"],
            ["build", "A1", "--p", "4"],
            ["build", "O:1:1"],
        ],
    )
    def test_configuration_errors(self, tmp_path, monkeypatch, argv):
        monkeypatch.chdir(tmp_path)
        assert main(argv) == EXIT_CONFIGURATION_ERROR
        assert list(tmp_path.iterdir()) == []


class TestVerify:
    """modlie verify."""

    def test_single_check(self, tmp_path):
        out = tmp_path / "verify.jsonl"
        code = main(["verify", "lemmas", "--check", "orders-agree-remark", "--out", str(out)])
        assert code == EXIT_OK
        report = ReportRepository(out).latest()
        assert [a.name for a in report.assertions] == ["orders-agree-remark"]

    def test_weight_check_reports(self, tmp_path):
        out = tmp_path / "verify.jsonl"
        assert main(["verify", "lemmas", "--check", "weight-brackets-add", "--out", str(out)]) == EXIT_OK
        assert ReportRepository(out).latest().assertions[0].passed

    def test_unknown_check(self):
        assert main(["verify", "lemmas", "--check", "no-such-check"]) == EXIT_CONFIGURATION_ERROR

    def test_list(self, capsys):
        assert main(["verify", "lemmas", "--list"]) == EXIT_OK
        assert "orders-agree-remark" in capsys.readouterr().out.split()

    def test_broken_file(self, tmp_path):
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
        assert main(["verify", "axioms", "--file", str(path)]) == EXIT_ASSERTION_FAILED


class TestExperiment:
    """modlie experiment."""

    def test_census_report_is_appended(self, tmp_path):
        out = tmp_path / "runs.jsonl"
        argv = [
            "experiment",
            "--algebra",
            "A1",
            "--experiment",
            "census",
            "--trials",
            "60",
            "--budget-pairs",
            "1000",
            "--seed",
            "4",
            "--out",
            str(out),
        ]
        assert main(argv) == EXIT_OK
        assert main(argv) == EXIT_OK
        first, second = ReportRepository(out).get_all()
        assert first.hash == second.hash
        assert sum(first.histograms["pair_dimension"].values()) == 60

    def test_unknown_experiment(self):
        argv = ["experiment", "--algebra", "A1", "--experiment", "sweep"]
        assert main(argv) == EXIT_CONFIGURATION_ERROR

    def test_gen_alias_and_xlsx(self, tmp_path):
        out = tmp_path / "runs.jsonl"
        xlsx = tmp_path / "runs.xlsx"
        argv = ["gen", "--algebra", "W:1:1", "--experiment", "graded-recipe", "--trials", "1"]
        assert main(argv + ["--out", str(out), "--xlsx", str(xlsx)]) == EXIT_OK
        assert xlsx.stat().st_size > 0
        assert ReportRepository(out).latest().certificates[0].closure_dim == 5

    def test_obstruction_within_bound(self, tmp_path):
        out = tmp_path / "runs.jsonl"
        argv = ["experiment", "--algebra", "W:2:1", "--experiment", "obstruction", "--trials", "2"]
        assert main(argv + ["--out", str(out)]) == EXIT_OK
        report = ReportRepository(out).latest()
        assert report.parameters["bound"] == 25
        assert all(a.passed for a in report.assertions)
