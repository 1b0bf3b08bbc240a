"""Report assembly and hashing."""

import hashlib
import json
import platform
from typing import Any, Iterable, Optional

from config.logging_config import get_logger
from config.settings import settings
from schemas.report import (
    AssertionRecord,
    CheckResult,
    GenerationCertificate,
    NotFound,
    ObstructionReport,
    Report,
    StrataCensus,
)
from utils.helpers import format_date

logger = get_logger(__name__)

HASH_EXCLUDED = {"meta", "hash"}


def canonical_json(report: Report) -> str:
    """Hashed form: sorted keys, no whitespace, meta and hash left out."""
    payload = report.model_dump(mode="json", by_alias=True, exclude=HASH_EXCLUDED)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def report_hash(report: Report) -> str:
    """sha256 of the canonical form."""
    return hashlib.sha256(canonical_json(report).encode("utf-8")).hexdigest()


class ReportService:
    """Service for building reports from experiment and verification results."""

    def __init__(self, experiment: str, algebra: Optional[str] = None, field: Optional[str] = None) -> None:
        """
        Initialize an empty report.

        Args:
            experiment: Experiment or suite name
            algebra: Algebra descriptor
            field: Field label
        """
        self.report = Report(
            schema_version=settings.report_schema_version,
            experiment=experiment,
            algebra=algebra,
            field=field,
        )

    def set_parameters(self, **parameters: Any) -> None:
        """Record the run parameters (seed, trials, budgets)."""
        self.report.parameters.update(parameters)

    def add_assertion(self, name: str, passed: bool, detail: str = "") -> AssertionRecord:
        """Append a pass/fail assertion."""
        record = AssertionRecord(name=name, passed=bool(passed), detail=detail)
        self.report.assertions.append(record)
        if not record.passed:
            logger.warning(f"Assertion {name} failed: {detail}")
        return record

    def add_checks(self, checks: Iterable[CheckResult], prefix: str = "") -> None:
        """Append structural or verification checks as assertions."""
        for check in checks:
            self.add_assertion(f"{prefix}{check.name}", check.passed, check.detail or "")

    def add_certificate(self, certificate: GenerationCertificate) -> None:
        """Append a generation certificate."""
        self.report.certificates.append(certificate)

    def add_not_found(self, not_found: NotFound) -> None:
        """Append a search without witness."""
        self.report.not_found.append(not_found)

    def add_histogram(self, name: str, histogram: dict[int, int]) -> None:
        """Store a histogram under ``name``."""
        self.report.histograms[name] = dict(sorted(histogram.items()))

    def add_census(self, census: StrataCensus) -> None:
        """Store a strata census as the pair-dimension histogram."""
        self.add_histogram("pair_dimension", census.histogram)
        self.set_parameters(plan=census.plan, sample_size=census.sample_size)

    def add_obstruction(self, obstruction: ObstructionReport, label: Optional[str] = None) -> None:
        """Store the histograms and the bound assertion of an obstruction run for one x."""
        suffix = f"[{label}]" if label else ""
        derived: dict[int, int] = {}
        pair: dict[int, int] = {}
        branches: dict[int, int] = {}
        for trial in obstruction.trials:
            derived[trial.derived_dim] = derived.get(trial.derived_dim, 0) + 1
            pair[trial.pair_dim] = pair.get(trial.pair_dim, 0) + 1
            if trial.dependence_index is not None:
                branches[trial.dependence_index] = branches.get(trial.dependence_index, 0) + 1
        self.add_histogram(f"derived_dimension{suffix}", derived)
        self.add_histogram(f"pair_dimension{suffix}", pair)
        if branches:
            self.add_histogram(f"dependence_index{suffix}", branches)
        self.set_parameters(bound=obstruction.bound)
        self.add_assertion(f"derived-dimension-bound{suffix}", not obstruction.violations, obstruction.verdict)

    def finalize(self, meta: Optional[dict[str, Any]] = None) -> Report:
        """Stamp meta and hash; the hash ignores meta."""
        self.report.meta = {
            "created_at": format_date(),
            "host": platform.node(),
            "python": platform.python_version(),
            **(meta or {}),
        }
        self.report.hash = report_hash(self.report)
        logger.info(
            f"Report {self.report.experiment}: {len(self.report.assertions)} assertions, "
            f"hash {self.report.hash[:12]}"
        )
        return self.report
