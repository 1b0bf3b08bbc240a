"""Append-only report repository."""

import json
from pathlib import Path
from typing import Iterator, Optional, Union

from pydantic import ValidationError

from config.logging_config import get_logger
from schemas.report import Report
from utils.exceptions import ParseError

logger = get_logger(__name__)


class ReportRepository:
    """Repository for reports stored as JSON lines, one report per line."""

    def __init__(self, path: Union[str, Path]) -> None:
        """Initialize repository with the report file."""
        self.path = Path(path)

    def append(self, report: Report) -> None:
        """Append a report; earlier lines are never rewritten."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        line = json.dumps(report.model_dump(mode="json", by_alias=True), sort_keys=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")
        logger.info(f"Appended {report.experiment} report {report.hash} to {self.path}")

    def __iter__(self) -> Iterator[Report]:
        if not self.path.exists():
            return
        with self.path.open(encoding="utf-8") as fh:
            for number, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    yield Report.model_validate_json(line)
                except ValidationError as e:
                    raise ParseError(f"{self.path}:{number}: not a report: {e}") from e

    def get_all(self) -> list[Report]:
        """Get all reports in file order."""
        return list(self)

    def get_by_hash(self, digest: str) -> Optional[Report]:
        """Get the first report with a given hash."""
        return next((r for r in self if r.hash == digest), None)

    def latest(self) -> Optional[Report]:
        """Get the most recently appended report."""
        reports = self.get_all()
        return reports[-1] if reports else None
