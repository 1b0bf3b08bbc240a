"""Algebra file repository."""

import json
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from config.logging_config import get_logger
from core.liealg import LieAlgebra, validate
from schemas.algebra import AlgebraFile
from schemas.report import ValidationReport
from utils.exceptions import ParseError, ValidationFailure

logger = get_logger(__name__)


class AlgebraRepository:
    """Repository for algebra JSON files under a root directory."""

    def __init__(self, root: Union[str, Path] = ".") -> None:
        """Initialize repository with its root directory."""
        self.root = Path(root)

    def path_for(self, name: str) -> Path:
        """Default file path of an algebra."""
        safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in name)
        return self.root / f"{safe}.json"

    def save(self, L: LieAlgebra, path: Optional[Union[str, Path]] = None) -> Path:
        """Validate and write an algebra; invalid algebras are never written."""
        report = validate(L)
        if not report.passed:
            raise ValidationFailure(f"{L.name}: {report.first_failure()}")
        target = Path(path) if path is not None else self.path_for(L.name)
        target.parent.mkdir(parents=True, exist_ok=True)
        data = AlgebraFile.from_algebra(L).model_dump(mode="json")
        target.write_text(json.dumps(data, indent=1), encoding="utf-8")
        logger.info(f"Saved {L.name} (dim {L.dim}) to {target}")
        return target

    def load(self, path: Union[str, Path]) -> tuple[LieAlgebra, ValidationReport]:
        """
        Read an algebra file and validate it.

        Raises:
            ParseError: If the file is not a well-formed algebra file
            ValidationFailure: If antisymmetry, Jacobi or the grading fail
        """
        source = Path(path)
        try:
            data = AlgebraFile.model_validate_json(source.read_text(encoding="utf-8"))
        except (OSError, ValidationError) as e:
            raise ParseError(f"cannot read algebra file {source}: {e}") from e
        L = data.to_algebra()
        report = validate(L)
        if not report.passed:
            raise ValidationFailure(f"{source}: {report.first_failure()}")
        return L, report

    def exists(self, name: str) -> bool:
        """Whether the default file of an algebra exists."""
        return self.path_for(name).exists()
