"""Base builder class for all algebra constructions."""

from abc import ABC, abstractmethod
from typing import Any, Optional

from config.logging_config import get_logger
from config.settings import settings
from core.field import FieldSpec
from core.liealg import LieAlgebra, validate
from utils.exceptions import DimensionCapExceeded, ValidationFailure

logger = get_logger(__name__)


class BaseBuilder(ABC):
    """Base abstract class for all builders."""

    def __init__(self, family: str, descriptor: str) -> None:
        """
        Initialize base builder.

        Args:
            family: Family name (e.g., 'classical', 'witt')
            descriptor: Descriptor string the builder was created from
        """
        self.family = family
        self.descriptor = descriptor
        self.logger = get_logger(f"{__name__}.{self.__class__.__name__}")

    @abstractmethod
    def expected_dim(self, p: int) -> int:
        """
        Dimension of the algebra in characteristic p.

        Args:
            p: Characteristic

        Returns:
            Number of basis elements
        """
        pass

    @abstractmethod
    def build(self, spec: FieldSpec) -> Any:
        """
        Construct the algebra over a field.

        Args:
            spec: Working field

        Returns:
            The constructed algebra object
        """
        pass

    def check_cap(self, p: int, cap: Optional[int] = None) -> int:
        """
        Refuse constructions above the dimension cap.

        Args:
            p: Characteristic
            cap: Override of the configured cap

        Returns:
            The expected dimension
        """
        cap = cap if cap is not None else settings.dimension_cap
        dim = self.expected_dim(p)
        if dim > cap:
            raise DimensionCapExceeded(f"{self.descriptor} has dimension {dim} > cap {cap}")
        return dim

    def validated(self, algebra: LieAlgebra) -> LieAlgebra:
        """
        Run the structural checks and raise on failure.

        Args:
            algebra: Freshly built algebra

        Returns:
            The same algebra
        """
        report = validate(algebra)
        if not report.passed:
            raise ValidationFailure(f"{algebra.name}: {report.first_failure()}")
        self.logger.info(f"Built {algebra.name} (dim {algebra.dim}) over {algebra.spec.label}")
        return algebra
