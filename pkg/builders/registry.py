"""Descriptor parsing and dispatch to the builders."""

import re
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from builders.classical_builder import ClassicalAlgebra, build_classical, classical_direct_sum
from builders.divided_powers import DividedPowerAlgebra, build_divided_powers
from builders.root_system import SUPPORTED_TYPES
from builders.witt_builder import WittAlgebra, build_witt, build_zassenhaus
from config.logging_config import get_logger
from core.field import FieldSpec
from core.liealg import LieAlgebra
from utils.exceptions import ParseError, UnsupportedType

logger = get_logger(__name__)

Family = Literal["chevalley-simple", "sl", "psl", "gl", "pgl", "witt", "zassenhaus", "divided-powers", "sum"]
Built = Union[ClassicalAlgebra, WittAlgebra, DividedPowerAlgebra]

_CHEVALLEY = re.compile(r"^([A-Za-z])(\d+)$")
_MATRIX = re.compile(r"^(sl|psl|gl|pgl):(\d+)$")
_WITT = re.compile(r"^(W|O):(\d+):(\d+(?:,\d+)*)$")
_ZASS = re.compile(r"^Zass:(\d+)$")


class Descriptor(BaseModel):
    """A parsed algebra descriptor."""

    text: str = Field(..., description="Descriptor as written")
    family: Family
    kind: Optional[str] = Field(None, description="Series letter for Chevalley types")
    size: int = Field(0, ge=0, description="Rank, matrix size, m, or Zassenhaus n")
    heights: tuple[int, ...] = Field(default_factory=tuple, description="n for W and O")
    parts: list["Descriptor"] = Field(default_factory=list, description="Summands of a sum")

    @property
    def is_classical(self) -> bool:
        """Built through the classical builder."""
        if self.family == "sum":
            return all(part.is_classical for part in self.parts)
        return self.family in ("chevalley-simple", "sl", "psl", "gl", "pgl")

    @property
    def is_lie(self) -> bool:
        """Everything except O(m, n) is a Lie algebra."""
        return self.family != "divided-powers"


Descriptor.model_rebuild()


def parse_descriptor(text: str) -> Descriptor:
    """
    Parse descriptors such as A2, G2, psl:5, W:2:1,1, Zass:2, O:1:1 or A1+A1.

    Raises:
        ParseError: If the text matches no family
        UnsupportedType: For E and F series
    """
    text = text.strip()
    if "+" in text:
        parts = [parse_descriptor(chunk) for chunk in text.split("+")]
        if not all(part.is_classical for part in parts):
            raise ParseError(f"direct sums are built for classical summands only: {text!r}")
        return Descriptor(text=text, family="sum", parts=parts)

    match = _CHEVALLEY.match(text)
    if match:
        kind, rank = match.group(1).upper(), int(match.group(2))
        if kind not in SUPPORTED_TYPES:
            raise UnsupportedType(f"type {kind}{rank} is not supported")
        return Descriptor(text=text.upper(), family="chevalley-simple", kind=kind, size=rank)

    match = _MATRIX.match(text)
    if match:
        return Descriptor(text=text, family=match.group(1), size=int(match.group(2)))

    match = _WITT.match(text)
    if match:
        m = int(match.group(2))
        heights = tuple(int(k) for k in match.group(3).split(","))
        if len(heights) == 1 and m > 1:
            heights = heights * m
        if len(heights) != m:
            raise ParseError(f"{text!r}: n must have {m} entries")
        family = "witt" if match.group(1) == "W" else "divided-powers"
        return Descriptor(text=text, family=family, size=m, heights=heights)

    match = _ZASS.match(text)
    if match:
        return Descriptor(text=text, family="zassenhaus", size=int(match.group(1)))

    raise ParseError(f"cannot parse algebra descriptor {text!r}")


def build_algebra(descriptor: Union[str, Descriptor], spec: FieldSpec, cap: Optional[int] = None) -> Built:
    """
    Build the algebra a descriptor names.

    Args:
        descriptor: Descriptor text or parsed descriptor
        spec: Working field
        cap: Dimension cap override for Witt and Zassenhaus algebras

    Returns:
        ClassicalAlgebra, WittAlgebra or DividedPowerAlgebra
    """
    d = parse_descriptor(descriptor) if isinstance(descriptor, str) else descriptor
    logger.info(f"Building {d.text} over {spec.label}")
    if d.family == "sum":
        parts = [build_algebra(part, spec, cap) for part in d.parts]
        return classical_direct_sum(parts, d.text)
    if d.family == "chevalley-simple":
        return build_classical("chevalley-simple", f"{d.kind}{d.size}", spec)
    if d.family in ("sl", "psl", "gl", "pgl"):
        return build_classical(d.family, d.size, spec)
    if d.family == "witt":
        return build_witt(d.size, d.heights, spec, cap=cap)
    if d.family == "zassenhaus":
        return build_zassenhaus(d.size, spec, cap=cap)
    return build_divided_powers(d.size, d.heights, spec)


def lie_algebra_of(built: Built) -> LieAlgebra:
    """The structure-constant algebra behind a built object."""
    if isinstance(built, DividedPowerAlgebra):
        raise ParseError(f"{built.name} is not a Lie algebra")
    return built.base
