"""Pydantic schema of the algebra file format."""

from typing import Any, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from core.field import FieldSpec, element_from_json, element_to_json
from core.liealg import LieAlgebra

# One bracket [b_i, b_j] = sum_k c_k b_k; c_k is a coefficient list over F_p
StructureEntry = tuple[int, int, list[tuple[int, list[int]]]]


class AlgebraFile(BaseModel):
    """Structure constants of a Lie algebra with basis labels and grading."""

    name: str = Field(..., description="Algebra descriptor or name")
    spec: FieldSpec = Field(..., description="Working field")
    dim: int = Field(..., ge=0, description="Dimension")
    labels: Optional[list[str]] = Field(None, description="Basis labels")
    grading: Optional[list[int]] = Field(None, description="Degree of every basis vector")
    sc: list[StructureEntry] = Field(default_factory=list, description="Brackets for i < j only")

    @field_validator("sc")
    @classmethod
    def validate_pairs(cls, v: list[StructureEntry]) -> list[StructureEntry]:
        """Only pairs i < j are stored."""
        for i, j, _ in v:
            if i >= j:
                raise ValueError(f"Structure entry ({i}, {j}) must have i < j")
        return v

    @model_validator(mode="after")
    def validate_sizes(self) -> "AlgebraFile":
        """Labels, grading and indices fit the dimension."""
        if self.labels is not None and len(self.labels) != self.dim:
            raise ValueError(f"{len(self.labels)} labels for dimension {self.dim}")
        if self.grading is not None and len(self.grading) != self.dim:
            raise ValueError(f"{len(self.grading)} degrees for dimension {self.dim}")
        for i, j, terms in self.sc:
            if j >= self.dim or any(k < 0 or k >= self.dim for k, _ in terms):
                raise ValueError(f"Structure entry ({i}, {j}) leaves the basis")
        return self

    @classmethod
    def from_algebra(cls, L: LieAlgebra) -> "AlgebraFile":
        """Serialize the constants of the pairs i < j."""
        sc = [
            (i, j, [(k, element_to_json(L.field(c))) for k, c in sorted(terms.items())])
            for (i, j), terms in sorted(L.upper_constants().items())
        ]
        labels = [L.label(i) for i in range(L.dim)] if L.labels is not None else None
        grading = [int(d) for d in L.grading] if L.grading is not None else None
        return cls(name=L.name, spec=L.spec, dim=L.dim, labels=labels, grading=grading, sc=sc)

    def to_algebra(self) -> LieAlgebra:
        """Rebuild the algebra; the mirror pairs follow from antisymmetry."""
        constants = {
            (i, j): {k: element_from_json(self.spec, coeff) for k, coeff in terms}
            for i, j, terms in self.sc
        }
        return LieAlgebra(
            self.spec, self.dim, constants, grading=self.grading, labels=self.labels, name=self.name
        )

    class Config:
        """Pydantic config."""

        json_schema_extra: dict[str, Any] = {
            "example": {
                "name": "A1",
                "spec": {"p": 5, "k": 1, "modulus": [3, 1]},
                "dim": 3,
                "labels": ["e[1]", "h1", "e[-1]"],
                "grading": [1, 0, -1],
                "sc": [[0, 1, [[0, [3]]]], [0, 2, [[1, [1]]]], [1, 2, [[2, [3]]]]],
            }
        }
