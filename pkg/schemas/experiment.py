"""Pydantic schema of experiment configurations."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from builders.registry import parse_descriptor
from config.settings import settings
from utils.exceptions import ModlieError

ExperimentName = Literal["census", "theoremB", "graded-recipe", "zassenhaus-sweep", "obstruction", "search"]


class ExperimentConfig(BaseModel):
    """One experiment run, as given on the command line."""

    algebra: str = Field(..., description="Algebra descriptor, e.g. W:2:1,1")
    p: int = Field(5, description="Characteristic")
    ext: int = Field(1, ge=1, description="Extension degree of the working field")
    experiment: ExperimentName = Field(..., description="Experiment name")
    trials: int = Field(100, gt=0, description="Random trials (x values, pairs or partners)")
    seed: int = Field(0, description="Seed of all random streams")
    out: Optional[Path] = Field(None, description="Report file; stdout when omitted")
    budget_pairs: int = Field(default_factory=lambda: settings.pair_budget, gt=0, description="Exhaustive census budget")
    cap_dim: int = Field(default_factory=lambda: settings.dimension_cap, gt=0, description="Dimension cap")
    strategy: Literal["recipe", "random", "exhaustive"] = Field("recipe", description="Search strategy")

    @field_validator("algebra")
    @classmethod
    def validate_algebra(cls, v: str) -> str:
        """Descriptor must parse."""
        try:
            parse_descriptor(v)
        except ModlieError as e:
            raise ValueError(str(e)) from e
        return v

    @field_validator("p")
    @classmethod
    def validate_prime(cls, v: int) -> int:
        """Characteristic must be one of the supported primes."""
        if v not in settings.supported_primes_list:
            raise ValueError(f"p = {v} is not in the supported set {settings.supported_primes_list}")
        return v

    @field_validator("ext")
    @classmethod
    def validate_extension(cls, v: int) -> int:
        """Extension degree stays within the ladder."""
        if v > settings.max_extension_degree:
            raise ValueError(f"extension degree {v} above {settings.max_extension_degree}")
        return v

    def parameters(self) -> dict:
        """Hashed run parameters; the output path is not one of them."""
        return self.model_dump(mode="json", exclude={"out", "algebra", "experiment"})

    class Config:
        """Pydantic config."""

        json_schema_extra = {
            "example": {
                "algebra": "W:2:1,1",
                "p": 5,
                "ext": 2,
                "experiment": "obstruction",
                "trials": 500,
                "seed": 42,
                "out": "report.json",
            }
        }
