"""Pydantic schemas for validation results and experiment reports."""

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

Method = Literal["theoremB", "graded-recipe", "zassenhaus", "central-extension", "search"]


class CheckResult(BaseModel):
    """One structural check of an algebra."""

    name: str = Field(..., description="Check name (antisymmetry, jacobi, grading)")
    passed: bool = Field(..., description="Whether the check passed")
    detail: Optional[str] = Field(None, description="First counterexample or remark")


class ValidationReport(BaseModel):
    """Outcome of validating an algebra."""

    algebra: str = Field(..., description="Algebra name")
    dim: int = Field(..., ge=0, description="Dimension")
    field: str = Field(..., description="Working field label")
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when every check passed."""
        return all(check.passed for check in self.checks)

    def first_failure(self) -> Optional[str]:
        """Description of the first failed check."""
        for check in self.checks:
            if not check.passed:
                return f"{check.name}: {check.detail}"
        return None


class AssertionRecord(BaseModel):
    """A named pass/fail assertion in a report."""

    model_config = ConfigDict(populate_by_name=True)

    name: str = Field(..., description="Assertion name")
    passed: bool = Field(..., alias="pass", description="Whether the assertion held")
    detail: str = Field("", description="Counts, counterexample or context")


class GenerationCertificate(BaseModel):
    """A pair (x, y) together with the dimension of the subalgebra it generates."""

    x: list[list[int]] = Field(..., description="Coordinates of x as coefficient lists")
    y: list[list[int]] = Field(..., description="Coordinates of y as coefficient lists")
    closure_dim: int = Field(..., ge=0, description="dim of the generated subalgebra")
    method: Method = Field(..., description="How the partner was found")
    field: str = Field(..., description="Field the pair lives over")
    seed: Optional[int] = Field(None, description="Replay seed")
    trial: Optional[int] = Field(None, ge=0, description="Trial index within the run")
    details: dict[str, Any] = Field(default_factory=dict, description="Intermediate objects")

    @field_validator("x", "y")
    @classmethod
    def validate_coordinates(cls, v: list[list[int]]) -> list[list[int]]:
        """Coordinates are non-empty coefficient lists."""
        if any(len(entry) == 0 for entry in v):
            raise ValueError("Empty coefficient list")
        return v

    class Config:
        """Pydantic config."""

        json_schema_extra = {
            "example": {
                "x": [[1], [0], [1]],
                "y": [[0], [1], [0]],
                "closure_dim": 3,
                "method": "theoremB",
                "field": "F5",
                "seed": 42,
                "trial": 0,
                "details": {},
            }
        }


class NotFound(BaseModel):
    """No witness was found; this is never a proof of impossibility unless exhaustive."""

    searched: str = Field(..., description="Description of the searched space")
    field: str = Field(..., description="Largest field searched")
    exhaustive: bool = Field(False, description="True when the scan covered the stated space")

    @property
    def verdict(self) -> str:
        """Human-readable reading of the result."""
        if self.exhaustive:
            return f"no witness in the exhaustive scan of {self.searched} over {self.field}"
        return f"no witness in searched field {self.field}"


class StrataCensus(BaseModel):
    """Histogram of pair dimensions over a sampling plan."""

    algebra: str
    plan: Literal["exhaustive", "random"]
    seed: Optional[int] = None
    sample_size: int = Field(..., ge=0)
    histogram: dict[int, int] = Field(default_factory=dict, description="d -> count")

    def merge(self, other: "StrataCensus") -> "StrataCensus":
        """Combine two partial censuses of the same algebra."""
        merged = dict(self.histogram)
        for d, count in other.histogram.items():
            merged[d] = merged.get(d, 0) + count
        return StrataCensus(
            algebra=self.algebra,
            plan=self.plan,
            seed=self.seed,
            sample_size=self.sample_size + other.sample_size,
            histogram=dict(sorted(merged.items())),
        )


class ObstructionTrial(BaseModel):
    """One sampled partner y in an obstruction experiment."""

    trial: int = Field(..., ge=0)
    pair_dim: int = Field(..., ge=0, description="dim F<x, y>")
    derived_dim: int = Field(..., ge=0, description="dim [L, L]")
    dependence_index: Optional[int] = Field(None, description="k of the delta sequence")
    branch: Optional[Literal["k=m", "k<m"]] = None
    branch_checks: dict[str, bool] = Field(default_factory=dict)


class ObstructionReport(BaseModel):
    """Derived-algebra bounds for subalgebras generated by a top-degree element."""

    algebra: str
    x: list[list[int]]
    bound: int = Field(..., description="p^{|n|}")
    algebra_dim: int
    trials: list[ObstructionTrial] = Field(default_factory=list)

    @property
    def violations(self) -> list[ObstructionTrial]:
        """Trials exceeding the bound or generating the whole algebra."""
        return [
            t
            for t in self.trials
            if t.derived_dim > self.bound
            or t.pair_dim >= self.algebra_dim
            or not all(t.branch_checks.values())
        ]

    @property
    def verdict(self) -> str:
        """Summary line."""
        if self.violations:
            return f"{len(self.violations)} violations"
        return f"all {len(self.trials)} trials within dim[L,L] <= {self.bound}"


class EmbeddingReport(BaseModel):
    """Checks of the embedding W(m, n) -> W(|n|, 1)."""

    source: str
    target: str
    injective: bool
    bracket_preserving: bool
    pairs_checked: int = Field(..., ge=0)
    top_to_top: bool = Field(..., description="Top component lands in the top component")
    first_failure: Optional[str] = None

    @property
    def passed(self) -> bool:
        """All three properties hold."""
        return self.injective and self.bracket_preserving and self.top_to_top


class Report(BaseModel):
    """Experiment or verification report as written to disk."""

    schema_version: int = Field(1, ge=1)
    algebra: Optional[str] = None
    field: Optional[str] = None
    experiment: str
    parameters: dict[str, Any] = Field(default_factory=dict)
    certificates: list[GenerationCertificate] = Field(default_factory=list)
    histograms: dict[str, dict[int, int]] = Field(default_factory=dict)
    assertions: list[AssertionRecord] = Field(default_factory=list)
    not_found: list[NotFound] = Field(default_factory=list)
    meta: dict[str, Any] = Field(default_factory=dict, description="Excluded from the hash")
    hash: Optional[str] = Field(None, description="sha256 of the report without meta")

    @property
    def passed(self) -> bool:
        """True when every assertion passed."""
        return all(a.passed for a in self.assertions)
