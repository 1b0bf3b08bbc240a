"""Experiment runner: turns an ExperimentConfig into a report."""

import itertools
from typing import Callable, Union

import numpy as np

from builders.classical_builder import ClassicalAlgebra
from builders.registry import Built, build_algebra
from builders.witt_builder import WittAlgebra
from config.logging_config import get_logger
from config.settings import settings
from core.field import FieldArray, FieldSpec, codes
from schemas.experiment import ExperimentConfig
from schemas.report import GenerationCertificate, NotFound, Report
from services.generation_service import GenerationService, replay
from services.report_service import ReportService
from utils.exceptions import (
    BudgetExceeded,
    FieldTooSmall,
    NoAlphaInSearchedExtensions,
    PreconditionError,
    RecipeStepFailed,
)
from utils.helpers import trial_rng

logger = get_logger(__name__)


def _count(histogram: dict[int, int], value: int) -> None:
    histogram[value] = histogram.get(value, 0) + 1


class ExperimentService:
    """Service running one configured experiment."""

    def __init__(self, config: ExperimentConfig) -> None:
        """
        Initialize experiment service.

        Args:
            config: Validated experiment configuration
        """
        self.config = config
        self.spec = FieldSpec.create(config.p, config.ext)
        self.generation = GenerationService(seed=config.seed)
        self.reports = ReportService(config.experiment, algebra=config.algebra, field=self.spec.label)
        self.reports.set_parameters(**config.parameters())

    def run(self) -> Report:
        """
        Build the algebra and run the experiment.

        BudgetExceeded becomes a failed ``budget`` assertion. Construction and
        precondition errors propagate to the caller.
        """
        runners: dict[str, Callable[[Built], None]] = {
            "census": self._census,
            "theoremB": self._theorem_b,
            "graded-recipe": self._graded_recipe,
            "zassenhaus-sweep": self._zassenhaus_sweep,
            "obstruction": self._obstruction,
            "search": self._search,
        }
        algebra = build_algebra(self.config.algebra, self.spec, cap=self.config.cap_dim)
        logger.info(f"Running {self.config.experiment} on {self.config.algebra} over {self.spec.label}")
        try:
            runners[self.config.experiment](algebra)
        except BudgetExceeded as e:
            self.reports.add_assertion("budget", False, str(e))
        return self.reports.finalize()

    # Helpers

    def _random_x(self, L_dim: int, field: type, t: int) -> FieldArray:
        """Non-zero x with coordinates in the prime field, from stream t."""
        rng = trial_rng(self.config.seed, t)
        x = field(rng.integers(0, self.config.p, L_dim))
        if not np.any(codes(x)):
            x[0] = 1
        return x

    def _replay_all(self, algebra: Union[ClassicalAlgebra, WittAlgebra], certificates: list[GenerationCertificate]) -> None:
        """Every certificate reproduces its closure dimension."""
        failures = 0
        for cert in certificates:
            degree = int(cert.details.get("extension_degree", 1))
            spec = algebra.spec.extension(degree) if degree > 1 else algebra.spec
            if not replay(algebra.over(spec).base, cert):
                failures += 1
        self.reports.add_assertion(
            "certificates-replay", failures == 0, f"{len(certificates) - failures}/{len(certificates)} replayed"
        )

    # Experiments

    def _census(self, algebra: Built) -> None:
        L = algebra.base
        total = L.spec.order ** (2 * L.dim)
        plan = "exhaustive" if total <= self.config.budget_pairs else "random"
        census = self.generation.strata_census(
            L, plan=plan, sample_size=self.config.trials, pair_budget=self.config.budget_pairs
        )
        self.reports.add_census(census)
        counted = sum(census.histogram.values())
        self.reports.add_assertion(
            "counts-sum-to-sample", counted == census.sample_size, f"{counted} of {census.sample_size}"
        )
        top = max(census.histogram) if census.histogram else 0
        self.reports.add_assertion("strata-within-dimension", top <= L.dim, f"max d = {top}, dim = {L.dim}")
        if plan == "exhaustive":
            self.reports.add_assertion(
                "zero-stratum", census.histogram.get(0, 0) >= 1, "the pair (0, 0) lies in d = 0"
            )
        if isinstance(algebra, ClassicalAlgebra) and algebra.is_simple_kind:
            self.reports.add_assertion(
                "top-stratum-nonempty", top == L.dim, f"{census.histogram.get(L.dim, 0)} generating pairs"
            )

    def _theorem_b(self, algebra: Built) -> None:
        if not isinstance(algebra, ClassicalAlgebra):
            raise PreconditionError(f"{self.config.algebra} is not a classical algebra")
        certificates = []
        degrees: dict[int, int] = {}
        for t in range(self.config.trials):
            x = self._random_x(algebra.dim, algebra.base.field, t)
            result = self.generation.one_and_half_search(algebra, x, "recipe")
            if isinstance(result, NotFound):
                self.reports.add_not_found(result)
                continue
            result.trial = t
            certificates.append(result)
            self.reports.add_certificate(result)
            _count(degrees, int(result.details.get("extension_degree", 1)))
        self.reports.add_histogram("extension_degree", degrees)
        self.reports.add_assertion(
            "partner-for-every-x",
            len(certificates) == self.config.trials,
            f"{len(certificates)}/{self.config.trials} certified",
        )
        highest = max(degrees) if degrees else 0
        self.reports.add_assertion("extension-degree-at-most-2", highest <= 2, f"highest degree {highest}")
        self._replay_all(algebra, certificates)

    def _graded_recipe(self, algebra: Built) -> None:
        if not isinstance(algebra, WittAlgebra):
            raise PreconditionError(f"{self.config.algebra} is not a graded Witt algebra")
        try:
            cert = self.generation.graded_recipe_pair(algebra)
        except (FieldTooSmall, RecipeStepFailed) as e:
            self.reports.add_assertion("graded-recipe", False, f"{type(e).__name__}: {e}")
            return
        self.reports.add_certificate(cert)
        expected = algebra.m * algebra.p ** sum(algebra.n)
        self.reports.add_assertion(
            "graded-recipe", cert.closure_dim == expected, f"closure dim {cert.closure_dim}, expected {expected}"
        )
        self._replay_all(algebra, [cert])

    def _zassenhaus_sweep(self, algebra: Built) -> None:
        if not isinstance(algebra, WittAlgebra) or algebra.m != 1:
            raise PreconditionError(f"{self.config.algebra} is not a Zassenhaus algebra")
        Z = algebra
        p = self.config.p
        exhaustive = p**Z.dim - 1 <= settings.exhaustive_bound
        if exhaustive:
            xs = (
                Z.base.field(np.array(coords))
                for coords in itertools.product(range(p), repeat=Z.dim)
                if any(coords)
            )
        else:
            xs = (self._random_x(Z.dim, Z.base.field, t) for t in range(self.config.trials))
        degrees: dict[int, int] = {}
        det_degrees: dict[int, int] = {}
        found = failed = generating = 0
        for x in xs:
            try:
                cert = self.generation.zassenhaus_partner(Z, x)
            except NoAlphaInSearchedExtensions as e:
                failed += 1
                logger.warning(f"No alpha for x = {Z.base.describe(x)}: {e}")
                continue
            found += 1
            generating += cert.closure_dim == Z.dim
            _count(degrees, int(cert.details.get("extension_degree", 1)))
            if cert.details.get("det_degree") is not None:
                _count(det_degrees, int(cert.details["det_degree"]))
        self.reports.set_parameters(sweep="exhaustive" if exhaustive else "random")
        self.reports.add_histogram("extension_degree", degrees)
        self.reports.add_histogram("det_degree", det_degrees)
        self.reports.add_assertion("partner-for-every-x", failed == 0, f"{found} found, {failed} without alpha")
        self.reports.add_assertion("partners-generate", generating == found, f"{generating}/{found} generate")
        if failed:
            self.reports.add_not_found(
                NotFound(
                    searched="y = e_-1 + alpha e_s",
                    field=Z.spec.extension(self.generation.max_extension).label,
                )
            )

    def _obstruction(self, algebra: Built) -> None:
        if not isinstance(algebra, WittAlgebra):
            raise PreconditionError(f"{self.config.algebra} is not a Witt algebra")
        W = algebra
        for index in W.component_indices(W.top_degree):
            x = W.base.basis_vector(int(index))
            report = self.generation.obstruction_report(W, x, self.config.trials, include_zero=True)
            self.reports.add_obstruction(report, label=W.base.label(int(index)))

    def _search(self, algebra: Built) -> None:
        if not isinstance(algebra, (ClassicalAlgebra, WittAlgebra)):
            raise PreconditionError(f"{self.config.algebra} is not a Lie algebra")
        certificates = []
        for t in range(self.config.trials):
            x = self._random_x(algebra.dim, algebra.base.field, t)
            result = self.generation.one_and_half_search(algebra, x, self.config.strategy)
            if isinstance(result, NotFound):
                self.reports.add_not_found(result)
            else:
                result.trial = t
                certificates.append(result)
                self.reports.add_certificate(result)
        self.reports.add_histogram("found", {1: len(certificates), 0: self.config.trials - len(certificates)})
        known = isinstance(algebra, ClassicalAlgebra) and algebra.is_simple_kind
        known = known or (isinstance(algebra, WittAlgebra) and algebra.m == 1)
        if known and self.config.strategy == "recipe":
            self.reports.add_assertion(
                "partner-for-every-x",
                len(certificates) == self.config.trials,
                f"{len(certificates)}/{self.config.trials} certified",
            )
        self._replay_all(algebra, certificates)
