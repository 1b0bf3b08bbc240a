"""Generation experiments: strata census, partner searches and the top-component obstruction."""

import itertools
from typing import Literal, Optional, Sequence, Union

import galois
import numpy as np

from builders.classical_builder import ClassicalAlgebra
from builders.witt_builder import WittAlgebra, formula_weight, torus_weights
from config.logging_config import get_logger
from config.settings import settings
from core.field import (
    FieldArray,
    FieldSpec,
    codes,
    element_to_json,
    enumerate_field,
    generator,
    vector_from_json,
    vector_to_json,
)
from core.liealg import (
    LieAlgebra,
    SubalgebraBasis,
    derived_algebra,
    generated_subalgebra,
    pair_dimension,
)
from core.linalg import stack
from core.pstruct import delta_element, dependence_data, module_span, y_module
from schemas.report import (
    GenerationCertificate,
    Method,
    NotFound,
    ObstructionReport,
    ObstructionTrial,
    StrataCensus,
)
from services.classical_service import ClassicalService
from utils.exceptions import (
    BudgetExceeded,
    FieldTooSmall,
    InvariantViolation,
    NoAlphaInSearchedExtensions,
    NoPartnerInField,
    PreconditionError,
    RecipeStepFailed,
    SearchBudgetExhausted,
)
from utils.helpers import trial_rng

logger = get_logger(__name__)

Strategy = Literal["recipe", "random", "exhaustive"]
Algebra = Union[ClassicalAlgebra, WittAlgebra]


def certify(
    L: LieAlgebra,
    x: FieldArray,
    y: FieldArray,
    method: Method,
    seed: Optional[int] = None,
    trial: Optional[int] = None,
    details: Optional[dict] = None,
) -> GenerationCertificate:
    """Certificate for (x, y) with the closure dimension recomputed."""
    return GenerationCertificate(
        x=vector_to_json(x),
        y=vector_to_json(y),
        closure_dim=pair_dimension(L, x, y),
        method=method,
        field=L.spec.label,
        seed=seed,
        trial=trial,
        details=details or {},
    )


def replay(L: LieAlgebra, certificate: GenerationCertificate) -> bool:
    """Re-run the closure of a certificate and compare dimensions."""
    x = vector_from_json(L.spec, certificate.x)
    y = vector_from_json(L.spec, certificate.y)
    return pair_dimension(L, x, y) == certificate.closure_dim


def _json_details(details: dict) -> dict:
    """Field arrays in a details map as coefficient lists."""
    clean = {}
    for key, value in details.items():
        if isinstance(value, galois.FieldArray):
            clean[key] = vector_to_json(value.reshape(-1))
        else:
            clean[key] = value
    return clean


def top_element_branches(
    W: WittAlgebra, x: FieldArray, y: FieldArray, L: Optional[SubalgebraBasis] = None
) -> tuple[int, str, dict[str, bool]]:
    """
    Dependence index of y and the structure of F<x, y> for x in the top component of W(m, 1).

    For k = m: delta has degree s - k(p - 1), [y, delta] = 0, x lies in B delta and
    F<x, y> lies in B delta + F y. For k < m: [x, H] = 0 and F<x, y> = H + F y,
    with H the F[ad y]-module generated by x.

    Returns:
        (k, branch, named checks)
    """
    L = L if L is not None else generated_subalgebra(W.base, x, y)
    data = dependence_data(W, y)
    line = W.base.span([y])
    if data.k == W.m:
        result = delta_element(W, x, y, data)
        checks = {
            "delta-degree": result.degree_ok,
            "y-commutes-with-delta": not np.any(codes(W.base.bracket(y, result.delta))),
            "x-in-module": result.in_module,
            "closure-in-module-plus-y": module_span(W, result.delta).plus(line).includes(L),
        }
        return data.k, "k=m", checks
    H = y_module(W.base, x, y)
    checks = {
        "x-commutes-with-module": not any(np.any(codes(W.base.bracket(x, h))) for h in H.rows),
        "closure-is-module-plus-y": H.plus(line) == L,
    }
    return data.k, "k<m", checks


class GenerationService:
    """Service for generation experiments."""

    def __init__(
        self,
        seed: Optional[int] = None,
        budget: Optional[int] = None,
        max_extension: Optional[int] = None,
    ) -> None:
        """
        Initialize generation service.

        Args:
            seed: Seed of all random streams
            budget: Random draws per search
            max_extension: Highest extension degree of the search ladder
        """
        self.seed = seed
        self.budget = budget if budget is not None else settings.search_budget
        self.max_extension = max_extension if max_extension is not None else settings.max_extension_degree
        self.classical = ClassicalService(budget=self.budget, seed=seed)

    # Strata

    def strata_census(
        self,
        L: LieAlgebra,
        plan: Literal["exhaustive", "random"] = "random",
        sample_size: int = 1000,
        start: int = 0,
        pair_budget: Optional[int] = None,
    ) -> StrataCensus:
        """
        Histogram of dim F<x, y> over all pairs or a seeded sample.

        Random pair i is drawn from the stream (seed, start + i), so disjoint
        ranges of one run merge into the full census.

        Raises:
            BudgetExceeded: If an exhaustive plan exceeds the pair budget
        """
        histogram: dict[int, int] = {}
        if plan == "exhaustive":
            budget = pair_budget if pair_budget is not None else settings.pair_budget
            total = L.spec.order ** (2 * L.dim)
            if total > budget:
                raise BudgetExceeded(f"{total} pairs exceed the budget of {budget}")
            points = L.field.elements
            count = 0
            for coords in itertools.product(range(L.spec.order), repeat=2 * L.dim):
                values = points[list(coords)]
                d = pair_dimension(L, values[: L.dim], values[L.dim :])
                histogram[d] = histogram.get(d, 0) + 1
                count += 1
            sample_size = count
        else:
            for i in range(sample_size):
                rng = trial_rng(self.seed, start + i)
                d = pair_dimension(L, L.random_vector(rng), L.random_vector(rng))
                histogram[d] = histogram.get(d, 0) + 1
        census = StrataCensus(
            algebra=L.name,
            plan=plan,
            seed=self.seed if plan == "random" else None,
            sample_size=sample_size,
            histogram=dict(sorted(histogram.items())),
        )
        logger.info(f"Census of {L.name}: {census.histogram}")
        return census

    # Graded type W

    def graded_recipe_pair(self, W: WittAlgebra) -> GenerationCertificate:
        """
        Generating pair x = x_-1 + x_0 + x_s, y = y_0 in the standard torus.

        y_0 has F_p-independent coefficients, x_0 is the sum of the off-diagonal
        x_iD_j in W_0, and x_-1, x_s are weight vectors of distinct weights outside
        the weights of W_0.

        Raises:
            FieldTooSmall: If the extension degree is below m
            RecipeStepFailed: With the id of the failing step
        """
        spec = W.spec
        if spec.k < W.m:
            raise FieldTooSmall(f"{W.descriptor} needs F_(p^k) with k >= {W.m}, got {spec.label}")
        theta = generator(spec)
        lambdas = [theta**i for i in range(W.m)]
        torus = W.torus()
        y = W.base.zero()
        for lam, t in zip(lambdas, torus):
            y = y + lam * t

        try:
            gamma_0 = set(torus_weights(W, 0))
            gamma_bottom = set(torus_weights(W, -1))
            gamma_top = set(torus_weights(W, W.top_degree))
        except InvariantViolation as e:
            raise RecipeStepFailed("weights", str(e)) from e

        bottom = (tuple(0 for _ in range(W.m)), 0)
        top_candidates = [(alpha, j) for alpha, j in W.basis if sum(alpha) - 1 == W.top_degree]
        w_bottom = formula_weight(bottom[0], bottom[1], W.p)
        chosen_top = next(
            (b for b in top_candidates if formula_weight(b[0], b[1], W.p) != w_bottom), None
        )
        if chosen_top is None:
            raise RecipeStepFailed("top-weight", "every top weight equals the bottom weight")
        w_top = formula_weight(chosen_top[0], chosen_top[1], W.p)
        if w_bottom in gamma_0 or w_top in gamma_0:
            raise RecipeStepFailed("weights", "an end weight meets the weights of W_0")

        x_bottom = W.element(*bottom)
        x_top = W.element(*chosen_top)
        x_zero = W.base.zero()
        for i in range(W.m):
            for j in range(W.m):
                if i != j:
                    x_zero = x_zero + W.element(tuple(int(r == i) for r in range(W.m)), j)
        x = x_bottom + x_zero + x_top

        phi = sorted(gamma_0 | {w_bottom, w_top})
        values = [sum((int(c) * lam for c, lam in zip(w, lambdas)), spec.gf(0)) for w in phi]
        if len({int(v) for v in values}) != len(values):
            raise RecipeStepFailed("separation", "weight values of y_0 collide")

        closure = generated_subalgebra(W.base, x, y)
        if closure.dim != W.dim:
            raise RecipeStepFailed("closure", f"closure of dimension {closure.dim} < {W.dim}")
        details = {
            "y0_coefficients": [element_to_json(lam) for lam in lambdas],
            "x_bottom": vector_to_json(x_bottom),
            "x_zero": vector_to_json(x_zero),
            "x_top": vector_to_json(x_top),
            "weights_zero": [list(w) for w in sorted(gamma_0)],
            "weights_bottom": [list(w) for w in sorted(gamma_bottom)],
            "weights_top": [list(w) for w in sorted(gamma_top)],
            "alpha_bottom": list(w_bottom),
            "alpha_top": list(w_top),
            "module_rounds": closure.steps,
        }
        logger.info(f"Graded recipe pair for {W.descriptor} over {spec.label} certified")
        return certify(W.base, x, y, "graded-recipe", self.seed, details=details)

    # Zassenhaus

    def zassenhaus_partner(self, Z: WittAlgebra, x: FieldArray) -> GenerationCertificate:
        """
        Partner y_alpha = e_-1 + alpha e_s for x in W(1, n).

        For x in the top component y = e_-1. Otherwise alpha is sought with
        det(M_alpha) != 0, where M_alpha has rows y, x, (ad y)x, ..., (ad y)^s x,
        in F_p, then in its extensions.

        Raises:
            NoAlphaInSearchedExtensions: If no extension up to the ladder top works
        """
        if Z.m != 1:
            raise PreconditionError("the Zassenhaus partner lives in W(1, n)")
        if not np.any(codes(x)):
            raise PreconditionError("a partner needs x != 0")
        s = Z.top_degree
        if Z.base.support_degrees(x) == [s]:
            y = Z.e(-1)
            cert = certify(Z.base, x, y, "zassenhaus", self.seed, details={"alpha": None})
            return cert

        for degree in range(1, self.max_extension + 1):
            spec = Z.spec.extension(degree) if degree > 1 else Z.spec
            Zd = Z.over(spec)
            xd = Zd.base.lift_vector(x)
            for alpha in enumerate_field(spec, settings.exhaustive_bound):
                y = Zd.e(-1) + alpha * Zd.e(s)
                if self.zassenhaus_det(Zd, xd, y) == 0:
                    continue
                poly = self.det_polynomial(Zd, xd)
                details = {
                    "alpha": element_to_json(alpha),
                    "extension_degree": degree,
                    "det_degree": None if poly is None else int(poly.degree),
                }
                cert = certify(Zd.base, xd, y, "zassenhaus", self.seed, details=details)
                if cert.closure_dim != Z.dim:
                    raise InvariantViolation("non-zero det(M_alpha) without generation")
                logger.debug(f"alpha found over {spec.label} for x = {Z.base.describe(x)}")
                return cert
            logger.debug(f"det(M_alpha) vanishes on {spec.label} for x = {Z.base.describe(x)}")
        raise NoAlphaInSearchedExtensions(
            f"det(M_alpha) vanishes on every extension up to degree {self.max_extension}"
        )

    @staticmethod
    def zassenhaus_det(Z: WittAlgebra, x: FieldArray, y: FieldArray) -> FieldArray:
        """det of the rows y, x, (ad y)x, ..., (ad y)^s x."""
        ad_y = Z.base.ad(y)
        rows = [y, x]
        current = x
        for _ in range(Z.top_degree):
            current = ad_y @ current
            rows.append(current)
        return np.linalg.det(stack(rows, Z.base.field, Z.dim))

    @classmethod
    def det_polynomial(cls, Z: WittAlgebra, x: FieldArray) -> Optional[galois.Poly]:
        """
        det(M_alpha) as a polynomial in alpha, interpolated on s + 3 points.

        Returns None when the field has fewer than s + 3 elements.
        """
        s = Z.top_degree
        if Z.spec.order < s + 3:
            return None
        points = Z.base.field.elements[: s + 3]
        values = [cls.zassenhaus_det(Z, x, Z.e(-1) + alpha * Z.e(s)) for alpha in points]
        return galois.lagrange_poly(points, Z.base.field([int(v) for v in values]))

    # Obstruction for m > 1

    def obstruction_report(
        self, W: WittAlgebra, x: FieldArray, trials: int, include_zero: bool = False
    ) -> ObstructionReport:
        """
        dim [L, L] for L = F<x, y> over sampled y, with x in the top component.

        For W(m, 1) every trial also records the dependence index k and checks
        the branch statements: for k = m, [y, delta] = 0, x in B delta and
        L in B delta + F y; for k < m, [x, H] = 0 and L = H + F y.
        """
        if W.m < 2:
            raise PreconditionError("the obstruction concerns m >= 2")
        if not np.any(codes(x)) or W.base.support_degrees(x) != [W.top_degree]:
            raise PreconditionError("x must be a non-zero element of the top component")
        bound = W.p ** sum(W.n)
        report = ObstructionReport(
            algebra=W.descriptor, x=vector_to_json(x), bound=bound, algebra_dim=W.dim
        )
        for t in range(trials):
            if include_zero and t == 0:
                y = W.base.zero()
            else:
                y = W.base.random_vector(trial_rng(self.seed, t))
            L = generated_subalgebra(W.base, x, y)
            derived = derived_algebra(W.base, L)
            trial = ObstructionTrial(trial=t, pair_dim=L.dim, derived_dim=derived.dim)
            if W.restricted:
                k, branch, checks = top_element_branches(W, x, y, L)
                trial.dependence_index = k
                trial.branch = branch
                trial.branch_checks = checks
            report.trials.append(trial)
        logger.info(f"Obstruction on {W.descriptor}: {report.verdict}")
        return report

    # 1.5-generation

    def one_and_half_search(
        self,
        algebra: Algebra,
        x: FieldArray,
        strategy: Strategy = "recipe",
        grid: Optional[Sequence[int]] = None,
    ) -> Union[GenerationCertificate, NotFound]:
        """
        Look for a partner of x.

        ``recipe`` uses regular Cartan partners (or the central extension construction
        for gl) on classical algebras and the y_alpha family on W(1, n). ``random``
        draws partners over the extension ladder. ``exhaustive`` scans all partners
        whose support lies in ``grid`` (all basis indices by default) with
        coefficients in the working field.

        Raises:
            BudgetExceeded: If an exhaustive scan exceeds its bound
        """
        if not np.any(codes(x)):
            raise PreconditionError("a partner needs x != 0")
        if strategy == "recipe":
            if isinstance(algebra, ClassicalAlgebra):
                return self._classical_ladder(algebra, x)
            if algebra.m == 1:
                try:
                    return self.zassenhaus_partner(algebra, x)
                except NoAlphaInSearchedExtensions:
                    return NotFound(
                        searched="y = e_-1 + alpha e_s",
                        field=algebra.spec.extension(self.max_extension).label,
                    )
            strategy = "random"
        L = algebra.base
        if strategy == "random":
            return self._random_ladder(algebra, x)
        return self._exhaustive(L, x, grid)

    def _classical_ladder(self, g: ClassicalAlgebra, x: FieldArray) -> Union[GenerationCertificate, NotFound]:
        for degree in range(1, self.max_extension + 1):
            gd = g.over(g.spec.extension(degree)) if degree > 1 else g
            xd = gd.base.lift_vector(x)
            try:
                if g.kind == "gl":
                    y, details = self.classical.central_extension_partner(gd, xd)
                    method: Method = "central-extension"
                else:
                    y, details = self.classical.theoremB_partner(gd, xd)
                    method = "theoremB"
            except (FieldTooSmall, SearchBudgetExhausted, NoPartnerInField) as e:
                logger.debug(f"{g.descriptor} over {gd.spec.label}: {e}")
                continue
            details = _json_details(details)
            details["extension_degree"] = degree
            return certify(gd.base, xd, y, method, self.seed, details=details)
        return NotFound(
            searched="regular partners after root automorphisms",
            field=g.spec.extension(self.max_extension).label,
        )

    def _random_ladder(self, algebra: Algebra, x: FieldArray) -> Union[GenerationCertificate, NotFound]:
        for degree in range(1, self.max_extension + 1):
            spec: FieldSpec = algebra.spec.extension(degree) if degree > 1 else algebra.spec
            L = algebra.base.over(spec)
            xd = L.lift_vector(x)
            for t in range(self.budget):
                y = L.random_vector(trial_rng(self.seed, degree * self.budget + t))
                if pair_dimension(L, xd, y) == L.dim:
                    return certify(L, xd, y, "search", self.seed, trial=t, details={"extension_degree": degree})
        return NotFound(
            searched=f"{self.budget} random partners per field",
            field=algebra.spec.extension(self.max_extension).label,
        )

    def _exhaustive(self, L: LieAlgebra, x: FieldArray, grid: Optional[Sequence[int]]) -> Union[GenerationCertificate, NotFound]:
        support = list(grid) if grid is not None else list(range(L.dim))
        total = L.spec.order ** len(support)
        if total > settings.exhaustive_bound:
            raise BudgetExceeded(f"{total} partners exceed the exhaustive bound {settings.exhaustive_bound}")
        points = L.field.elements
        for coords in itertools.product(range(L.spec.order), repeat=len(support)):
            y = L.zero()
            y[support] = points[list(coords)]
            if pair_dimension(L, x, y) == L.dim:
                return certify(L, x, y, "search", self.seed, details={"grid": support})
        labels = ", ".join(L.label(i) for i in support)
        return NotFound(searched=f"span of {{{labels}}}", field=L.spec.label, exhaustive=True)
