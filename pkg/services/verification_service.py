"""Assertion suites: construction axioms and the structural lemmas behind the generation results."""

import itertools
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from builders.classical_builder import (
    ClassicalAlgebra,
    coroot_span_dim,
    is_nonzero,
    root_space_dimensions,
)
from builders.divided_powers import DividedPowerAlgebra, length
from builders.registry import Built, build_algebra, lie_algebra_of, parse_descriptor
from builders.witt_builder import (
    WittAlgebra,
    bracket_generation_by_bottom,
    iota_embed,
    product_lemma_check,
    top_and_min_structures,
    torus_weights,
)
from config.logging_config import get_logger
from config.settings import settings
from core.field import (
    FieldArray,
    FieldSpec,
    codes,
    enumerate_field,
    field_arith,
    frobenius,
    generator,
    random_elements,
)
from core.liealg import (
    LieAlgebra,
    generated_subalgebra,
    naive_closure,
    pair_dimension,
    validate,
    weight_decomposition,
)
from core.linalg import (
    PPolynomial,
    additive_span,
    eigenvalues,
    mat_pow,
    p_min_poly,
    p_order,
    product_of_linear_factors,
    random_matrix,
    rank,
    roots_form_subgroup,
    semisimple_exponent,
    stack,
)
from core.pstruct import (
    delta_element,
    dependence_data,
    filtration_view,
    ord_compare,
    p_ary,
    p_power,
    toral_span,
)
from schemas.report import AssertionRecord
from services.classical_service import ClassicalService, vandermonde_rank
from services.generation_service import GenerationService, certify, replay, top_element_branches
from utils.exceptions import ElementBelowFiltrationZero, ModlieError, ParseError
from utils.helpers import trial_rng, truncate_text

logger = get_logger(__name__)

Suite = Literal["axioms", "lemmas", "all"]

AXIOM_CORPUS: dict[int, list[str]] = {
    5: [
        "A1", "A2", "B2", "C3", "D4", "G2", "sl:4", "sl:5", "psl:5", "gl:3", "pgl:3",
        "W:1:1", "W:1:2", "W:2:1", "W:3:1", "W:2:1,2", "Zass:1", "Zass:2",
    ],
    7: ["A1", "A2", "W:1:1", "W:2:1"],
}

# W(3, 1) has dimension 375 and is built above the default cap
CORPUS_CAP = 400

ORACLE_MAX_DIM = 50

LEMMA_CHECKS: dict[str, Callable[["VerificationService"], AssertionRecord]] = {}


def lemma_check(name: str) -> Callable:
    """Register a check of the lemmas suite under ``name``."""

    def register(func: Callable[["VerificationService"], AssertionRecord]) -> Callable:
        LEMMA_CHECKS[name] = func
        return func

    return register


def _record(name: str, failures: Sequence[str], total: int) -> AssertionRecord:
    if failures:
        detail = f"{len(failures)}/{total} failed; first: {truncate_text(failures[0], 200)}"
    else:
        detail = f"{total} cases"
    return AssertionRecord(name=name, passed=not failures, detail=detail)


def _is_zero(v: FieldArray) -> bool:
    return not np.any(codes(v))


def _random_top(W: WittAlgebra, rng: np.random.Generator) -> FieldArray:
    """Non-zero random element of the top component."""
    idx = W.component_indices(W.top_degree)
    x = W.base.zero()
    x[idx] = random_elements(W.spec, len(idx), rng)
    if _is_zero(x):
        x[idx[0]] = 1
    return x


def _random_nonzero(L: LieAlgebra, rng: np.random.Generator) -> FieldArray:
    v = L.random_vector(rng)
    if _is_zero(v):
        v[0] = 1
    return v


class VerificationService:
    """Service running the assertion suites."""

    def __init__(
        self,
        seed: Optional[int] = None,
        trials: Optional[int] = None,
        p: int = 5,
        algebra: Optional[str] = None,
    ) -> None:
        """
        Initialize verification service.

        Args:
            seed: Seed of all random corpora
            trials: Random cases per check
            p: Characteristic of the default corpora
            algebra: Restrict the axioms suite to one descriptor
        """
        self.seed = seed if seed is not None else 0
        self.trials = trials if trials is not None else settings.verification_trials
        self.p = p
        self.algebra = algebra
        self._built: dict[tuple[str, int, int], Built] = {}

    def build(self, descriptor: str, p: Optional[int] = None, k: int = 1) -> Built:
        """Build and cache an algebra of the corpus."""
        key = (descriptor, p or self.p, k)
        if key not in self._built:
            self._built[key] = build_algebra(descriptor, FieldSpec.create(key[1], k), cap=CORPUS_CAP)
        return self._built[key]

    def rng(self, index: int) -> np.random.Generator:
        """Random stream ``index`` of this run."""
        return trial_rng(self.seed, index)

    def run(self, suite: Suite, checks: Optional[Sequence[str]] = None) -> list[AssertionRecord]:
        """
        Run a suite and return one record per assertion.

        Raises:
            ParseError: If a requested check is unknown
        """
        records: list[AssertionRecord] = []
        if suite in ("axioms", "all"):
            records.extend(self.axioms())
        if suite in ("lemmas", "all"):
            names = list(checks) if checks else list(LEMMA_CHECKS)
            unknown = [name for name in names if name not in LEMMA_CHECKS]
            if unknown:
                raise ParseError(f"unknown checks: {', '.join(unknown)}")
            for name in names:
                records.append(self.run_check(name))
        passed = sum(r.passed for r in records)
        logger.info(f"Suite {suite}: {passed}/{len(records)} assertions passed")
        return records

    def run_check(self, name: str) -> AssertionRecord:
        """Run one registered check; errors count as failures."""
        try:
            record = LEMMA_CHECKS[name](self)
        except ModlieError as e:
            logger.error(f"Check {name} raised: {e}", exc_info=True)
            record = AssertionRecord(name=name, passed=False, detail=f"{type(e).__name__}: {e}")
        except Exception as e:
            logger.error(f"Check {name} crashed: {e}", exc_info=True)
            record = AssertionRecord(name=name, passed=False, detail=f"internal error {type(e).__name__}: {e}")
        if not record.passed:
            logger.warning(f"Check {name} failed: {record.detail}")
        return record

    # Axioms

    def axioms(self) -> list[AssertionRecord]:
        """Validation of every corpus algebra, plus closure oracle agreement on small ones."""
        if self.algebra is not None:
            corpus = {self.p: [self.algebra]}
        else:
            corpus = AXIOM_CORPUS
        records = []
        for p, descriptors in corpus.items():
            for descriptor in descriptors:
                if not parse_descriptor(descriptor).is_lie:
                    raise ParseError(f"{descriptor} is not a Lie algebra")
                L = lie_algebra_of(self.build(descriptor, p))
                report = validate(L)
                records.append(
                    AssertionRecord(
                        name=f"axioms:{descriptor}@F{p}",
                        passed=report.passed,
                        detail=report.first_failure() or ", ".join(c.name for c in report.checks),
                    )
                )
                if L.dim <= ORACLE_MAX_DIM:
                    records.append(self.oracle_agreement(L, f"closure-oracle:{descriptor}@F{p}"))
        return records

    def oracle_agreement(self, L: LieAlgebra, name: str) -> AssertionRecord:
        """generated_subalgebra and naive_closure agree on random pairs."""
        failures = []
        for t in range(self.trials):
            rng = self.rng(t)
            x, y = L.random_vector(rng), L.random_vector(rng)
            fast = generated_subalgebra(L, x, y)
            slow = naive_closure(L, [x, y])
            if fast.dim != slow.dim:
                failures.append(f"{L.describe(x)} | {L.describe(y)}: {fast.dim} vs {slow.dim}")
            elif fast.steps is not None and fast.steps > L.dim:
                failures.append(f"closure took {fast.steps} rounds")
        return _record(name, failures, self.trials)


# Fields


@lemma_check("field-axioms")
def check_field_axioms(svc: VerificationService) -> AssertionRecord:
    """Associativity, distributivity and inverses on all triples of F_p and F_{p^2}."""
    failures = []
    total = 0
    for k in (1, 2):
        spec = FieldSpec.create(svc.p, k)
        points = enumerate_field(spec)
        grid = np.meshgrid(*([np.arange(spec.order)] * 3), indexing="ij")
        a, b, c = (spec.gf(arr.reshape(-1)) for arr in grid)
        total += a.size
        if np.any(codes((a + b) + c) != codes(a + (b + c))):
            failures.append(f"{spec.label}: addition is not associative")
        if np.any(codes((a * b) * c) != codes(a * (b * c))):
            failures.append(f"{spec.label}: multiplication is not associative")
        if np.any(codes(a * (b + c)) != codes(a * b + a * c)):
            failures.append(f"{spec.label}: distributivity fails")
        for value in points[1:]:
            if field_arith("mul", value, field_arith("inv", value)) != 1:
                failures.append(f"{spec.label}: {int(value)} has a wrong inverse")
    return _record("field-axioms", failures, total)


@lemma_check("frobenius-homomorphism")
def check_frobenius(svc: VerificationService) -> AssertionRecord:
    """(a + b)^p = a^p + b^p and (ab)^p = a^p b^p on all pairs of F_{p^2}."""
    spec = FieldSpec.create(svc.p, 2)
    grid = np.meshgrid(np.arange(spec.order), np.arange(spec.order), indexing="ij")
    a, b = (spec.gf(arr.reshape(-1)) for arr in grid)
    failures = []
    if np.any(codes(frobenius(a + b)) != codes(frobenius(a) + frobenius(b))):
        failures.append("not additive")
    if np.any(codes(frobenius(a * b)) != codes(frobenius(a) * frobenius(b))):
        failures.append("not multiplicative")
    return _record("frobenius-homomorphism", failures, a.size)


@lemma_check("p-polynomial-roots-subgroup")
def check_roots_subgroup(svc: VerificationService) -> AssertionRecord:
    """Roots of p-polynomials in F_{p^2} form an additive subgroup."""
    spec = FieldSpec.create(svc.p, 2)
    failures = []
    for t in range(svc.trials):
        coeffs = random_elements(spec, 3, svc.rng(t))
        if coeffs[-1] == 0:
            coeffs[-1] = 1
        f = PPolynomial(coeffs)
        if not roots_form_subgroup(f, spec):
            failures.append(repr(f))
    return _record("p-polynomial-roots-subgroup", failures, svc.trials)


# Linear algebra


def _matrix_corpus(svc: VerificationService) -> list[FieldArray]:
    """Random, nilpotent-perturbed and diagonalizable matrices of size <= 6 over F_p and F_{p^2}."""
    corpus = []
    for t in range(svc.trials):
        rng = svc.rng(t)
        spec = FieldSpec.create(svc.p, 1 + t % 2)
        n = 2 + t % 5
        if t % 3 == 0:
            corpus.append(random_matrix(spec, n, rng))
        else:
            P = random_matrix(spec, n, rng)
            while rank(P) < n:
                P = random_matrix(spec, n, rng)
            D = spec.gf.Zeros((n, n))
            D[np.arange(n), np.arange(n)] = random_elements(spec, n, rng)
            if t % 3 == 1:
                D[0, 1] = 1
                D[1, 1] = D[0, 0]
            corpus.append(P @ D @ np.linalg.inv(P))
    return corpus


@lemma_check("p-min-poly-annihilates")
def check_p_min_poly(svc: VerificationService) -> AssertionRecord:
    """The minimal p-polynomial kills u and u, u^p, ... below its p-degree are independent."""
    failures = []
    corpus = _matrix_corpus(svc)
    for u in corpus:
        f = p_min_poly(u)
        if not _is_zero(f.evaluate_matrix(u)):
            failures.append(f"{f} does not annihilate a {u.shape[0]}x{u.shape[0]} matrix")
            continue
        p = f.p
        powers = [u]
        for _ in range(f.p_degree - 1):
            powers.append(mat_pow(powers[-1], p))
        if f.p_degree > 0 and not _is_zero(u):
            flat = stack([m.reshape(-1) for m in powers], type(u), u.size)
            if rank(flat) != f.p_degree:
                failures.append(f"{f} is not minimal")
    return _record("p-min-poly-annihilates", failures, len(corpus))


@lemma_check("p-order-of-p-power")
def check_p_order_power(svc: VerificationService) -> AssertionRecord:
    """ord(u^p) = ord(u)."""
    failures = []
    corpus = _matrix_corpus(svc)
    for u in corpus:
        p = int(type(u).characteristic)
        a, b = p_order(u), p_order(mat_pow(u, p))
        if a != b:
            failures.append(f"ord(u) = {a}, ord(u^p) = {b}")
    return _record("p-order-of-p-power", failures, len(corpus))


@lemma_check("split-semisimple-p-min-poly")
def check_split_semisimple(svc: VerificationService) -> AssertionRecord:
    """For diagonalizable u the minimal p-polynomial is the product of t - a over the eigenvalue span."""
    failures = []
    count = 0
    for t, u in enumerate(_matrix_corpus(svc)):
        if t % 3 != 2:
            continue
        count += 1
        span = additive_span(eigenvalues(u))
        expected = product_of_linear_factors(span)
        got = p_min_poly(u).to_poly()
        if got != expected:
            failures.append(f"{got} != {expected}")
        elif int(type(u).characteristic) ** p_order(u, cross_check=True) != span.size:
            failures.append(f"p-order disagrees with an eigenvalue span of {span.size}")
    return _record("split-semisimple-p-min-poly", failures, count)


@lemma_check("p-min-poly-frobenius-power")
def check_frobenius_power(svc: VerificationService) -> AssertionRecord:
    """
    p_min_poly(u) = f(t)^{p^k} with k the semisimple exponent and f the minimal
    p-polynomial of the semisimple part, i.e. the shift of the one of u^{p^k}.
    """
    failures = []
    corpus = _matrix_corpus(svc)
    for u in corpus:
        p = int(type(u).characteristic)
        k = semisimple_exponent(u)
        v = mat_pow(u, p**k)
        if p_min_poly(u) != p_min_poly(v).shift(k):
            failures.append(f"k = {k}: {p_min_poly(u)} vs {p_min_poly(v).shift(k)}")
    return _record("p-min-poly-frobenius-power", failures, len(corpus))


# Lie algebras


@lemma_check("commuting-pairs")
def check_commuting_pairs(svc: VerificationService) -> AssertionRecord:
    """Independent commuting elements generate a plane."""
    g = svc.build("A2")
    failures = []
    r = g.cartan.dim
    for t in range(svc.trials):
        rng = svc.rng(t)
        c = random_elements(g.spec, (2, r), rng)
        x, y = c[0] @ g.cartan.rows, c[1] @ g.cartan.rows
        if rank(stack([x, y], g.base.field, g.dim)) < 2:
            continue
        d = pair_dimension(g.base, x, y)
        if d != 2:
            failures.append(f"{g.base.describe(x)} | {g.base.describe(y)}: dim {d}")
    return _record("commuting-pairs", failures, svc.trials)


@lemma_check("gl2-invariance")
def check_gl2_invariance(svc: VerificationService) -> AssertionRecord:
    """dim F<x, y> is unchanged under (x, y) -> (ax + by, cx + dy)."""
    failures = []
    for descriptor in ("A2", "W:1:1"):
        L = lie_algebra_of(svc.build(descriptor))
        for t in range(svc.trials):
            rng = svc.rng(t)
            x, y = L.random_vector(rng), L.random_vector(rng)
            m = random_matrix(L.spec, 2, rng)
            if rank(m) < 2:
                continue
            before = pair_dimension(L, x, y)
            after = pair_dimension(L, m[0, 0] * x + m[0, 1] * y, m[1, 0] * x + m[1, 1] * y)
            if before != after:
                failures.append(f"{descriptor}: {before} -> {after}")
    return _record("gl2-invariance", failures, 2 * svc.trials)


@lemma_check("weight-brackets-add")
def check_weight_brackets(svc: VerificationService) -> AssertionRecord:
    """Weight spaces fill the algebra and [L^a, L^b] lies in L^{a+b}."""
    W = svc.build("W:2:1")
    decomposition = weight_decomposition(W.base, W.torus())
    failures = []
    if decomposition.total_dim != W.dim:
        failures.append(f"weight spaces span {decomposition.total_dim} of {W.dim}")
    p = W.p
    for a in range(W.dim):
        wa = decomposition.weight_of(W.base.basis_vector(a))
        for b in range(a + 1, W.dim):
            v = W.base.bracket(W.base.basis_vector(a), W.base.basis_vector(b))
            if _is_zero(v):
                continue
            wb = decomposition.weight_of(W.base.basis_vector(b))
            target = tuple((i + j) % p for i, j in zip(wa, wb))
            if decomposition.weight_of(v) != target:
                failures.append(f"[{W.base.label(a)}, {W.base.label(b)}]")
    return _record("weight-brackets-add", failures, W.dim * (W.dim - 1) // 2)


# Classical algebras


@lemma_check("root-spaces-one-dimensional")
def check_root_spaces(svc: VerificationService) -> AssertionRecord:
    """Every root space is a line."""
    failures = []
    total = 0
    for p in (5, 7):
        for descriptor in ("A1", "A2", "B2", "G2"):
            g = svc.build(descriptor, p)
            dims = root_space_dimensions(g)
            total += 1
            if len(dims) != len(g.roots) or any(d != 1 for d in dims.values()):
                failures.append(f"{descriptor}@F{p}: {sorted(dims.values())}")
    return _record("root-spaces-one-dimensional", failures, total)


@lemma_check("coroots-span-cartan")
def check_coroots(svc: VerificationService) -> AssertionRecord:
    """The brackets [e_a, e_-a] span the Cartan subalgebra."""
    failures = []
    total = 0
    for p in (5, 7):
        for descriptor in ("A1", "A2", "B2", "G2"):
            g = svc.build(descriptor, p)
            total += 1
            got = coroot_span_dim(g)
            if got != g.cartan.dim:
                failures.append(f"{descriptor}@F{p}: span {got} of {g.cartan.dim}")
    return _record("coroots-span-cartan", failures, total)


@lemma_check("vandermonde-separation")
def check_vandermonde(svc: VerificationService) -> AssertionRecord:
    """For dense x and regular y the iterates (ad y)^k x span every root component of x."""
    g: ClassicalAlgebra = svc.build("A2", k=2)
    service = ClassicalService(seed=svc.seed)
    failures = []
    for t in range(svc.trials):
        rng = svc.rng(t)
        x = g.base.random_vector(rng)
        if not np.all(codes(g.root_components(x)) != 0):
            x, _ = service.densify_components(g, _random_nonzero(g.base, rng), rng)
        y = service.regular_cartan_element(g, rng)
        got = vandermonde_rank(g, x, y)
        if got != len(g.roots):
            failures.append(f"rank {got} of {len(g.roots)}")
    return _record("vandermonde-separation", failures, svc.trials)


@lemma_check("automorphisms-preserve-brackets")
def check_automorphisms(svc: VerificationService) -> AssertionRecord:
    """exp(t ad e_a) preserves brackets for every root and random t."""
    service = ClassicalService(seed=svc.seed)
    failures = []
    total = 0
    for descriptor in ("A2", "G2"):
        g = svc.build(descriptor)
        for i, root in enumerate(g.roots):
            t = random_elements(g.spec, (), svc.rng(i))
            sigma = service.exp_ad_automorphism(g, root, t, verify=False)
            total += 1
            if not service.is_automorphism(g.base, sigma):
                failures.append(f"{descriptor}: exp ad e_{root}")
    return _record("automorphisms-preserve-brackets", failures, total)


@lemma_check("direct-sum-partners")
def check_direct_sum(svc: VerificationService) -> AssertionRecord:
    """In sl_2 + sl_2 every x with both projections non-zero has a generating partner."""
    g: ClassicalAlgebra = svc.build("A1+A1")
    service = ClassicalService(seed=svc.seed)
    failures = []
    count = 0
    for t in range(svc.trials):
        rng = svc.rng(t)
        x = g.base.random_vector(rng)
        if not all(is_nonzero(g.base.projection(x, b)) for b in range(len(g.base.blocks))):
            continue
        count += 1
        y, _ = service.theoremB_partner(g, x, rng)
        d = pair_dimension(g.base, x, y)
        if d != g.dim:
            failures.append(f"{g.base.describe(x)}: dim {d}")
    return _record("direct-sum-partners", failures, count)


# Divided powers and Witt algebras


@lemma_check("divided-power-p-th-powers")
def check_dp_powers(svc: VerificationService) -> AssertionRecord:
    """f^p is the constant c^p, zero exactly on the maximal ideal."""
    failures = []
    O1: DividedPowerAlgebra = svc.build("O:1:1")
    cases = [O1.field(list(c)) for c in itertools.product(range(O1.spec.order), repeat=O1.dim)]
    O2: DividedPowerAlgebra = svc.build("O:2:1")
    for t in range(svc.trials):
        cases.append(random_elements(O2.spec, O2.dim, svc.rng(t)))
    for f in cases:
        O = O1 if f.size == O1.dim else O2
        c = O.constant_term(f)
        power = O.power(f, O.p)
        if not _is_zero(power - (c**O.p) * O.one()):
            failures.append(f"{O.name}: {codes(f).tolist()}")
    return _record("divided-power-p-th-powers", failures, len(cases))


@lemma_check("witt-dimensions")
def check_witt_dimensions(svc: VerificationService) -> AssertionRecord:
    """dim O(m, n) = p^|n| and dim W(m, n) = m p^|n|."""
    failures = []
    cases = ["W:1:1", "W:1:2", "W:2:1", "W:2:1,2"]
    for descriptor in cases:
        W: WittAlgebra = svc.build(descriptor)
        size = W.p ** sum(W.n)
        if W.O.dim != size or W.dim != W.m * size:
            failures.append(f"{descriptor}: dims {W.O.dim}, {W.dim}")
    return _record("witt-dimensions", failures, len(cases))


@lemma_check("grading-compatibility")
def check_grading(svc: VerificationService) -> AssertionRecord:
    """deg x^(a)D_j = |a| - 1 and brackets add degrees."""
    W: WittAlgebra = svc.build("W:2:1")
    failures = []
    degrees = W.base.grading
    for i, (alpha, _) in enumerate(W.basis):
        if degrees[i] != length(alpha) - 1:
            failures.append(f"{W.base.label(i)} has degree {degrees[i]}")
    for (a, b), terms in W.base.upper_constants().items():
        if any(degrees[c] != degrees[a] + degrees[b] for c in terms):
            failures.append(f"[{W.base.label(a)}, {W.base.label(b)}]")
    return _record("grading-compatibility", failures, W.dim)


@lemma_check("bracket-generation-by-bottom")
def check_bottom_generation(svc: VerificationService) -> AssertionRecord:
    """W_i = [W_-1, W_{i+1}] below the top degree."""
    failures = []
    for descriptor in ("W:1:1", "W:2:1", "W:1:2"):
        result = bracket_generation_by_bottom(svc.build(descriptor))
        failures.extend(f"{descriptor}: degree {d}" for d, ok in result.items() if not ok)
    return _record("bracket-generation-by-bottom", failures, 3)


@lemma_check("zassenhaus-witt-isomorphism")
def check_zassenhaus(svc: VerificationService) -> AssertionRecord:
    """e_i -> x^(i+1)D identifies the Zassenhaus constants with those of W(1, n)."""
    failures = []
    for n in (1, 2):
        Z: WittAlgebra = svc.build(f"Zass:{n}")
        W: WittAlgebra = svc.build(f"W:1:{n}")
        if Z.base.upper_constants() != W.base.upper_constants():
            failures.append(f"Zass:{n}")
    return _record("zassenhaus-witt-isomorphism", failures, 2)


@lemma_check("torus-weights")
def check_torus_weights(svc: VerificationService) -> AssertionRecord:
    """Weights of the degree 0 component avoid those of the bottom and top components."""
    failures = []
    p = svc.p
    W11: WittAlgebra = svc.build("W:1:1")
    if torus_weights(W11, W11.top_degree) != [((p - 2) % p,)]:
        failures.append(f"W:1:1 top weights {torus_weights(W11, W11.top_degree)}")
    for descriptor in ("W:1:1", "W:2:1", "W:1:2", "W:2:1,2"):
        W: WittAlgebra = svc.build(descriptor)
        zero = set(torus_weights(W, 0))
        if zero & set(torus_weights(W, -1)) or zero & set(torus_weights(W, W.top_degree)):
            failures.append(f"{descriptor}: degree 0 weights meet an end component")
    W21: WittAlgebra = svc.build("W:2:1")
    if set(torus_weights(W21, -1)) != {(p - 1, 0), (0, p - 1)}:
        failures.append(f"W:2:1 bottom weights {torus_weights(W21, -1)}")
    return _record("torus-weights", failures, 6)


@lemma_check("iota-embedding")
def check_iota(svc: VerificationService) -> AssertionRecord:
    """W(m, n) -> W(|n|, 1) is an injective homomorphism sending top to top."""
    failures = []
    for descriptor in ("W:1:1", "W:1:2", "W:2:1,2"):
        source: WittAlgebra = svc.build(descriptor)
        target, M, report = iota_embed(source, cap=CORPUS_CAP)
        if not report.passed:
            failures.append(f"{descriptor}: {report.first_failure or report}")
        if descriptor == "W:1:1" and not _is_zero(M - source.base.field.Identity(source.dim)):
            failures.append("W:1:1 is not mapped identically")
    return _record("iota-embedding", failures, 3)


@lemma_check("top-structures")
def check_top_structures(svc: VerificationService) -> AssertionRecord:
    """x^(tau) spans the minimal ideal and J_0 . W is the top component."""
    failures = []
    O: DividedPowerAlgebra = svc.build("O:1:1")
    structures = top_and_min_structures(O)
    if structures.minimal_ideal.shape[0] != 1 or not structures.consistent:
        failures.append("O:1:1")
    for descriptor in ("W:2:1", "W:1:2"):
        W: WittAlgebra = svc.build(descriptor)
        structures = top_and_min_structures(W)
        if not structures.consistent:
            failures.append(descriptor)
        if descriptor == "W:2:1" and structures.top_component.dim != 2:
            failures.append(f"W:2:1 top of dimension {structures.top_component.dim}")
    return _record("top-structures", failures, 3)


@lemma_check("product-lemma")
def check_product_lemma(svc: VerificationService) -> AssertionRecord:
    """The product criterion for dependence agrees with rank."""
    W: WittAlgebra = svc.build("W:2:1")
    O = W.O
    d1, d2 = W.partial(0), W.partial(1)
    x1 = O.variable(0)
    expectations = [
        (product_lemma_check("w", W, [d1, d2]), False, "D_1, D_2"),
        (product_lemma_check("w", W, [d1, d2, d1 + d2]), True, "D_1, D_2, D_1 + D_2"),
        (product_lemma_check("omn", O, [x1, x1]), True, "x_1, x_1"),
    ]
    failures = [label for got, want, label in expectations if got != want]
    for t in range(svc.trials):
        c = random_elements(W.spec, (2, 2), svc.rng(t))
        xs = [c[i, 0] * O.variable(0) + c[i, 1] * O.variable(1) for i in range(2)]
        product_lemma_check("omn", O, xs)
        ds = [c[i, 0] * d1 + c[i, 1] * d2 for i in range(2)]
        product_lemma_check("w", W, ds)
    return _record("product-lemma", failures, len(expectations) + 2 * svc.trials)


# p-structure


@lemma_check("p-power-ad-identity")
def check_p_power(svc: VerificationService) -> AssertionRecord:
    """ad(y^[p]) = (ad y)^p, with e_0 fixed and e_-1 killed in W(1, 1)."""
    failures = []
    W11: WittAlgebra = svc.build("W:1:1")
    if not _is_zero(p_power(W11.base, W11.e(0), W11) - W11.e(0)):
        failures.append("e_0^[p] != e_0")
    if not _is_zero(p_power(W11.base, W11.e(-1), W11)):
        failures.append("e_-1^[p] != 0")
    cases = 2
    for descriptor in ("W:1:1", "W:2:1", "A2"):
        built = svc.build(descriptor)
        L = lie_algebra_of(built)
        witt = built if isinstance(built, WittAlgebra) else None
        for t in range(svc.trials):
            y = L.random_vector(svc.rng(t))
            z = p_power(L, y, witt)
            cases += 1
            if not _is_zero(L.ad(z) - mat_pow(L.ad(y), L.spec.p)):
                failures.append(f"{descriptor}: {L.describe(y)}")
    return _record("p-power-ad-identity", failures, cases)


@lemma_check("toral-span")
def check_toral_span(svc: VerificationService) -> AssertionRecord:
    """dim of the toral span equals the p-order of ad y."""
    failures = []
    W11: WittAlgebra = svc.build("W:1:1")
    if toral_span(W11.base, W11.e(0)).dim != 1:
        failures.append("span of e_0 is not a line")
    if toral_span(W11.base, W11.e(-1)).dim != 0:
        failures.append("nilpotent e_-1 has a non-zero toral span")
    for k, expected in ((1, 1), (2, 2)):
        g: ClassicalAlgebra = svc.build("A1+A1", k=k)
        (o0, _), (o1, _) = g.base.blocks
        h = 1
        y = g.base.basis_vector(o0 + h) + (2 if k == 1 else generator(g.spec)) * g.base.basis_vector(o1 + h)
        got = toral_span(g.base, y).dim
        if got != expected:
            failures.append(f"(h, c h) over {g.spec.label}: dim {got}, expected {expected}")
    return _record("toral-span", failures, 4)


@lemma_check("dependence-index")
def check_dependence(svc: VerificationService) -> AssertionRecord:
    """k = 1 and f = t^p for e_-1 in W(1, 1); k = 0 on W_{>=0}; k <= m throughout."""
    failures = []
    W11: WittAlgebra = svc.build("W:1:1")
    data = dependence_data(W11, W11.e(-1))
    if data.k != 1 or data.f != PPolynomial(W11.base.field([0, 1])):
        failures.append(f"e_-1: k = {data.k}, f = {data.f}")
    data = dependence_data(W11, W11.e(0) + W11.e(2))
    if data.k != 0:
        failures.append(f"e_0 + e_2: k = {data.k}")
    cases = 2
    W21: WittAlgebra = svc.build("W:2:1")
    for t in range(svc.trials):
        y = W21.base.random_vector(svc.rng(t))
        data = dependence_data(W21, y)
        cases += 1
        if data.k > W21.m or p_min_poly(W21.base.ad(y)).p_degree > W21.m:
            failures.append(f"{W21.base.describe(y)}: k = {data.k}")
    return _record("dependence-index", failures, cases)


@lemma_check("delta-element")
def check_delta(svc: VerificationService) -> AssertionRecord:
    """delta = e_-1 for x = e_3, y = e_-1; degree s - k(p - 1) and x in B delta on random pairs."""
    failures = []
    W11: WittAlgebra = svc.build("W:1:1")
    s = W11.top_degree
    result = delta_element(W11, W11.e(s), W11.e(-1))
    if not _is_zero(result.delta - W11.e(-1)) or not result.in_module:
        failures.append("e_s, e_-1 example")
    W21: WittAlgebra = svc.build("W:2:1")
    for t in range(svc.trials):
        rng = svc.rng(t)
        x, y = _random_top(W21, rng), _random_nonzero(W21.base, rng)
        result = delta_element(W21, x, y)
        if not (result.degree_ok and result.in_module):
            failures.append(f"degree {result.degree}, expected {result.expected_degree}")
    return _record("delta-element", failures, svc.trials + 1)


@lemma_check("orders-agree")
def check_orders(svc: VerificationService) -> AssertionRecord:
    """ord(h) = ord(gr h) for h in filtration degree zero."""
    failures = []
    for descriptor in ("W:1:1", "W:2:1"):
        W: WittAlgebra = svc.build(descriptor)
        view = filtration_view(W.base)
        for t in range(svc.trials):
            h = W.base.random_vector(svc.rng(t))
            h[W.component_indices(-1)] = 0
            try:
                ord_compare(view, h)
            except ModlieError as e:
                failures.append(f"{descriptor}: {e}")
    return _record("orders-agree", failures, 2 * svc.trials)


@lemma_check("orders-agree-remark")
def check_orders_remark(svc: VerificationService) -> AssertionRecord:
    """h = e_-1 + e_0 lies outside degree zero and gives ord(h) = 1, ord(gr h) = 0."""
    W: WittAlgebra = svc.build("W:1:1")
    h = W.e(-1) + W.e(0)
    try:
        ord_compare(filtration_view(W.base), h)
    except ElementBelowFiltrationZero as e:
        c = e.comparison
        ok = c is not None and (c.ord_h, c.ord_gr, c.equal) == (1, 0, False)
        detail = f"ord(h) = {c.ord_h}, ord(gr h) = {c.ord_gr}" if c is not None else "no comparison"
        return AssertionRecord(name="orders-agree-remark", passed=ok, detail=detail)
    return AssertionRecord(name="orders-agree-remark", passed=False, detail="nu(h) >= 0")


def _degree_support_cases(svc: VerificationService):
    for descriptor in ("W:1:1", "W:2:1"):
        W: WittAlgebra = svc.build(descriptor)
        for t in range(svc.trials):
            rng = svc.rng(t)
            yield W, _random_top(W, rng), _random_nonzero(W.base, rng)


@lemma_check("degree-support-lower-bound")
def check_support_lower(svc: VerificationService) -> AssertionRecord:
    """(ad y)^a x lies in degrees >= s - |a|_p for a <= p^m."""
    failures = []
    cases = 0
    for W, x, y in _degree_support_cases(svc):
        ad_y = W.base.ad(y)
        v = x
        for a in range(W.p**W.m + 1):
            if a > 0:
                v = ad_y @ v
            low = W.lowest_degree(v)
            cases += 1
            if low is not None and low < W.top_degree - p_ary(a, W.p)[1]:
                failures.append(f"{W.descriptor}, a = {a}: degree {low}")
    return _record("degree-support-lower-bound", failures, cases)


@lemma_check("degree-support-exact")
def check_support_exact(svc: VerificationService) -> AssertionRecord:
    """For a < p^k the lowest degree of (ad y)^a x is exactly s - |a|_p."""
    failures = []
    cases = 0
    for W, x, y in _degree_support_cases(svc):
        k = dependence_data(W, y).k
        ad_y = W.base.ad(y)
        v = x
        for a in range(W.p**k):
            if a > 0:
                v = ad_y @ v
            cases += 1
            expected = W.top_degree - p_ary(a, W.p)[1]
            if W.lowest_degree(v) != expected:
                failures.append(f"{W.descriptor}, a = {a}: {W.lowest_degree(v)} vs {expected}")
    return _record("degree-support-exact", failures, cases)


@lemma_check("top-element-branches")
def check_branches(svc: VerificationService) -> AssertionRecord:
    """k = m: [y, delta] = 0 and F<x, y> in B delta + F y; k < m: [x, H] = 0 and F<x, y> = H + F y."""
    failures = []
    cases = 0
    for W, x, y in _degree_support_cases(svc):
        k, branch, checks = top_element_branches(W, x, y)
        cases += 1
        bad = [name for name, ok in checks.items() if not ok]
        if bad:
            failures.append(f"{W.descriptor} ({branch}, k = {k}): {', '.join(bad)}")
    return _record("top-element-branches", failures, cases)


# Generation


@lemma_check("certificate-replay")
def check_replay(svc: VerificationService) -> AssertionRecord:
    """Certificates of the recipes replay to the recorded dimension."""
    service = GenerationService(seed=svc.seed)
    failures = []
    W: WittAlgebra = svc.build("W:1:1", k=2)
    certificates = [(W.base, service.graded_recipe_pair(W))]
    g: ClassicalAlgebra = svc.build("A2", k=2)
    for t in range(3):
        rng = svc.rng(t)
        x = _random_nonzero(g.base, rng)
        y, _ = service.classical.theoremB_partner(g, x, rng)
        certificates.append((g.base, certify(g.base, x, y, "theoremB", svc.seed, t)))
    for L, cert in certificates:
        if not replay(L, cert) or cert.closure_dim != L.dim:
            failures.append(f"{cert.method} over {cert.field}")
    return _record("certificate-replay", failures, len(certificates))


@lemma_check("graded-recipe-generates")
def check_graded_recipe(svc: VerificationService) -> AssertionRecord:
    """The graded pair generates W(1, 1), W(2, 1) and W(1, 2) over F_{p^2}."""
    service = GenerationService(seed=svc.seed)
    failures = []
    for descriptor in ("W:1:1", "W:2:1", "W:1:2"):
        W: WittAlgebra = svc.build(descriptor, k=2)
        cert = service.graded_recipe_pair(W)
        if cert.closure_dim != W.dim:
            failures.append(f"{descriptor}: {cert.closure_dim}")
    return _record("graded-recipe-generates", failures, 3)


@lemma_check("zassenhaus-partners")
def check_zassenhaus_partners(svc: VerificationService) -> AssertionRecord:
    """Non-zero x in W(1, 1) with F_p coordinates get a partner e_-1 + alpha e_s."""
    service = GenerationService(seed=svc.seed)
    Z: WittAlgebra = svc.build("Zass:1")
    failures = []
    for t in range(svc.trials):
        x = _random_nonzero(Z.base, svc.rng(t))
        cert = service.zassenhaus_partner(Z, x)
        if cert.closure_dim != Z.dim:
            failures.append(Z.base.describe(x))
    return _record("zassenhaus-partners", failures, svc.trials)


@lemma_check("obstruction-bound")
def check_obstruction(svc: VerificationService) -> AssertionRecord:
    """Pairs with x in the top component of W(2, 1) never generate and dim [L, L] <= p^2."""
    service = GenerationService(seed=svc.seed)
    W: WittAlgebra = svc.build("W:2:1")
    failures = []
    cases = 0
    for i in W.component_indices(W.top_degree):
        report = service.obstruction_report(W, W.base.basis_vector(int(i)), svc.trials)
        cases += len(report.trials)
        if report.violations:
            failures.append(f"{W.base.label(int(i))}: {report.verdict}")
    return _record("obstruction-bound", failures, cases)


def available_checks() -> list[str]:
    """Names of the lemmas suite checks."""
    return list(LEMMA_CHECKS)
