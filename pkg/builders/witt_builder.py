"""Witt algebras W(m, n), the Zassenhaus presentation of W(1, n) and the embedding into W(|n|, 1)."""

from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from builders.base_builder import BaseBuilder
from builders.divided_powers import (
    DividedPowerAlgebra,
    MultiIndex,
    build_divided_powers,
    dp_multiply,
    is_independent,
    length,
    lucas_binomial,
    p_digits,
    sub,
    truncated_power_vanishes,
    unit,
)
from config.settings import settings
from core.field import FieldArray, FieldSpec, codes
from core.liealg import LieAlgebra, SubalgebraBasis, is_simple_spot_check, weight_decomposition
from core.linalg import mat_pow, rank, stack
from schemas.report import EmbeddingReport
from utils.exceptions import InvariantViolation, PreconditionError
from utils.helpers import trial_rng

WittBasis = tuple[MultiIndex, int]


def witt_basis(O: DividedPowerAlgebra) -> list[WittBasis]:
    """(alpha, j) pairs ordered by (degree, alpha, j)."""
    pairs = [(alpha, j) for alpha in O.basis for j in range(O.m)]
    return sorted(pairs, key=lambda b: (length(b[0]) - 1, b[0], b[1]))


def witt_label(alpha: MultiIndex, j: int) -> str:
    """Label such as x^(2,0)D_1."""
    return "x^(" + ",".join(str(a) for a in alpha) + f")D_{j + 1}"


class WittAlgebra:
    """
    W(m, n) as a structure-constant algebra on x^(alpha)D_j.

    The divided power algebra is kept alongside so elements can act on O(m, n)
    and be multiplied by functions.
    """

    def __init__(
        self,
        base: LieAlgebra,
        O: DividedPowerAlgebra,
        basis: list[WittBasis],
        zassenhaus: bool = False,
    ) -> None:
        """Wrap a built algebra and its coefficient ring."""
        self.base = base
        self.O = O
        self.basis = basis
        self.index = {b: i for i, b in enumerate(basis)}
        self.zassenhaus = zassenhaus

    @property
    def spec(self) -> FieldSpec:
        """Working field."""
        return self.base.spec

    @property
    def m(self) -> int:
        """Number of variables."""
        return self.O.m

    @property
    def n(self) -> tuple[int, ...]:
        """Truncation heights."""
        return self.O.n

    @property
    def p(self) -> int:
        """Characteristic."""
        return self.spec.p

    @property
    def dim(self) -> int:
        """m p^{|n|}."""
        return self.base.dim

    @property
    def top_degree(self) -> int:
        """s = |tau| - 1."""
        return self.O.top_degree - 1

    @property
    def descriptor(self) -> str:
        """CLI descriptor."""
        if self.zassenhaus:
            return f"Zass:{self.n[0]}"
        return f"W:{self.m}:" + ",".join(str(k) for k in self.n)

    @property
    def restricted(self) -> bool:
        """W(m, n) carries a p-map exactly when n = (1, ..., 1)."""
        return all(k == 1 for k in self.n)

    def element(self, alpha: Sequence[int], j: int) -> FieldArray:
        """The basis vector x^(alpha)D_j (j is 0-based)."""
        return self.base.basis_vector(self.index[(tuple(alpha), j)])

    def partial(self, j: int) -> FieldArray:
        """D_j."""
        return self.element(tuple(0 for _ in range(self.m)), j)

    def e(self, i: int) -> FieldArray:
        """Zassenhaus basis vector e_i = x^(i+1)D, -1 <= i <= s."""
        if self.m != 1:
            raise PreconditionError("e_i is defined on W(1, n) only")
        return self.element((i + 1,), 0)

    def torus(self) -> list[FieldArray]:
        """Standard torus x^(epsilon_i)D_i."""
        return [self.element(unit(self.m, i), i) for i in range(self.m)]

    def component_indices(self, degree: int) -> np.ndarray:
        """Basis indices of W_degree."""
        return self.base.component_indices(degree)

    def component(self, degree: int) -> SubalgebraBasis:
        """W_degree as a subspace."""
        return self.base.homogeneous_subspace([degree])

    def at_least(self, degree: int) -> SubalgebraBasis:
        """W_{>= degree}."""
        return self.base.homogeneous_subspace(d for d in self.base.degrees if d >= degree)

    def lowest_degree(self, v: FieldArray) -> Optional[int]:
        """Least degree with a non-zero component, None for v = 0."""
        support = self.base.support_degrees(v)
        return support[0] if support else None

    # Module structure over O(m, n)

    def coefficients(self, v: FieldArray) -> list[FieldArray]:
        """f_j with v = sum f_j D_j, as vectors of O."""
        parts = [self.O.field.Zeros(self.O.dim) for _ in range(self.m)]
        for i, (alpha, j) in enumerate(self.basis):
            if v[i] != 0:
                parts[j][self.O.index[alpha]] = v[i]
        return parts

    def from_coefficients(self, parts: Sequence[FieldArray]) -> FieldArray:
        """sum f_j D_j from the f_j."""
        v = self.base.zero()
        for i, (alpha, j) in enumerate(self.basis):
            v[i] = parts[j][self.O.index[alpha]]
        return v

    def module_action(self, b: FieldArray, v: FieldArray) -> FieldArray:
        """b . v for b in O(m, n)."""
        return self.from_coefficients([self.O.multiply(b, f) for f in self.coefficients(v)])

    def module_matrix(self, v: FieldArray) -> FieldArray:
        """Matrix of b -> b . v, from O(m, n) into W."""
        columns = [self.module_action(self.O.monomial(alpha), v) for alpha in self.O.basis]
        return stack(columns, self.base.field, self.dim).T

    def derivation_operator(self, v: FieldArray) -> FieldArray:
        """Matrix of the derivation v acting on O(m, n)."""
        op = self.O.field.Zeros((self.O.dim, self.O.dim))
        for j, f in enumerate(self.coefficients(v)):
            if np.any(codes(f)):
                op = op + self.O.multiplication_matrix(f) @ self.O.partial(j)
        return op

    def derivation_from_operator(self, op: FieldArray) -> FieldArray:
        """The special derivation with the given values on x_1, ..., x_m."""
        return self.from_coefficients([op @ self.O.variable(j) for j in range(self.m)])

    def over(self, spec: FieldSpec) -> "WittAlgebra":
        """Scalar extension."""
        if spec == self.spec:
            return self
        return WittAlgebra(
            self.base.over(spec), DividedPowerAlgebra(self.m, self.n, spec), self.basis, self.zassenhaus
        )

    def __repr__(self) -> str:
        return f"WittAlgebra({self.descriptor}, dim={self.dim}, {self.spec.label})"


def witt_constants(O: DividedPowerAlgebra, basis: list[WittBasis]) -> dict[tuple[int, int], dict[int, int]]:
    """
    [fD_i, gD_j] = f D_i(g) D_j - g D_j(f) D_i on basis pairs a < b.
    """
    index = {b: i for i, b in enumerate(basis)}
    constants: dict[tuple[int, int], dict[int, int]] = {}
    for a, (alpha, i) in enumerate(basis):
        for b in range(a + 1, len(basis)):
            beta, j = basis[b]
            terms: dict[int, int] = {}
            if beta[i] > 0:
                c, total = dp_multiply(O, alpha, sub(beta, unit(O.m, i)))
                if c:
                    k = index[(total, j)]
                    terms[k] = (terms.get(k, 0) + c) % O.p
            if alpha[j] > 0:
                c, total = dp_multiply(O, beta, sub(alpha, unit(O.m, j)))
                if c:
                    k = index[(total, i)]
                    terms[k] = (terms.get(k, 0) - c) % O.p
            terms = {k: c for k, c in terms.items() if c}
            if terms:
                constants[(a, b)] = terms
    return constants


class WittBuilder(BaseBuilder):
    """Builder for W(m, n)."""

    def __init__(self, m: int, n: Sequence[int], cap: Optional[int] = None) -> None:
        """
        Initialize Witt builder.

        Args:
            m: Number of variables
            n: Truncation heights
            cap: Dimension cap override
        """
        n = tuple(int(k) for k in n)
        super().__init__("witt", f"W:{m}:" + ",".join(str(k) for k in n))
        if m < 1 or len(n) != m:
            raise PreconditionError(f"W(m, n) needs n of length m, got m={m}, n={n}")
        self.m = m
        self.n = n
        self.cap = cap

    def expected_dim(self, p: int) -> int:
        """m p^{|n|}."""
        return self.m * p ** sum(self.n)

    def build(self, spec: FieldSpec) -> WittAlgebra:
        """Construct, validate, check the torus and spot-check simplicity."""
        self.check_cap(spec.p, self.cap)
        O = build_divided_powers(self.m, self.n, spec)
        basis = witt_basis(O)
        grading = [length(alpha) - 1 for alpha, _ in basis]
        labels = [witt_label(alpha, j) for alpha, j in basis]
        base = LieAlgebra(spec, len(basis), witt_constants(O, basis), grading, labels, self.descriptor)
        W = WittAlgebra(base, O, basis)
        self.validated(base)
        check_witt_shape(W)
        if W.dim <= settings.simplicity_check_max_dim and not is_simple_spot_check(
            base, trial_rng(0, W.dim)
        ):
            raise InvariantViolation(f"{W.descriptor} failed the simplicity spot check")
        return W


def check_witt_shape(W: WittAlgebra) -> None:
    """Dimension, degree range, top and bottom components, diagonal torus."""
    expected = W.m * W.p ** sum(W.n)
    if W.dim != expected:
        raise InvariantViolation(f"{W.descriptor} has dimension {W.dim}, expected {expected}")
    if W.base.degrees[0] != -1 or W.base.degrees[-1] != W.top_degree:
        raise InvariantViolation(f"{W.descriptor} has degrees {W.base.degrees[0]}..{W.base.degrees[-1]}")
    for degree in (-1, W.top_degree):
        if len(W.component_indices(degree)) != W.m:
            raise InvariantViolation(f"component {degree} of {W.descriptor} is not of dimension m")
    for t in W.torus():
        a = W.base.ad(t)
        off = codes(a).copy()
        np.fill_diagonal(off, 0)
        if np.any(off):
            raise InvariantViolation(f"torus element {W.base.describe(t)} is not diagonal")


def build_witt(m: int, n: Sequence[int], spec: FieldSpec, cap: Optional[int] = None) -> WittAlgebra:
    """
    Build W(m, n).

    Args:
        m: Number of variables
        n: Truncation heights
        spec: Working field
        cap: Dimension cap override

    Returns:
        The validated algebra
    """
    return WittBuilder(m, n, cap).build(spec)


def zassenhaus_coefficient(i: int, j: int, p: int) -> int:
    """binom(i+j+1, j) - binom(i+j+1, i) mod p."""
    return (lucas_binomial(i + j + 1, j, p) - lucas_binomial(i + j + 1, i, p)) % p


class ZassenhausBuilder(BaseBuilder):
    """Builder for W(1, n) on the basis e_{-1}, ..., e_s."""

    def __init__(self, n: int, cap: Optional[int] = None) -> None:
        """
        Initialize Zassenhaus builder.

        Args:
            n: Truncation height
            cap: Dimension cap override
        """
        super().__init__("zassenhaus", f"Zass:{n}")
        if n < 1:
            raise PreconditionError("Zass:n needs n >= 1")
        self.n = n
        self.cap = cap

    def expected_dim(self, p: int) -> int:
        """p^n."""
        return p**self.n

    def build(self, spec: FieldSpec) -> WittAlgebra:
        """Construct from the binomial constants and compare with W(1, n)."""
        self.check_cap(spec.p, self.cap)
        p = spec.p
        s = p**self.n - 2
        constants: dict[tuple[int, int], dict[int, int]] = {}
        for i in range(-1, s + 1):
            for j in range(i + 1, s + 1):
                if i + j > s:
                    continue
                c = zassenhaus_coefficient(i, j, p)
                if c:
                    constants[(i + 1, j + 1)] = {i + j + 1: c}
        grading = list(range(-1, s + 1))
        labels = [f"e_{i}" for i in grading]
        base = LieAlgebra(spec, s + 2, constants, grading, labels, self.descriptor)
        self.validated(base)

        O = build_divided_powers(1, (self.n,), spec)
        witt = LieAlgebra(spec, s + 2, witt_constants(O, witt_basis(O)), grading)
        if base.upper_constants() != witt.upper_constants():
            raise InvariantViolation(f"{self.descriptor} disagrees with W(1,{self.n}) under e_i -> x^(i+1)D")
        W = WittAlgebra(base, O, witt_basis(O), zassenhaus=True)
        check_witt_shape(W)
        return W


def build_zassenhaus(n: int, spec: FieldSpec, cap: Optional[int] = None) -> WittAlgebra:
    """Build the Zassenhaus algebra W(1, n)."""
    return ZassenhausBuilder(n, cap).build(spec)


# Weights


def formula_weight(alpha: MultiIndex, j: int, p: int) -> tuple[int, ...]:
    """Weight alpha - epsilon_j of x^(alpha)D_j, reduced mod p."""
    return tuple((a - int(i == j)) % p for i, a in enumerate(alpha))


def torus_weights(W: WittAlgebra, degree: int) -> list[tuple[int, ...]]:
    """
    Weights of the standard torus on W_degree.

    The decomposition is computed from the ad action and compared with the
    closed formula alpha - epsilon_j.

    Returns:
        Sorted weights as tuples of integers mod p
    """
    decomposition = weight_decomposition(W.base, W.torus(), W.component(degree))
    computed = sorted(decomposition.weights)
    expected = sorted(
        {formula_weight(alpha, j, W.p) for (alpha, j) in W.basis if length(alpha) - 1 == degree}
    )
    if computed != expected:
        raise InvariantViolation(f"torus weights {computed} on degree {degree}, formula gives {expected}")
    return computed


# Embedding into W(|n|, 1)


def _flatten_index(O: DividedPowerAlgebra, alpha: MultiIndex) -> MultiIndex:
    """Exponent of phi(x^(alpha)) in O(|n|, 1): the p-digits of every alpha_i in turn."""
    digits: list[int] = []
    for a, k in zip(alpha, O.n):
        digits.extend(p_digits(a, O.p, k))
    return tuple(digits)


def iota_matrix(source: WittAlgebra, target: WittAlgebra) -> FieldArray:
    """
    Matrix of iota: W(m, n) -> W(|n|, 1).

    x_i^(p^j) maps to the variable y_{i,j}; a derivation f D_i goes to
    sum_j phi(f) phi(D_i x_i^(p^j)) D_{y_{i,j}} with D_i x_i^(p^j) = x_i^(p^j - 1).
    """
    O, T = source.O, target.O
    offsets = np.concatenate([[0], np.cumsum(O.n)]).astype(int)
    columns = []
    for alpha, i in source.basis:
        image: dict[int, int] = {}
        phi_f = _flatten_index(O, alpha)
        for j in range(O.n[i]):
            factor = tuple(
                T.p - 1 if offsets[i] <= r < offsets[i] + j else 0 for r in range(T.m)
            )
            c, total = dp_multiply(T, phi_f, factor)
            if c:
                k = target.index[(total, int(offsets[i] + j))]
                image[k] = (image.get(k, 0) + c) % T.p
        columns.append(target.base.vector(image))
    return stack(columns, target.base.field, target.dim).T


def iota_embed(
    source: WittAlgebra, cap: Optional[int] = None
) -> tuple[WittAlgebra, FieldArray, EmbeddingReport]:
    """
    Embed W(m, n) into W(|n|, 1) and check it.

    Args:
        source: The algebra W(m, n)
        cap: Dimension cap override for the target

    Returns:
        (target algebra, matrix of iota, verification report)
    """
    N = sum(source.n)
    target = build_witt(N, (1,) * N, source.spec, cap=cap)
    M = iota_matrix(source, target)
    injective = rank(M) == source.dim

    bracket_ok = True
    failure: Optional[str] = None
    pairs = 0
    for a in range(source.dim):
        lhs = M @ source.base.ad_basis(a)
        rhs = target.base.ad(M[:, a]) @ M
        pairs += source.dim
        if np.any(codes(lhs - rhs)):
            bracket_ok = False
            b = int(np.flatnonzero(np.any(codes(lhs - rhs), axis=0))[0])
            failure = f"[{source.base.label(a)}, {source.base.label(b)}]"
            break

    top_ok = all(
        target.base.support_degrees(M[:, int(i)]) == [target.top_degree]
        for i in source.component_indices(source.top_degree)
    )
    report = EmbeddingReport(
        source=source.descriptor,
        target=target.descriptor,
        injective=injective,
        bracket_preserving=bracket_ok,
        pairs_checked=pairs,
        top_to_top=top_ok,
        first_failure=failure,
    )
    return target, M, report


# Distinguished structures


@dataclass
class TopStructures:
    """x^(tau), the minimal ideal J_0 of O and, for W, the top component."""

    x_tau: FieldArray
    minimal_ideal: FieldArray
    top_component: Optional[SubalgebraBasis]
    consistent: bool


def top_and_min_structures(algebra: "WittAlgebra | DividedPowerAlgebra") -> TopStructures:
    """
    Return x^(tau) with J_0 = F x^(tau); for W also W_s, checked against J_0 . W.

    J_0 is verified to be an ideal killed by the maximal ideal, and to lie in the
    principal ideal of every basis monomial.
    """
    O = algebra.O if isinstance(algebra, WittAlgebra) else algebra
    x_tau = O.x_tau()
    j0 = stack([x_tau], O.field, O.dim)
    killed = all(
        not np.any(codes(O.multiply(row, x_tau))) for row in O.maximal_ideal()
    )
    minimal = all(
        rank(stack([*O.ideal(O.monomial(alpha)), x_tau], O.field, O.dim)) == rank(O.ideal(O.monomial(alpha)))
        for alpha in O.basis
    )
    consistent = killed and minimal
    top = None
    if isinstance(algebra, WittAlgebra):
        W = algebra
        top = W.component(W.top_degree)
        products = [W.module_action(x_tau, W.base.basis_vector(i)) for i in range(W.dim)]
        consistent = consistent and W.base.span(products) == top
    return TopStructures(x_tau=x_tau, minimal_ideal=j0, top_component=top, consistent=consistent)


def product_lemma_check(
    kind: Literal["omn", "w"], algebra: "WittAlgebra | DividedPowerAlgebra", elements: Sequence[FieldArray]
) -> bool:
    """
    Dependence of degree-one functions or degree-minus-one derivations via a product.

    For ``omn`` the product xi_1^{p-1} ... xi_k^{p-1} is formed in O(m, 1); for ``w``
    the operators d_1^{p-1} ... d_k^{p-1} are applied to x^(tau). Either vanishes
    exactly when the elements are dependent, which is compared with a rank
    computation.

    Returns:
        True when the elements are linearly dependent
    """
    if kind == "omn":
        O = algebra if isinstance(algebra, DividedPowerAlgebra) else algebra.O
        if any(k != 1 for k in O.n):
            raise PreconditionError("the product criterion needs O(m, 1)")
        for f in elements:
            if any(O.degree(O.basis[i]) != 1 for i in np.flatnonzero(codes(f))):
                raise PreconditionError("elements must be homogeneous of degree 1")
        dependent = truncated_power_vanishes(O, elements)
        independent = is_independent(list(elements), O.dim, O.field)
    else:
        if not isinstance(algebra, WittAlgebra) or not algebra.restricted:
            raise PreconditionError("the operator criterion needs W(m, 1)")
        W = algebra
        for v in elements:
            if W.base.support_degrees(v) not in ([], [-1]):
                raise PreconditionError("elements must lie in W_{-1}")
        value = W.O.x_tau()
        for v in elements:
            value = mat_pow(W.derivation_operator(v), W.p - 1) @ value
        dependent = not np.any(codes(value))
        independent = is_independent(list(elements), W.dim, W.base.field)
    if dependent == independent:
        raise InvariantViolation(
            f"product criterion says dependent={dependent}, rank says independent={independent}"
        )
    return dependent


def bracket_generation_by_bottom(W: WittAlgebra) -> dict[int, bool]:
    """For each degree i < s, whether W_i = [W_{-1}, W_{i+1}]."""
    result: dict[int, bool] = {}
    bottom = W.component(-1).rows
    for degree in range(-1, W.top_degree):
        upper = W.component(degree + 1).rows
        images = [W.base.bracket(d, u) for d in bottom for u in upper]
        result[degree] = W.base.span(images) == W.component(degree)
    return result
