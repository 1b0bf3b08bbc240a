"""Restricted structure: p-powers, toral spans, dependence data and filtrations."""

from dataclasses import dataclass, field
from typing import Any, Optional
from weakref import WeakKeyDictionary

import galois
import numpy as np

from builders.witt_builder import WittAlgebra
from config.logging_config import get_logger
from core.field import FieldArray, codes, vector_to_json
from core.liealg import LieAlgebra, SubalgebraBasis, saturate
from core.linalg import (
    PPolynomial,
    first_dependence,
    mat_pow,
    p_order,
    pivot_columns,
    rref_rank,
    row_basis,
    semisimple_exponent,
    solve,
    stack,
)
from utils.exceptions import ElementBelowFiltrationZero, InvariantViolation, NotInAdImage, PreconditionError

logger = get_logger(__name__)

# algebra -> (selected basis indices, row indices, inverse of the square system)
_AD_SOLVERS: "WeakKeyDictionary[LieAlgebra, tuple[list[int], list[int], FieldArray]]" = WeakKeyDictionary()


def _ad_solver(L: LieAlgebra) -> tuple[list[int], list[int], FieldArray]:
    """
    Square system recovering z from the columns [z, b_j] for a few basis vectors b_j.

    Basis vectors are added until z -> ([z, b_j])_j is injective, which needs a
    trivial center.
    """
    cached = _AD_SOLVERS.get(L)
    if cached is not None:
        return cached
    chosen: list[int] = []
    blocks: list[FieldArray] = []
    current = L.field.Zeros((0, L.dim))
    for j in range(L.dim):
        block = -L.ad_basis(j)
        grown = row_basis(L.field(np.vstack([codes(current), codes(block)])))
        if grown.shape[0] > current.shape[0]:
            chosen.append(j)
            blocks.append(block)
            current = grown
        if current.shape[0] == L.dim:
            break
    if current.shape[0] < L.dim:
        raise PreconditionError(f"{L.name} has a non-trivial center; p-powers are not unique")
    system = L.field(np.vstack([codes(b) for b in blocks]))
    reduced, _ = rref_rank(system.T)
    rows = pivot_columns(reduced)
    inverse = np.linalg.inv(system[rows])
    _AD_SOLVERS[L] = (chosen, rows, inverse)
    return chosen, rows, inverse


def p_power(L: LieAlgebra, y: FieldArray, witt: Optional[WittAlgebra] = None) -> FieldArray:
    """
    The element y^[p] with ad(y^[p]) = (ad y)^p.

    Args:
        L: Algebra with trivial center
        y: Element
        witt: When given (W(m, 1) only), cross-check against D -> D^p on O(m, 1)

    Returns:
        y^[p]

    Raises:
        NotInAdImage: If (ad y)^p is not inner
    """
    if not np.any(codes(y)):
        return L.zero()
    chosen, rows, inverse = _ad_solver(L)
    power = mat_pow(L.ad(y), L.spec.p)
    rhs = L.field(np.concatenate([codes(power[:, j]) for j in chosen]))
    z = inverse @ rhs[rows]
    if np.any(codes(L.ad(z) - power)):
        raise NotInAdImage(f"(ad y)^{L.spec.p} is not inner for y = {L.describe(y)}")
    if witt is not None:
        if not witt.restricted:
            raise PreconditionError("operator cross-check needs W(m, 1)")
        direct = witt.derivation_from_operator(mat_pow(witt.derivation_operator(y), L.spec.p))
        if np.any(codes(direct - z)):
            raise InvariantViolation("p-power disagrees with the operator composition")
    return z


def p_power_sequence(L: LieAlgebra, y: FieldArray, count: int, witt: Optional[WittAlgebra] = None) -> list[FieldArray]:
    """y^[p^j] for j = 0 .. count - 1."""
    powers = [y]
    for _ in range(count - 1):
        powers.append(p_power(L, powers[-1], witt))
    return powers


@dataclass
class PPowerData:
    """y^[p^j] for j = 0 .. bound with the degree -1 components delta_j."""

    algebra: str
    y: FieldArray
    powers: list[FieldArray]
    deltas: Optional[list[FieldArray]] = None

    def to_json(self) -> dict[str, Any]:
        """Audit entry."""
        data: dict[str, Any] = {
            "algebra": self.algebra,
            "y": vector_to_json(self.y),
            "powers": [{"j": j, "coords": vector_to_json(v)} for j, v in enumerate(self.powers)],
        }
        if self.deltas is not None:
            data["deltas"] = [vector_to_json(d) for d in self.deltas]
        return data


def p_power_data(W: WittAlgebra, y: FieldArray, bound: Optional[int] = None) -> PPowerData:
    """p-power sequence of y in W(m, 1) up to j = m + semisimple exponent + 2."""
    if bound is None:
        bound = W.m + semisimple_exponent(W.base.ad(y)) + 2
    powers = p_power_sequence(W.base, y, bound + 1)
    deltas = [W.base.component(v, -1) for v in powers]
    return PPowerData(algebra=W.descriptor, y=y, powers=powers, deltas=deltas)


def toral_span(L: LieAlgebra, y: FieldArray, j0: Optional[int] = None) -> SubalgebraBasis:
    """
    Span of y^[p^j], j >= j0, which stabilizes at the first dependence.

    Args:
        L: Algebra with trivial center
        y: Element
        j0: First index; defaults to the semisimple exponent of ad y

    Returns:
        The toral span; its dimension equals the p-order of ad y
    """
    ad_y = L.ad(y)
    start = semisimple_exponent(ad_y) if j0 is None else j0
    if start < semisimple_exponent(ad_y):
        raise PreconditionError("j0 is below the semisimple exponent of ad y")
    current = y
    for _ in range(start):
        current = p_power(L, current)
    vectors = [current]
    while True:
        found = first_dependence(stack(vectors, L.field, L.dim))
        if found is not None:
            break
        vectors.append(p_power(L, vectors[-1]))
    T = L.span(vectors)
    expected = p_order(ad_y)
    if T.dim != expected:
        raise InvariantViolation(f"toral span of dimension {T.dim}, p-order {expected}")
    return T


# Dependence data in W(m, 1)


@dataclass
class DependenceData:
    """
    k with delta_0..delta_k first dependent, the relation, f, g and h.

    f(t) = sum alpha_j t^(p^j) = t g(t); f(y) lies in W_{>=0} with degree zero part h.
    """

    k: int
    relation: FieldArray
    f: PPolynomial
    g: galois.Poly
    f_of_y: FieldArray
    h: FieldArray
    powers: PPowerData

    def to_json(self) -> dict[str, Any]:
        """Audit entry."""
        data = self.powers.to_json()
        data.update(
            {
                "k": self.k,
                "relation": vector_to_json(self.relation),
                "f": self.f.to_json(),
                "g": vector_to_json(self.g.coeffs[::-1]),
                "h": vector_to_json(self.h),
            }
        )
        return data


def dependence_data(W: WittAlgebra, y: FieldArray) -> DependenceData:
    """
    Dependence index and polynomials attached to y in W(m, 1).

    Raises:
        PreconditionError: If W is not of the form W(m, 1)
        InvariantViolation: If k > m or f(y) leaves W_{>=0}
    """
    if not W.restricted:
        raise PreconditionError("dependence data is defined on W(m, 1)")
    powers = p_power_sequence(W.base, y, W.m + 1)
    deltas = [W.base.component(v, -1) for v in powers]
    found = first_dependence(stack(deltas, W.base.field, W.dim))
    if found is None:
        raise InvariantViolation(f"{W.m + 1} vectors in W_-1 are independent")
    k, coeffs = found
    if k > W.m:
        raise InvariantViolation(f"dependence index {k} exceeds m = {W.m}")
    relation = W.base.field.Zeros(k + 1)
    relation[:k] = -coeffs
    relation[k] = 1
    f = PPolynomial(relation)
    g = f.divide_by_t()
    f_of_y = W.base.zero()
    for j in range(k + 1):
        f_of_y = f_of_y + relation[j] * powers[j]
    if W.base.support_degrees(f_of_y) and W.base.support_degrees(f_of_y)[0] < 0:
        raise InvariantViolation("f(y) has a component of degree -1")
    data = PPowerData(algebra=W.descriptor, y=y, powers=powers, deltas=deltas)
    return DependenceData(
        k=k, relation=relation, f=f, g=g, f_of_y=f_of_y, h=W.base.component(f_of_y, 0), powers=data
    )


def apply_polynomial(L: LieAlgebra, poly: galois.Poly, y: FieldArray, x: FieldArray) -> FieldArray:
    """poly(ad y) applied to x, by repeated brackets."""
    ascending = poly.coeffs[::-1]
    ad_y = L.ad(y)
    result = L.zero()
    current = x
    for i, c in enumerate(ascending):
        if i > 0:
            current = ad_y @ current
        if c != 0:
            result = result + c * current
    return result


@dataclass
class DeltaResult:
    """delta = g(ad y)(x) with its degree and a witness b with b . delta = x."""

    delta: FieldArray
    degree: Optional[int]
    expected_degree: int
    witness: Optional[FieldArray]
    data: DependenceData

    @property
    def degree_ok(self) -> bool:
        """Lowest degree of delta is s - k(p - 1)."""
        return self.degree == self.expected_degree

    @property
    def in_module(self) -> bool:
        """x lies in B . delta."""
        return self.witness is not None


def delta_element(W: WittAlgebra, x: FieldArray, y: FieldArray, data: Optional[DependenceData] = None) -> DeltaResult:
    """
    delta = g(ad y)(x) for x in the top component.

    Args:
        W: W(m, 1)
        x: Non-zero element of W_s
        y: Element of W
        data: Precomputed dependence data of y

    Returns:
        delta together with its lowest degree and a witness b in O(m, 1)
    """
    if not np.any(codes(x)) or W.base.support_degrees(x) != [W.top_degree]:
        raise PreconditionError("x must be a non-zero element of the top component")
    data = data or dependence_data(W, y)
    delta = apply_polynomial(W.base, data.g, y, x)
    witness = solve(W.module_matrix(delta), x) if np.any(codes(delta)) else None
    return DeltaResult(
        delta=delta,
        degree=W.lowest_degree(delta),
        expected_degree=W.top_degree - data.k * (W.p - 1),
        witness=witness,
        data=data,
    )


def module_span(W: WittAlgebra, delta: FieldArray) -> SubalgebraBasis:
    """B . delta as a subspace of W."""
    return W.base.span(list(W.module_matrix(delta).T))


def y_module(L: LieAlgebra, x: FieldArray, y: FieldArray) -> SubalgebraBasis:
    """The F[ad y]-module generated by x."""
    return SubalgebraBasis(L, saturate(L, stack([x], L.field, L.dim), L.ad(y)))


# p-ary digits


def p_ary(a: int, p: int) -> tuple[list[int], int]:
    """Base-p digits of a (least significant first) and their sum |a|_p."""
    if a < 0:
        raise PreconditionError("p-ary length of a negative number")
    digits = []
    rest = a
    while rest:
        rest, d = divmod(rest, p)
        digits.append(d)
    return digits, sum(digits)


# Filtrations


@dataclass
class OrdComparison:
    """p-orders of ad h and ad gr(h)."""

    nu: Optional[int]
    ord_h: int
    ord_gr: int

    @property
    def equal(self) -> bool:
        """ord(h) = ord(gr h)."""
        return self.ord_h == self.ord_gr


@dataclass
class FiltrationView:
    """The descending filtration L_(k) = sum_{j >= k} L_j of a graded algebra."""

    algebra: LieAlgebra
    _levels: dict[int, SubalgebraBasis] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.algebra.grading is None:
            raise PreconditionError(f"{self.algebra.name} carries no grading")

    def level(self, k: int) -> SubalgebraBasis:
        """L_(k)."""
        if k not in self._levels:
            self._levels[k] = self.algebra.homogeneous_subspace(d for d in self.algebra.degrees if d >= k)
        return self._levels[k]

    def nu(self, x: FieldArray) -> Optional[int]:
        """Largest k with x in L_(k); None for x = 0."""
        support = self.algebra.support_degrees(x)
        return support[0] if support else None

    def gr(self, x: FieldArray) -> FieldArray:
        """Leading homogeneous component of x."""
        k = self.nu(x)
        if k is None:
            return self.algebra.zero()
        return self.algebra.component(x, k)


def filtration_view(L: LieAlgebra) -> FiltrationView:
    """Filtration induced by the grading of L."""
    return FiltrationView(L)


def ord_compare(view: FiltrationView, h: FieldArray) -> OrdComparison:
    """
    Compare ord(h) with ord(gr h).

    Raises:
        ElementBelowFiltrationZero: If nu(h) < 0; the comparison is attached and
            equality is not asserted
        InvariantViolation: If nu(h) >= 0 and the orders differ
    """
    L = view.algebra
    comparison = OrdComparison(nu=view.nu(h), ord_h=p_order(L.ad(h)), ord_gr=p_order(L.ad(view.gr(h))))
    if comparison.nu is not None and comparison.nu < 0:
        raise ElementBelowFiltrationZero(
            f"nu(h) = {comparison.nu}: ord(h) = {comparison.ord_h}, ord(gr h) = {comparison.ord_gr}",
            comparison,
        )
    if not comparison.equal:
        raise InvariantViolation(f"ord(h) = {comparison.ord_h} but ord(gr h) = {comparison.ord_gr}")
    return comparison
