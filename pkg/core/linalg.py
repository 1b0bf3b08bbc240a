"""Exact dense linear algebra over F_{p^k}.

Matrices are two-dimensional ``galois`` field arrays. Pivots are chosen leftmost
column first, topmost row first, so every routine here is deterministic.
"""

import itertools
from typing import Iterator, Optional, Sequence

import galois
import numpy as np

from config.logging_config import get_logger
from config.settings import settings
from core.field import (
    FieldArray,
    FieldSpec,
    Poly,
    codes,
    find_roots,
    from_digits,
    is_zero_poly,
    spec_of,
    to_digits,
    vector_from_json,
    vector_to_json,
)
from utils.exceptions import (
    DimensionMismatch,
    EigenvalueCrossCheckUnavailable,
    FieldTooLargeForEnumeration,
    InvariantViolation,
    PreconditionError,
)

logger = get_logger(__name__)


def stack(vectors: Sequence[FieldArray], field: type[FieldArray], width: int) -> FieldArray:
    """Rows ``vectors`` as one matrix; an empty sequence gives a 0 x width matrix."""
    if len(vectors) == 0:
        return field.Zeros((0, width))
    return field(np.stack([np.asarray(v.view(np.ndarray), dtype=np.int64) for v in vectors]))


def _require_square(u: FieldArray) -> int:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionMismatch(f"square matrix expected, got shape {u.shape}")
    return int(u.shape[0])


# Row reduction


def rref_rank(m: FieldArray) -> tuple[FieldArray, int]:
    """
    Reduced row echelon form and rank.

    Args:
        m: Matrix over the field

    Returns:
        (rref, rank); zero rows are kept at the bottom
    """
    if m.ndim != 2:
        raise DimensionMismatch(f"matrix expected, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[1] == 0:
        return m.copy(), 0
    reduced = m.row_reduce()
    rank = int(np.count_nonzero(np.any(codes(reduced) != 0, axis=1)))
    return reduced, rank


def pivot_columns(reduced: FieldArray) -> list[int]:
    """Pivot column of every non-zero row of a reduced matrix."""
    pivots = []
    for row in codes(reduced):
        nonzero = np.flatnonzero(row)
        if nonzero.size == 0:
            break
        pivots.append(int(nonzero[0]))
    return pivots


def row_basis(m: FieldArray) -> FieldArray:
    """Non-zero rows of the reduced form of ``m``."""
    reduced, rank = rref_rank(m)
    return reduced[:rank]


def rank(m: FieldArray) -> int:
    """Rank of ``m``."""
    return rref_rank(m)[1]


def first_dependence(vectors: FieldArray) -> Optional[tuple[int, FieldArray]]:
    """
    First linear dependence in a sequence of row vectors.

    Returns:
        (j, c) with v_j = sum_{i<j} c_i v_i for the least such j, or None when
        the rows are independent
    """
    if vectors.shape[0] == 0:
        return None
    reduced, _ = rref_rank(vectors.T)
    pivots = pivot_columns(reduced)
    for j in range(vectors.shape[0]):
        if j >= len(pivots) or pivots[j] != j:
            return j, reduced[:j, j].copy()
    return None


def solve(a: FieldArray, b: FieldArray) -> Optional[FieldArray]:
    """A solution of a @ x = b, or None when the system is inconsistent."""
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"{a.shape} system with right-hand side {b.shape}")
    field = type(a)
    augmented = field(np.hstack([codes(a).reshape(a.shape), codes(b).reshape(-1, 1)]))
    reduced, _ = rref_rank(augmented)
    pivots = pivot_columns(reduced)
    if pivots and pivots[-1] == a.shape[1]:
        return None
    x = field.Zeros(a.shape[1])
    for i, col in enumerate(pivots):
        x[col] = reduced[i, -1]
    return x


def null_space(m: FieldArray) -> FieldArray:
    """Rows spanning {v : m @ v = 0}."""
    field = type(m)
    cols = m.shape[1]
    reduced, _ = rref_rank(m)
    pivots = pivot_columns(reduced)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = field.Zeros((len(free), cols))
    for r, f in enumerate(free):
        basis[r, f] = 1
        for i, col in enumerate(pivots):
            basis[r, col] = -reduced[i, f]
    return basis


def mat_pow(u: FieldArray, exponent: int) -> FieldArray:
    """u**exponent by repeated squaring."""
    n = _require_square(u)
    result = type(u).Identity(n)
    base = u
    while exponent > 0:
        if exponent & 1:
            result = result @ base
        exponent >>= 1
        if exponent:
            base = base @ base
    return result


def _first_dependence_in_stream(
    produce: Iterator[FieldArray], limit: int
) -> tuple[int, FieldArray]:
    """Pull flattened vectors until the first dependence, checking at doubling sizes."""
    vectors: list[FieldArray] = []
    check_at = 2
    for vector in produce:
        vectors.append(vector)
        if len(vectors) >= check_at or len(vectors) >= limit:
            found = first_dependence(stack(vectors, type(vector), vector.size))
            if found is not None:
                return found
            check_at *= 2
        if len(vectors) >= limit:
            break
    raise InvariantViolation(f"no dependence among {len(vectors)} vectors")


def _monic_from_relation(field: type[FieldArray], j: int, coeffs: FieldArray) -> FieldArray:
    values = field.Zeros(j + 1)
    values[:j] = -coeffs
    values[j] = 1
    return values


# Minimal polynomials


def min_poly(u: FieldArray) -> Poly:
    """
    Monic minimal polynomial of a square matrix.

    The first dependence among I, u, u^2, ... read as vectors of matrix space.
    """
    n = _require_square(u)
    field = type(u)
    if n == 0:
        return galois.Poly(field([1]))

    def powers() -> Iterator[FieldArray]:
        current = field.Identity(n)
        while True:
            yield current.reshape(-1)
            current = current @ u

    j, coeffs = _first_dependence_in_stream(powers(), n + 1)
    return galois.Poly(_monic_from_relation(field, j, coeffs), order="asc")


def is_semisimple(u: FieldArray) -> bool:
    """True when the minimal polynomial of ``u`` is squarefree."""
    f = min_poly(u)
    if f.degree == 0:
        return True
    derivative = f.derivative()
    # f' = 0 means f is a polynomial in t^p, hence a p-th power
    if is_zero_poly(derivative):
        return False
    return galois.gcd(f, derivative).degree == 0


class PPolynomial:
    """
    A p-polynomial sum_j a_j t^{p^j}.

    Stored as the coefficient sequence (a_0, ..., a_n) with trailing zeros trimmed,
    so the p-degree n satisfies deg = p^n.
    """

    def __init__(self, coeffs: FieldArray) -> None:
        """Keep a trimmed copy of the coefficients."""
        self.field = type(coeffs)
        values = np.asarray(codes(coeffs)).reshape(-1)
        nonzero = np.flatnonzero(values)
        top = int(nonzero[-1]) + 1 if nonzero.size else 1
        self.coeffs = self.field(values[:top]) if values.size else self.field.Zeros(1)

    @property
    def p(self) -> int:
        """Characteristic."""
        return int(self.field.characteristic)

    @property
    def p_degree(self) -> int:
        """The n with degree p^n."""
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        """Ordinary degree."""
        if self.is_zero():
            return 0
        return self.p**self.p_degree

    def is_zero(self) -> bool:
        """True for the zero polynomial."""
        return not np.any(codes(self.coeffs))

    def shift(self, k: int) -> "PPolynomial":
        """The p-polynomial f(t^{p^k})."""
        values = self.field.Zeros(len(self.coeffs) + k)
        values[k:] = self.coeffs
        return PPolynomial(values)

    def frobenius_twist(self, k: int) -> "PPolynomial":
        """Coefficients raised to the p^k-th power."""
        return PPolynomial(self.coeffs ** (self.p**k))

    def power(self, k: int) -> "PPolynomial":
        """f^{p^k}, again a p-polynomial."""
        return self.frobenius_twist(k).shift(k)

    def evaluate_matrix(self, u: FieldArray) -> FieldArray:
        """sum_j a_j u^{p^j}."""
        n = _require_square(u)
        total = self.field.Zeros((n, n))
        current = u
        for j, a in enumerate(self.coeffs):
            if j > 0:
                current = mat_pow(current, self.p)
            if a != 0:
                total = total + a * current
        return total

    def evaluate(self, values: FieldArray) -> FieldArray:
        """sum_j a_j x^{p^j} at every entry of ``values``."""
        total = self.field.Zeros(values.shape)
        current = values
        for j, a in enumerate(self.coeffs):
            if j > 0:
                current = current**self.p
            total = total + a * current
        return total

    def to_poly(self) -> Poly:
        """Dense ordinary polynomial."""
        top = self.p**self.p_degree
        if top > settings.enumeration_bound:
            raise FieldTooLargeForEnumeration(f"degree {top} is too large to expand")
        values = self.field.Zeros(top + 1)
        for j, a in enumerate(self.coeffs):
            values[self.p**j] = a
        return galois.Poly(values, order="asc")

    def divide_by_t(self) -> Poly:
        """The g with f(t) = t g(t)."""
        if self.is_zero():
            raise PreconditionError("the zero p-polynomial has no cofactor")
        ascending = self.to_poly().coeffs[::-1]
        return galois.Poly(ascending[1:], order="asc")

    def to_json(self) -> list[list[int]]:
        """Coefficients as coefficient lists."""
        return vector_to_json(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PPolynomial):
            return NotImplemented
        return self.field is other.field and np.array_equal(
            codes(self.coeffs), codes(other.coeffs)
        )

    def __hash__(self) -> int:
        return hash((self.field.order, tuple(codes(self.coeffs).tolist())))

    def __repr__(self) -> str:
        terms = [f"{int(a)}*t^({self.p}^{j})" for j, a in enumerate(self.coeffs) if a != 0]
        return f"PPolynomial({' + '.join(terms) or '0'})"


def p_min_poly(u: FieldArray) -> PPolynomial:
    """
    Minimal p-polynomial of ``u``.

    The first linear dependence among u, u^p, u^{p^2}, ...; the result is monic.
    """
    n = _require_square(u)
    field = type(u)
    p = int(field.characteristic)
    if n == 0 or not np.any(codes(u)):
        return PPolynomial(field([1]))

    def frobenius_powers() -> Iterator[FieldArray]:
        current = u
        while True:
            yield current.reshape(-1)
            current = mat_pow(current, p)

    j, coeffs = _first_dependence_in_stream(frobenius_powers(), n * n + 1)
    return PPolynomial(_monic_from_relation(field, j, coeffs))


def semisimple_exponent(u: FieldArray) -> int:
    """Least k with u^{p^k} semisimple."""
    n = _require_square(u)
    p = int(type(u).characteristic)
    current = u
    k = 0
    while not is_semisimple(current):
        current = mat_pow(current, p)
        k += 1
        if p ** (k - 1) > max(n, 1):
            raise InvariantViolation("semisimple exponent did not stabilize")
    return k


def p_order(u: FieldArray, cross_check: bool = False) -> int:
    """
    The p-order of ``u``: F_p-dimension of the additive group of its eigenvalues.

    Computed as (p-degree of the minimal p-polynomial) - (semisimple exponent), which
    never needs the eigenvalues themselves.

    Args:
        u: Square matrix
        cross_check: Also count eigenvalues when they all lie in the working field

    Returns:
        The p-order
    """
    order = p_min_poly(u).p_degree - semisimple_exponent(u)
    if cross_check:
        try:
            counted = eigenvalue_p_order(u)
        except (EigenvalueCrossCheckUnavailable, FieldTooLargeForEnumeration) as e:
            logger.debug(f"p-order cross-check skipped: {e}")
        else:
            if counted != order:
                raise InvariantViolation(f"p-order {order} but eigenvalues span {counted}")
    return order


# Eigenvalues


def split_roots(f: Poly) -> list[tuple[FieldArray, int]]:
    """
    Roots of ``f`` in its field with multiplicities.

    Raises:
        EigenvalueCrossCheckUnavailable: If ``f`` does not split over the field
    """
    field = f.field
    remaining = f
    found: list[tuple[FieldArray, int]] = []
    for root in find_roots(f):
        linear = galois.Poly(field([1, int(-root)]))
        multiplicity = 0
        while remaining.degree > 0 and is_zero_poly(remaining % linear):
            remaining = remaining // linear
            multiplicity += 1
        found.append((root, multiplicity))
    if remaining.degree > 0:
        raise EigenvalueCrossCheckUnavailable(f"{f} does not split over {field.name}")
    return found


def eigenvalues(u: FieldArray) -> FieldArray:
    """Distinct eigenvalues of ``u``; all must lie in the working field."""
    _require_square(u)
    roots = [int(root) for root, _ in split_roots(min_poly(u))]
    return type(u)(roots) if roots else type(u).Zeros(0)


def additive_rank(values: FieldArray) -> int:
    """Dimension over F_p of the additive span of ``values``."""
    spec = spec_of(values)
    if values.size == 0:
        return 0
    digits = to_digits(codes(values).reshape(-1), spec.p, spec.k)
    return rank(galois.GF(spec.p)(digits))


def additive_span(values: FieldArray) -> FieldArray:
    """All F_p-linear combinations of ``values``, sorted by code."""
    spec = spec_of(values)
    field = type(values)
    if values.size == 0:
        return field.Zeros(1)
    digits = to_digits(codes(values).reshape(-1), spec.p, spec.k)
    basis = np.asarray(row_basis(galois.GF(spec.p)(digits)).view(np.ndarray), dtype=np.int64)
    r = basis.shape[0]
    if r == 0:
        return field.Zeros(1)
    if spec.p**r > settings.enumeration_bound:
        raise FieldTooLargeForEnumeration(f"additive span of size {spec.p}^{r}")
    combos = np.array(list(itertools.product(range(spec.p), repeat=r)), dtype=np.int64)
    span = (combos @ basis) % spec.p
    return field(np.sort(from_digits(span, spec.p)))


def eigenvalue_p_order(u: FieldArray) -> int:
    """p-order counted directly from the eigenvalues."""
    return additive_rank(eigenvalues(u))


def product_of_linear_factors(values: FieldArray) -> Poly:
    """prod_{x in values} (t - x)."""
    field = type(values)
    result = galois.Poly(field([1]))
    for value in values.reshape(-1):
        result = result * galois.Poly(field([1, int(-value)]))
    return result


def roots_form_subgroup(f: PPolynomial, spec: FieldSpec) -> bool:
    """Check that the roots of a p-polynomial in ``spec`` are closed under addition."""
    roots = find_roots(f.to_poly(), spec)
    members = {int(r) for r in roots}
    return all(int(a + b) in members for a in roots for b in roots)


# Serialization and constructors


def matrix_to_json(m: FieldArray) -> list[list[list[int]]]:
    """Row-major list of coefficient lists."""
    return [vector_to_json(row) for row in m]


def matrix_from_json(spec: FieldSpec, data: Sequence[Sequence[Sequence[int]]]) -> FieldArray:
    """Inverse of :func:`matrix_to_json`."""
    rows = [vector_from_json(spec, row) for row in data]
    width = len(data[0]) if data else 0
    return stack(rows, spec.gf, width)


def random_matrix(spec: FieldSpec, n: int, rng: np.random.Generator) -> FieldArray:
    """Uniform random n x n matrix."""
    return spec.gf(rng.integers(0, spec.order, size=(n, n)))


def companion(f: Poly) -> FieldArray:
    """Companion matrix of a monic polynomial."""
    field = f.field
    n = f.degree
    ascending = f.coeffs[::-1]
    m = field.Zeros((n, n))
    for i in range(1, n):
        m[i, i - 1] = 1
    for i in range(n):
        m[i, n - 1] = -ascending[i]
    return m


def jordan_block(spec: FieldSpec, size: int, eigenvalue: int = 0) -> FieldArray:
    """Jordan block with ones on the superdiagonal."""
    m = spec.gf.Identity(size) * spec.gf(eigenvalue)
    for i in range(size - 1):
        m[i, i + 1] = 1
    return m
