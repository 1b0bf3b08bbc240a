"""Structure-constant Lie algebras and their subspace calculus."""

from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np

from config.logging_config import get_logger
from core.field import FieldArray, FieldSpec, codes, embed, random_elements, sum_by_index
from core.linalg import min_poly, null_space, pivot_columns, rank, row_basis, split_roots, stack
from schemas.report import CheckResult, ValidationReport
from utils.exceptions import (
    DimensionMismatch,
    EigenvalueCrossCheckUnavailable,
    NotDiagonalizable,
    PreconditionError,
    SpecMismatch,
)

logger = get_logger(__name__)

Constants = Mapping[tuple[int, int], Mapping[int, Any]]


def _code(spec: FieldSpec, value: Any) -> int:
    """Integers are read modulo p; field elements by their code."""
    if isinstance(value, (int, np.integer)):
        return int(value) % spec.p
    return int(value)


class LieAlgebra:
    """
    A finite-dimensional Lie algebra given by structure constants.

    ``raw`` keeps the constants exactly as supplied. Missing mirror entries are
    filled in by antisymmetry when the sparse tensor is built, so a supplied pair
    (i, j) together with (j, i) can be checked by :func:`validate`.
    """

    def __init__(
        self,
        spec: FieldSpec,
        dim: int,
        constants: Constants,
        grading: Optional[Sequence[int]] = None,
        labels: Optional[Sequence[str]] = None,
        name: str = "L",
    ) -> None:
        """Normalize the constants and build the sparse tensor."""
        self.spec = spec
        self.dim = dim
        self.name = name
        self.labels = list(labels) if labels is not None else None
        self.grading = np.asarray(grading, dtype=np.int64) if grading is not None else None
        self.blocks: list[tuple[int, int]] = [(0, dim)]
        # basis indices in the algebra this one was a quotient of
        self.parent_indices: Optional[list[int]] = None
        if self.labels is not None and len(self.labels) != dim:
            raise DimensionMismatch(f"{len(self.labels)} labels for dimension {dim}")
        if self.grading is not None and len(self.grading) != dim:
            raise DimensionMismatch(f"{len(self.grading)} degrees for dimension {dim}")

        field = spec.gf
        self.raw: dict[tuple[int, int], dict[int, int]] = {}
        for (i, j), terms in sorted(constants.items()):
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatch(f"pair ({i}, {j}) outside dimension {dim}")
            clean = {int(k): _code(spec, c) for k, c in sorted(terms.items())}
            clean = {k: c for k, c in clean.items() if c != 0}
            if clean:
                self.raw[(i, j)] = clean

        full: dict[tuple[int, int], dict[int, int]] = dict(self.raw)
        for (i, j), terms in self.raw.items():
            if (j, i) not in full and i != j:
                full[(j, i)] = {k: int(-field(c)) for k, c in terms.items()}
        left, right, target, coeff = [], [], [], []
        for (i, j) in sorted(full):
            for k, c in full[(i, j)].items():
                left.append(i)
                right.append(j)
                target.append(k)
                coeff.append(c)
        self._left = np.asarray(left, dtype=np.int64)
        self._right = np.asarray(right, dtype=np.int64)
        self._target = np.asarray(target, dtype=np.int64)
        self._coeff = field(np.asarray(coeff, dtype=np.int64))

    # Elements

    @property
    def field(self) -> type[FieldArray]:
        """Field class of coordinate vectors."""
        return self.spec.gf

    def zero(self) -> FieldArray:
        """The zero vector."""
        return self.field.Zeros(self.dim)

    def basis_vector(self, i: int) -> FieldArray:
        """The i-th basis vector."""
        v = self.zero()
        v[i] = 1
        return v

    def vector(self, terms: Mapping[int, Any]) -> FieldArray:
        """Vector from a sparse {index: coefficient} map."""
        v = self.zero()
        for i, c in terms.items():
            v[i] = self.field(_code(self.spec, c))
        return v

    def random_vector(self, rng: np.random.Generator) -> FieldArray:
        """Uniform random element."""
        return random_elements(self.spec, self.dim, rng)

    def label(self, i: int) -> str:
        """Name of the i-th basis vector."""
        return self.labels[i] if self.labels is not None else f"b{i}"

    def describe(self, v: FieldArray) -> str:
        """Readable linear combination of basis labels."""
        parts = [f"{int(c)}*{self.label(i)}" for i, c in enumerate(v) if c != 0]
        return " + ".join(parts) or "0"

    def _check(self, v: FieldArray) -> None:
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"vector of shape {v.shape} in an algebra of dimension {self.dim}")
        if type(v) is not self.field:
            raise SpecMismatch(f"vector over {type(v).name}, algebra over {self.spec.label}")

    # Bracket

    def bracket(self, x: FieldArray, y: FieldArray) -> FieldArray:
        """[x, y] by bilinear extension of the constants."""
        self._check(x)
        self._check(y)
        values = x[self._left] * y[self._right] * self._coeff
        return sum_by_index(values, self._target, self.dim)

    def ad(self, x: FieldArray) -> FieldArray:
        """Matrix of ad x acting on column vectors."""
        self._check(x)
        values = x[self._left] * self._coeff
        flat = sum_by_index(values, self._target * self.dim + self._right, self.dim * self.dim)
        return flat.reshape(self.dim, self.dim)

    def ad_basis(self, i: int) -> FieldArray:
        """ad of the i-th basis vector."""
        return self.ad(self.basis_vector(i))

    def structure_entries(self) -> Iterable[tuple[int, int, int, int]]:
        """(i, j, k, code) for every stored ordered pair."""
        for e in range(len(self._left)):
            yield int(self._left[e]), int(self._right[e]), int(self._target[e]), int(self._coeff[e])

    def upper_constants(self) -> dict[tuple[int, int], dict[int, int]]:
        """Constants of the pairs i < j as {(i, j): {k: code}}."""
        table: dict[tuple[int, int], dict[int, int]] = {}
        for i, j, k, c in self.structure_entries():
            if i < j:
                table.setdefault((i, j), {})[k] = c
        return table

    def over(self, spec: FieldSpec) -> "LieAlgebra":
        """The same algebra with scalars extended to ``spec``."""
        if spec == self.spec:
            return self
        constants = {
            key: {k: embed(self.spec.gf(c), spec) for k, c in terms.items()}
            for key, terms in self.raw.items()
        }
        lifted = LieAlgebra(
            spec,
            self.dim,
            constants,
            grading=self.grading,
            labels=self.labels,
            name=self.name,
        )
        lifted.blocks = list(self.blocks)
        lifted.parent_indices = self.parent_indices
        return lifted

    def lift_vector(self, v: FieldArray) -> FieldArray:
        """Embed a vector from a subfield of the working field."""
        return embed(v, self.spec)

    # Grading

    @property
    def degrees(self) -> list[int]:
        """Distinct degrees in increasing order."""
        if self.grading is None:
            return [0]
        return sorted(set(int(d) for d in self.grading))

    def component_indices(self, degree: int) -> np.ndarray:
        """Basis indices of the homogeneous component of ``degree``."""
        if self.grading is None:
            raise PreconditionError(f"{self.name} carries no grading")
        return np.flatnonzero(self.grading == degree)

    def component(self, v: FieldArray, degree: int) -> FieldArray:
        """Homogeneous component of ``v`` in ``degree``."""
        part = self.zero()
        idx = self.component_indices(degree)
        part[idx] = v[idx]
        return part

    def support_degrees(self, v: FieldArray) -> list[int]:
        """Degrees in which ``v`` has a non-zero component."""
        if self.grading is None:
            raise PreconditionError(f"{self.name} carries no grading")
        return sorted(set(int(d) for d in self.grading[codes(v) != 0]))

    def homogeneous_subspace(self, degrees: Iterable[int]) -> "SubalgebraBasis":
        """Span of the basis vectors with degree in ``degrees``."""
        wanted = set(degrees)
        rows = [self.basis_vector(i) for i in range(self.dim) if int(self.grading[i]) in wanted]
        return SubalgebraBasis(self, stack(rows, self.field, self.dim))

    # Subspaces

    def span(self, vectors: Sequence[FieldArray]) -> "SubalgebraBasis":
        """Subspace spanned by ``vectors``."""
        return SubalgebraBasis(self, stack(list(vectors), self.field, self.dim))

    def whole(self) -> "SubalgebraBasis":
        """The algebra as a subspace of itself."""
        return SubalgebraBasis(self, self.field.Identity(self.dim))

    def projection(self, v: FieldArray, block: int) -> FieldArray:
        """Coordinates of ``v`` in a direct summand."""
        offset, size = self.blocks[block]
        return v[offset : offset + size].copy()

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name}, dim={self.dim}, {self.spec.label})"


class SubalgebraBasis:
    """A subspace stored by the non-zero rows of its reduced echelon form."""

    def __init__(self, parent: LieAlgebra, rows: FieldArray, steps: Optional[int] = None) -> None:
        """Reduce ``rows``; ``steps`` records how many rounds a construction took."""
        if rows.ndim != 2 or rows.shape[1] != parent.dim:
            raise DimensionMismatch(f"rows of shape {rows.shape} for dimension {parent.dim}")
        self.parent = parent
        self.rows = row_basis(rows)
        self.pivots = pivot_columns(self.rows)
        self.steps = steps

    @property
    def dim(self) -> int:
        """Dimension of the subspace."""
        return int(self.rows.shape[0])

    def coordinates(self, v: FieldArray) -> FieldArray:
        """Coordinates of a member in the row basis."""
        return v[self.pivots]

    def residual(self, v: FieldArray) -> FieldArray:
        """v minus its reduction against the rows; zero exactly for members."""
        if self.dim == 0:
            return v.copy()
        return v - self.coordinates(v) @ self.rows

    def contains(self, v: FieldArray) -> bool:
        """Membership test."""
        return not np.any(codes(self.residual(v)))

    def contains_all(self, vectors: FieldArray) -> bool:
        """Membership of every row of ``vectors``."""
        if vectors.shape[0] == 0:
            return True
        if self.dim == 0:
            return not np.any(codes(vectors))
        residual = vectors - vectors[:, self.pivots] @ self.rows
        return not np.any(codes(residual))

    def includes(self, other: "SubalgebraBasis") -> bool:
        """True when ``other`` is a subspace of this one."""
        return self.contains_all(other.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubalgebraBasis):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(codes(self.rows), codes(other.rows))

    def __hash__(self) -> int:
        return hash((self.dim, codes(self.rows).tobytes()))

    def plus(self, other: "SubalgebraBasis") -> "SubalgebraBasis":
        """Sum of two subspaces."""
        return SubalgebraBasis(self.parent, _vstack(self.parent, self.rows, other.rows))

    def is_closed(self) -> bool:
        """Closure under the bracket of the parent."""
        return self.contains_all(brackets_of_spans(self.parent, self.rows, self.rows))

    def __repr__(self) -> str:
        return f"SubalgebraBasis(dim={self.dim} in {self.parent.name})"


def _vstack(L: LieAlgebra, *blocks: FieldArray) -> FieldArray:
    parts = [codes(b).reshape(-1, L.dim) for b in blocks]
    return L.field(np.vstack(parts)) if parts else L.field.Zeros((0, L.dim))


def brackets_of_spans(L: LieAlgebra, xs: FieldArray, ys: FieldArray) -> FieldArray:
    """All brackets [x_a, y_b] of two row families, one row per pair."""
    images = [ys @ L.ad(x).T for x in xs]
    return _vstack(L, *images) if images else L.field.Zeros((0, L.dim))


def bracket(L: LieAlgebra, x: FieldArray, y: FieldArray) -> FieldArray:
    """[x, y] in ``L``."""
    return L.bracket(x, y)


def saturate(L: LieAlgebra, rows: FieldArray, operator: FieldArray) -> FieldArray:
    """
    Smallest subspace containing ``rows`` and stable under ``operator``.

    Krylov doubling: K_{2m} = K_m + K_m u^m, and K_{2m} = K_m forces stability.
    """
    current = row_basis(rows)
    if current.shape[0] == 0:
        return current
    power = operator.T
    while True:
        grown = row_basis(_vstack(L, current, current @ power))
        if grown.shape[0] == current.shape[0]:
            return current
        current = grown
        power = power @ power


def generated_subalgebra(L: LieAlgebra, x: FieldArray, y: FieldArray) -> SubalgebraBasis:
    """
    The subalgebra generated by ``x`` and ``y``, built from ad y-modules.

    X_1 is the F[ad y]-module generated by x and X_{k+1} the one generated by
    [x, X_k]. The partial sums X^{(k)} grow until stable, and F y + X^{(k)} is the
    answer.

    Args:
        L: Ambient algebra
        x: First generator
        y: Second generator

    Returns:
        Basis of the generated subalgebra; ``steps`` is the number of module rounds
    """
    ad_x = L.ad(x)
    ad_y = L.ad(y)
    layer = saturate(L, _vstack(L, x), ad_y)
    total = layer
    steps = 1
    while layer.shape[0] > 0:
        layer = saturate(L, layer @ ad_x.T, ad_y)
        grown = row_basis(_vstack(L, total, layer))
        if grown.shape[0] == total.shape[0]:
            break
        total = grown
        steps += 1
        if steps > L.dim + 1:
            raise PreconditionError("module chain failed to stabilize")
    return SubalgebraBasis(L, _vstack(L, y, total), steps=steps)


def naive_closure(L: LieAlgebra, vectors: Sequence[FieldArray]) -> SubalgebraBasis:
    """Least subalgebra containing ``vectors`` by iterated span and bracket."""
    current = row_basis(stack(list(vectors), L.field, L.dim))
    rounds = 0
    while True:
        grown = row_basis(_vstack(L, current, brackets_of_spans(L, current, current)))
        rounds += 1
        if grown.shape[0] == current.shape[0]:
            return SubalgebraBasis(L, current, steps=rounds)
        current = grown


def derived_series_last(L: LieAlgebra, S: SubalgebraBasis) -> SubalgebraBasis:
    """Last term of the derived series of the subalgebra ``S``."""
    current = S.rows
    while True:
        derived = row_basis(brackets_of_spans(L, current, current))
        if derived.shape[0] == current.shape[0]:
            return SubalgebraBasis(L, derived)
        current = derived


def derived_algebra(L: LieAlgebra, S: SubalgebraBasis) -> SubalgebraBasis:
    """[S, S]."""
    return SubalgebraBasis(L, brackets_of_spans(L, S.rows, S.rows))


def centralizer(L: LieAlgebra, vectors: Sequence[FieldArray]) -> SubalgebraBasis:
    """
    Elements commuting with every one of ``vectors``.

    The kernels of ad v are intersected one at a time and the loop stops early once
    the intersection vanishes.
    """
    kernel = L.field.Identity(L.dim)
    for v in vectors:
        if kernel.shape[0] == 0:
            break
        image = L.ad(v) @ kernel.T
        combos = null_space(image)
        kernel = combos @ kernel if combos.shape[0] else L.field.Zeros((0, L.dim))
    return SubalgebraBasis(L, kernel)


def center(L: LieAlgebra) -> SubalgebraBasis:
    """z(L)."""
    return centralizer(L, [L.basis_vector(j) for j in range(L.dim)])


def quotient(L: LieAlgebra, ideal: SubalgebraBasis, name: Optional[str] = None) -> LieAlgebra:
    """
    L / ideal on the complement basis of non-pivot coordinates.

    The grading survives when every row of the ideal is homogeneous.
    """
    if not ideal.contains_all(brackets_of_spans(L, L.field.Identity(L.dim), ideal.rows)):
        raise PreconditionError("quotient by a subspace that is not an ideal")
    pivots = set(ideal.pivots)
    keep = [i for i in range(L.dim) if i not in pivots]
    position = {old: new for new, old in enumerate(keep)}
    constants: dict[tuple[int, int], dict[int, Any]] = {}
    for a in range(len(keep)):
        for b in range(a + 1, len(keep)):
            image = ideal.residual(L.bracket(L.basis_vector(keep[a]), L.basis_vector(keep[b])))
            terms = {position[k]: image[k] for k in keep if image[k] != 0}
            if terms:
                constants[(a, b)] = terms
    grading = None
    if L.grading is not None and all(
        len(L.support_degrees(row)) <= 1 for row in ideal.rows
    ):
        grading = [int(L.grading[i]) for i in keep]
    labels = [L.label(i) for i in keep] if L.labels is not None else None
    q = LieAlgebra(L.spec, len(keep), constants, grading, labels, name or f"{L.name}/I")
    q.parent_indices = keep
    return q


def center_and_quotient(L: LieAlgebra) -> tuple[SubalgebraBasis, LieAlgebra]:
    """The center and the quotient by it."""
    z = center(L)
    q = quotient(L, z, name=f"{L.name}/z")
    report = validate(q)
    if not report.passed:
        raise PreconditionError(f"quotient failed validation: {report.first_failure()}")
    return z, q


def direct_sum(A: LieAlgebra, B: LieAlgebra, name: Optional[str] = None) -> LieAlgebra:
    """A + B with commuting blocks; ``blocks`` records the summands."""
    if A.spec != B.spec:
        raise SpecMismatch(f"{A.spec.label} and {B.spec.label}")
    shift = A.dim
    constants: dict[tuple[int, int], dict[int, Any]] = {
        key: {k: A.field(c) for k, c in terms.items()} for key, terms in A.raw.items()
    }
    for (i, j), terms in B.raw.items():
        constants[(i + shift, j + shift)] = {k + shift: B.field(c) for k, c in terms.items()}
    grading = None
    if A.grading is not None and B.grading is not None:
        grading = list(A.grading) + list(B.grading)
    labels = None
    if A.labels is not None or B.labels is not None:
        labels = [f"{A.label(i)}|1" for i in range(A.dim)] + [
            f"{B.label(i)}|2" for i in range(B.dim)
        ]
    total = LieAlgebra(
        A.spec, A.dim + B.dim, constants, grading, labels, name or f"{A.name}+{B.name}"
    )
    total.blocks = [(o, d) for o, d in A.blocks] + [(o + shift, d) for o, d in B.blocks]
    return total


class WeightDecomposition:
    """Simultaneous eigenspaces of a commuting set acting on a subspace."""

    def __init__(
        self,
        torus: FieldArray,
        weights: list[tuple[int, ...]],
        spaces: list[SubalgebraBasis],
    ) -> None:
        """Weights are tuples of field codes, one value per torus element."""
        self.torus = torus
        self.weights = weights
        self.spaces = spaces

    def space(self, weight: tuple[int, ...]) -> SubalgebraBasis:
        """Weight space of ``weight``."""
        return self.spaces[self.weights.index(tuple(weight))]

    def dimensions(self) -> dict[tuple[int, ...], int]:
        """weight -> dimension."""
        return {w: s.dim for w, s in zip(self.weights, self.spaces)}

    def weight_of(self, v: FieldArray) -> Optional[tuple[int, ...]]:
        """Weight of a weight vector, None otherwise."""
        for w, s in zip(self.weights, self.spaces):
            if np.any(codes(v)) and s.contains(v):
                return w
        return None

    @property
    def total_dim(self) -> int:
        """Sum of the weight space dimensions."""
        return sum(s.dim for s in self.spaces)


def _restricted_matrix(block: FieldArray, operator: FieldArray) -> FieldArray:
    """Matrix M with (c @ block) mapped to (c @ M) @ block; block rows are reduced."""
    images = block @ operator.T
    pivots = pivot_columns(block)
    coords = images[:, pivots]
    if np.any(codes(images - coords @ block)):
        raise NotDiagonalizable("torus element does not preserve the subspace")
    return coords


def weight_decomposition(
    L: LieAlgebra, torus: Sequence[FieldArray], space: Optional[SubalgebraBasis] = None
) -> WeightDecomposition:
    """
    Split ``space`` into simultaneous eigenspaces of ad t, t in ``torus``.

    Raises:
        NotDiagonalizable: If some ad t has eigenvalues outside the working field,
            is not semisimple, or the torus does not commute on the space
    """
    space = space if space is not None else L.whole()
    torus_rows = stack(list(torus), L.field, L.dim)
    pieces: list[tuple[tuple[int, ...], FieldArray]] = [((), space.rows)]
    for t in torus_rows:
        operator = L.ad(t)
        refined: list[tuple[tuple[int, ...], FieldArray]] = []
        for weight, block in pieces:
            if block.shape[0] == 0:
                continue
            m = _restricted_matrix(block, operator)
            try:
                roots = split_roots(min_poly(m))
            except EigenvalueCrossCheckUnavailable as e:
                raise NotDiagonalizable(str(e)) from e
            found = 0
            for value, _ in sorted(roots, key=lambda r: int(r[0])):
                shifted = m.T - value * L.field.Identity(m.shape[0])
                combos = null_space(shifted)
                if combos.shape[0] == 0:
                    continue
                found += combos.shape[0]
                refined.append((weight + (int(value),), row_basis(combos @ block)))
            if found != block.shape[0]:
                raise NotDiagonalizable(f"ad {L.describe(t)} is not diagonalizable")
        pieces = refined
    pieces.sort(key=lambda item: item[0])
    weights = [w for w, _ in pieces]
    if len(set(weights)) != len(weights):
        raise NotDiagonalizable("repeated weight")
    return WeightDecomposition(
        torus_rows, weights, [SubalgebraBasis(L, rows) for _, rows in pieces]
    )


# Validation


def _join(keys_a: np.ndarray, keys_b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All index pairs (a, b) with keys_a[a] == keys_b[b]."""
    order = np.argsort(keys_b, kind="stable")
    sorted_b = keys_b[order]
    start = np.searchsorted(sorted_b, keys_a, side="left")
    stop = np.searchsorted(sorted_b, keys_a, side="right")
    counts = stop - start
    ia = np.repeat(np.arange(len(keys_a)), counts)
    offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    ib = order[np.repeat(start, counts) + offsets]
    return ia, ib


def _check_antisymmetry(L: LieAlgebra) -> CheckResult:
    field = L.field
    for (i, j), terms in L.raw.items():
        if i == j:
            return CheckResult(
                name="antisymmetry", passed=False, detail=f"[{L.label(i)}, {L.label(i)}] != 0"
            )
        mirror = L.raw.get((j, i))
        if mirror is None:
            continue
        negated = {k: int(-field(c)) for k, c in terms.items()}
        if mirror != negated:
            return CheckResult(
                name="antisymmetry",
                passed=False,
                detail=f"c[{i}][{j}] != -c[{j}][{i}]",
            )
    return CheckResult(name="antisymmetry", passed=True)


def _check_jacobi(L: LieAlgebra) -> CheckResult:
    """
    Jacobi on all triples i < j < k, read as ad b_i being a derivation.

    For fixed i the three terms D[b_j,b_k], [D b_j, b_k], [b_j, D b_k] are sparse joins
    of the structure-constant lists.
    """
    n = L.dim
    left, right, target, coeff = L._left, L._right, L._target, L._coeff
    for i in range(n):
        own = np.flatnonzero(left == i)
        if own.size == 0:
            continue
        f_right, f_target, f_coeff = right[own], target[own], coeff[own]
        keys, values = [], []

        # D [b_j, b_k]
        upper = np.flatnonzero((left > i) & (right > left))
        ea, fb = _join(target[upper], f_right)
        e = upper[ea]
        keys.append((left[e] * n + right[e]) * n + f_target[fb])
        values.append(coeff[e] * f_coeff[fb])

        # [D b_j, b_k]
        sel = np.flatnonzero(f_right > i)
        fa, eb = _join(f_target[sel], left)
        f_idx = sel[fa]
        keep = right[eb] > f_right[f_idx]
        f_idx, eb = f_idx[keep], eb[keep]
        keys.append((f_right[f_idx] * n + right[eb]) * n + target[eb])
        values.append(-(f_coeff[f_idx] * coeff[eb]))

        # [b_j, D b_k]
        fa, eb = _join(f_target[sel], right)
        f_idx = sel[fa]
        keep = (left[eb] > i) & (left[eb] < f_right[f_idx])
        f_idx, eb = f_idx[keep], eb[keep]
        keys.append((left[eb] * n + f_right[f_idx]) * n + target[eb])
        values.append(-(coeff[eb] * f_coeff[f_idx]))

        all_keys = np.concatenate(keys)
        if all_keys.size == 0:
            continue
        all_values = L.field(np.concatenate([codes(v).reshape(-1) for v in values]))
        unique, inverse = np.unique(all_keys, return_inverse=True)
        totals = sum_by_index(all_values, inverse, len(unique))
        bad = np.flatnonzero(codes(totals) != 0)
        if bad.size:
            key = int(unique[bad[0]])
            j, k = divmod(key // n, n)
            return CheckResult(
                name="jacobi",
                passed=False,
                detail=f"triple ({L.label(i)}, {L.label(j)}, {L.label(k)})",
            )
    return CheckResult(name="jacobi", passed=True)


def _check_grading(L: LieAlgebra) -> CheckResult:
    if L.grading is None:
        return CheckResult(name="grading", passed=True, detail="no grading")
    g = L.grading
    bad = np.flatnonzero(g[L._target] != g[L._left] + g[L._right])
    if bad.size:
        e = bad[0]
        i, j, k = int(L._left[e]), int(L._right[e]), int(L._target[e])
        return CheckResult(
            name="grading",
            passed=False,
            detail=f"[{L.label(i)}, {L.label(j)}] has a term {L.label(k)} of degree {int(g[k])}",
        )
    return CheckResult(name="grading", passed=True)


def validate(L: LieAlgebra) -> ValidationReport:
    """
    Run the antisymmetry, Jacobi and grading checks.

    Returns:
        Report listing every check; a failing check names its first counterexample
    """
    antisymmetry = _check_antisymmetry(L)
    if antisymmetry.passed:
        jacobi = _check_jacobi(L)
    else:
        jacobi = CheckResult(name="jacobi", passed=False, detail="skipped: not antisymmetric")
    checks = [antisymmetry, jacobi, _check_grading(L)]
    report = ValidationReport(algebra=L.name, dim=L.dim, field=L.spec.label, checks=checks)
    if report.passed:
        logger.debug(f"Validated {L.name} (dim {L.dim})")
    else:
        logger.warning(f"Validation of {L.name} failed: {report.first_failure()}")
    return report


def is_simple_spot_check(L: LieAlgebra, rng: np.random.Generator, trials: int = 3) -> bool:
    """Ideals generated by random non-zero elements are the whole algebra."""
    for _ in range(trials):
        v = L.random_vector(rng)
        if not np.any(codes(v)):
            continue
        ideal = saturate_ideal(L, v)
        if ideal.dim != L.dim:
            return False
    return True


def saturate_ideal(L: LieAlgebra, v: FieldArray) -> SubalgebraBasis:
    """Ideal generated by ``v``."""
    adjoints = [L.ad_basis(i) for i in range(L.dim)]
    current = row_basis(_vstack(L, v))
    while True:
        images = [current @ a.T for a in adjoints]
        grown = row_basis(_vstack(L, current, *images))
        if grown.shape[0] == current.shape[0]:
            return SubalgebraBasis(L, current)
        current = grown


def pair_dimension(L: LieAlgebra, x: FieldArray, y: FieldArray) -> int:
    """dim of the subalgebra generated by x and y."""
    return generated_subalgebra(L, x, y).dim


def span_rank(L: LieAlgebra, vectors: Sequence[FieldArray]) -> int:
    """Rank of a family of vectors."""
    return rank(stack(list(vectors), L.field, L.dim))
