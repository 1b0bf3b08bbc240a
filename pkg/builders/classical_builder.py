"""Classical Lie algebras from Chevalley bases and matrix units."""

from typing import Any, Hashable, Literal, Optional

import numpy as np

from builders.base_builder import BaseBuilder
from builders.root_system import Root, RootSystem, add, build_root_system, negate
from config.settings import settings
from core.field import FieldArray, FieldSpec, codes, embed
from core.liealg import (
    LieAlgebra,
    SubalgebraBasis,
    WeightDecomposition,
    center,
    direct_sum,
    is_simple_spot_check,
    quotient,
    weight_decomposition,
)
from core.linalg import stack
from utils.exceptions import InvariantViolation, PreconditionError
from utils.helpers import trial_rng

ClassicalKind = Literal["chevalley-simple", "sl", "psl", "gl", "pgl", "direct-sum"]


class ClassicalAlgebra:
    """
    A classical algebra with its Cartan subalgebra and root vectors.

    ``root_index`` maps each root to the basis index of its root vector. For direct
    sums the roots are tagged with the summand number.
    """

    def __init__(
        self,
        base: LieAlgebra,
        kind: ClassicalKind,
        cartan: SubalgebraBasis,
        root_index: dict[Hashable, int],
        root_system: Optional[RootSystem] = None,
        descriptor: str = "",
        cover: Optional["ClassicalAlgebra"] = None,
    ) -> None:
        """Bundle the pieces of a classical construction."""
        self.base = base
        self.kind = kind
        self.cartan = cartan
        self.root_index = root_index
        self.root_system = root_system
        self.descriptor = descriptor or base.name
        self.cover = cover
        self._roots_cache: Optional[WeightDecomposition] = None

    @property
    def spec(self) -> FieldSpec:
        """Working field."""
        return self.base.spec

    @property
    def dim(self) -> int:
        """Dimension."""
        return self.base.dim

    @property
    def roots(self) -> list[Hashable]:
        """Roots in basis order."""
        return sorted(self.root_index, key=lambda r: self.root_index[r])

    @property
    def is_simple_kind(self) -> bool:
        """Whether the construction is expected to be simple."""
        if self.kind in ("gl", "pgl", "direct-sum"):
            return False
        if self.kind == "psl" or self.root_system is None:
            return True
        system = self.root_system
        return not (system.kind == "A" and (system.rank + 1) % self.spec.p == 0)

    def root_vector(self, root: Hashable) -> FieldArray:
        """e_root."""
        return self.base.basis_vector(self.root_index[root])

    def root_components(self, x: FieldArray) -> FieldArray:
        """Coefficients x_alpha on the root vectors, in root order."""
        return x[[self.root_index[r] for r in self.roots]]

    def root_functionals(self) -> FieldArray:
        """V with V[a, r] = alpha_a(h_r) for the Cartan basis rows h_r."""
        idx = np.asarray([self.root_index[r] for r in self.roots], dtype=np.int64)
        columns = [self.base.ad(h)[idx, idx] for h in self.cartan.rows]
        return stack(columns, self.base.field, len(idx)).T

    def root_values(self, y: FieldArray) -> FieldArray:
        """alpha(y) for every root, for y in the Cartan subalgebra."""
        idx = [self.root_index[r] for r in self.roots]
        return self.base.ad(y)[idx, idx]

    def root_decomposition(self) -> WeightDecomposition:
        """Weight spaces of the Cartan subalgebra."""
        if self._roots_cache is None:
            self._roots_cache = weight_decomposition(self.base, list(self.cartan.rows))
        return self._roots_cache

    def over(self, spec: FieldSpec) -> "ClassicalAlgebra":
        """Scalar extension."""
        if spec == self.spec:
            return self
        base = self.base.over(spec)
        cartan = SubalgebraBasis(base, embed(self.cartan.rows, spec))
        return ClassicalAlgebra(
            base,
            self.kind,
            cartan,
            dict(self.root_index),
            self.root_system,
            self.descriptor,
            self.cover.over(spec) if self.cover is not None else None,
        )

    def __repr__(self) -> str:
        return f"ClassicalAlgebra({self.descriptor}, dim={self.dim}, {self.spec.label})"


def _root_label(root: Root) -> str:
    return "e[" + ",".join(str(c) for c in root) + "]"


def chevalley_algebra(system: RootSystem, spec: FieldSpec, name: str) -> ClassicalAlgebra:
    """
    Chevalley basis: positive root vectors, then h_1..h_l, then negative root vectors.

    The grading is by height.
    """
    positive = list(system.positive)
    rank = system.rank
    npos = len(positive)
    index: dict[Root, int] = {r: i for i, r in enumerate(positive)}
    index.update({negate(r): npos + rank + i for i, r in enumerate(positive)})
    dim = 2 * npos + rank

    def h(i: int) -> int:
        return npos + i

    constants: dict[tuple[int, int], dict[int, Any]] = {}
    roots = list(index)
    for a in roots:
        for b in roots:
            i, j = index[a], index[b]
            if i >= j:
                continue
            if a == negate(b):
                # a is positive since its index is smaller
                coeffs = system.coroot_coefficients(a)
                constants[(i, j)] = {h(r): c for r, c in enumerate(coeffs) if c}
            elif system.is_root(add(a, b)):
                constants[(i, j)] = {index[add(a, b)]: system.structure_constant(a, b)}
    for r in range(rank):
        for b in roots:
            value = system.pairing(b, r)
            if value == 0:
                continue
            if index[b] < h(r):
                constants[(index[b], h(r))] = {index[b]: -value}
            else:
                constants[(h(r), index[b])] = {index[b]: value}

    grading = [0] * dim
    labels = [""] * dim
    for r, i in index.items():
        grading[i] = system.height(r)
        labels[i] = _root_label(r)
    for r in range(rank):
        labels[h(r)] = f"h{r + 1}"
    base = LieAlgebra(spec, dim, constants, grading, labels, name)
    cartan = base.span([base.basis_vector(h(r)) for r in range(rank)])
    return ClassicalAlgebra(base, "chevalley-simple", cartan, dict(index), system, name)


def gl_algebra(n: int, spec: FieldSpec) -> ClassicalAlgebra:
    """
    gl_n on matrix units.

    Basis order: E_ij with i < j by (j - i, i), the diagonal, then E_ji in the same
    order. E_ij is the root vector of alpha_i + ... + alpha_{j-1}.
    """
    if n < 2:
        raise PreconditionError("gl_n needs n >= 2")
    upper = sorted(((i, j) for i in range(n) for j in range(i + 1, n)), key=lambda t: (t[1] - t[0], t[0]))
    units = upper + [(i, i) for i in range(n)] + [(j, i) for i, j in upper]
    position = {u: k for k, u in enumerate(units)}

    constants: dict[tuple[int, int], dict[int, Any]] = {}
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if a >= b:
                continue
            terms: dict[int, int] = {}
            if j == k:
                terms[position[(i, l)]] = terms.get(position[(i, l)], 0) + 1
            if l == i:
                terms[position[(k, j)]] = terms.get(position[(k, j)], 0) - 1
            terms = {t: c for t, c in terms.items() if c}
            if terms:
                constants[(a, b)] = terms

    def root_of(i: int, j: int) -> Root:
        lo, hi = min(i, j), max(i, j)
        sign = 1 if i < j else -1
        return tuple(sign if lo <= r < hi else 0 for r in range(n - 1))

    root_index = {root_of(i, j): position[(i, j)] for (i, j) in units if i != j}
    grading = [j - i for (i, j) in units]
    labels = [f"E{i + 1}{j + 1}" for (i, j) in units]
    base = LieAlgebra(spec, n * n, constants, grading, labels, f"gl{n}")
    cartan = base.span([base.basis_vector(position[(i, i)]) for i in range(n)])
    system = build_root_system("A", n - 1) if n >= 2 else None
    return ClassicalAlgebra(base, "gl", cartan, root_index, system, f"gl:{n}")


def center_quotient(g: ClassicalAlgebra, kind: ClassicalKind, name: str) -> ClassicalAlgebra:
    """Quotient by the center, keeping root vectors and the image of the Cartan."""
    z = center(g.base)
    if z.dim == 0:
        return ClassicalAlgebra(g.base, kind, g.cartan, g.root_index, g.root_system, name, g)
    q = quotient(g.base, z, name=name)
    keep = q.parent_indices or []
    position = {old: new for new, old in enumerate(keep)}
    if any(i not in position for i in g.root_index.values()):
        raise InvariantViolation("center meets a root space")

    def project(v: FieldArray) -> FieldArray:
        reduced = z.residual(v)
        return reduced[keep]

    cartan = q.span([project(h) for h in g.cartan.rows])
    root_index = {r: position[i] for r, i in g.root_index.items()}
    return ClassicalAlgebra(q, kind, cartan, root_index, g.root_system, name, g)


def lift_from_quotient(g: ClassicalAlgebra, v: FieldArray) -> FieldArray:
    """A preimage in the cover of a vector of a center quotient."""
    if g.cover is None or g.base.parent_indices is None:
        return v
    lifted = g.cover.base.zero()
    lifted[g.base.parent_indices] = v
    return lifted


def classical_direct_sum(parts: list[ClassicalAlgebra], name: str) -> ClassicalAlgebra:
    """Direct sum with roots tagged by summand."""
    if not parts:
        raise PreconditionError("empty direct sum")
    base = parts[0].base
    for part in parts[1:]:
        base = direct_sum(base, part.base)
    base.name = name
    root_index: dict[Hashable, int] = {}
    cartan_rows = []
    for block, part in enumerate(parts):
        offset = base.blocks[block][0]
        for r, i in part.root_index.items():
            root_index[(block, r)] = offset + i
        for h in part.cartan.rows:
            v = base.zero()
            v[offset : offset + part.dim] = h
            cartan_rows.append(v)
    return ClassicalAlgebra(base, "direct-sum", base.span(cartan_rows), root_index, None, name)


class ClassicalBuilder(BaseBuilder):
    """Builder for Chevalley types and the sl/psl/gl/pgl families."""

    def __init__(
        self, kind: ClassicalKind, n: int, root_type: Optional[str] = None, descriptor: str = ""
    ) -> None:
        """
        Initialize classical builder.

        Args:
            kind: chevalley-simple, sl, psl, gl or pgl
            n: Rank for chevalley-simple, matrix size otherwise
            root_type: Series letter for chevalley-simple
            descriptor: Descriptor string
        """
        super().__init__("classical", descriptor or f"{kind}:{n}")
        self.kind = kind
        self.n = n
        self.root_type = root_type

    def expected_dim(self, p: int) -> int:
        """Dimension from the root count and rank."""
        if self.kind == "chevalley-simple":
            system = build_root_system(self.root_type or "A", self.n)
            return len(system.roots) + system.rank
        if self.kind == "sl":
            return self.n * self.n - 1
        if self.kind == "psl":
            return self.n * self.n - 1 - (1 if self.n % p == 0 else 0)
        if self.kind == "gl":
            return self.n * self.n
        return self.n * self.n - 1

    def build(self, spec: FieldSpec) -> ClassicalAlgebra:
        """Construct, validate and spot-check simplicity."""
        self.check_cap(spec.p)
        if self.kind == "chevalley-simple":
            system = build_root_system(self.root_type or "A", self.n)
            g = chevalley_algebra(system, spec, system.name)
        elif self.kind in ("sl", "psl"):
            system = build_root_system("A", self.n - 1)
            g = chevalley_algebra(system, spec, f"sl{self.n}")
            g.kind = "sl"
            g.descriptor = f"sl:{self.n}"
            if self.kind == "psl":
                g = center_quotient(g, "psl", f"psl{self.n}")
                g.descriptor = f"psl:{self.n}"
        elif self.kind == "gl":
            g = gl_algebra(self.n, spec)
        else:
            g = center_quotient(gl_algebra(self.n, spec), "pgl", f"pgl{self.n}")
            g.descriptor = f"pgl:{self.n}"

        self.validated(g.base)
        if g.dim != self.expected_dim(spec.p):
            raise InvariantViolation(f"{g.descriptor} has dimension {g.dim}")
        if g.is_simple_kind and g.dim <= settings.simplicity_check_max_dim:
            if not is_simple_spot_check(g.base, trial_rng(0, g.dim)):
                raise InvariantViolation(f"{g.descriptor} failed the simplicity spot check")
        return g


def build_classical(kind: ClassicalKind, n: Any, spec: FieldSpec) -> ClassicalAlgebra:
    """
    Build a classical algebra.

    Args:
        kind: chevalley-simple (n a type label such as 'G2'), sl, psl, gl or pgl
        n: Type label or matrix size
        spec: Working field

    Returns:
        The validated algebra
    """
    if kind == "chevalley-simple":
        label = str(n).upper()
        return ClassicalBuilder(kind, int(label[1:]), label[0], descriptor=label).build(spec)
    return ClassicalBuilder(kind, int(n)).build(spec)


def root_space_dimensions(g: ClassicalAlgebra) -> dict[tuple[int, ...], int]:
    """Dimensions of the nonzero weight spaces of the Cartan subalgebra."""
    decomposition = g.root_decomposition()
    zero = tuple(0 for _ in range(g.cartan.dim))
    return {w: d for w, d in decomposition.dimensions().items() if w != zero}


def coroot_span_dim(g: ClassicalAlgebra) -> int:
    """dim of the span of [e_a, e_-a] over the roots."""
    rows = []
    for r in g.roots:
        partner = negate(r) if isinstance(r[0], int) else (r[0], negate(r[1]))
        if partner in g.root_index:
            rows.append(g.base.bracket(g.root_vector(r), g.root_vector(partner)))
    span = g.base.span(rows)
    if not g.cartan.includes(span):
        raise InvariantViolation("coroot lies outside the Cartan subalgebra")
    return span.dim


def is_nonzero(v: FieldArray) -> bool:
    """Whether a vector has a nonzero entry."""
    return bool(np.any(codes(v)))
