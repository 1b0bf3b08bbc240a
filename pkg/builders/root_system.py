"""Root systems of types A-D and G2 with Chevalley structure constants.

Roots are integer tuples of coefficients on the simple roots. Inner products use an
integral Gram matrix of the simple roots; only ratios of inner products enter the
structure constants, so the scaling is immaterial.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.logging_config import get_logger
from utils.exceptions import InvariantViolation, PreconditionError, UnsupportedType

logger = get_logger(__name__)

Root = tuple[int, ...]

SUPPORTED_TYPES = ("A", "B", "C", "D", "G")

# Number of roots per type, used as a construction check
ROOT_COUNTS = {
    "A": lambda n: n * (n + 1),
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * (n - 1),
    "G": lambda n: 12,
}


def gram_matrix(kind: str, rank: int) -> np.ndarray:
    """
    Integral Gram matrix of the simple roots in Bourbaki numbering.

    Args:
        kind: Series letter
        rank: Rank of the root system

    Returns:
        rank x rank symmetric integer matrix
    """
    if kind not in SUPPORTED_TYPES:
        raise UnsupportedType(f"type {kind} is not built (supported: A, B, C, D, G2)")
    minimum = {"A": 1, "B": 2, "C": 2, "D": 3, "G": 2}[kind]
    if rank < minimum or (kind == "G" and rank != 2):
        raise PreconditionError(f"type {kind} needs rank >= {minimum}, got {rank}")

    g = np.zeros((rank, rank), dtype=np.int64)
    if kind == "G":
        # alpha_1 short, alpha_2 long
        return np.array([[2, -3], [-3, 6]], dtype=np.int64)
    for i in range(rank):
        g[i, i] = 2
        if i + 1 < rank:
            g[i, i + 1] = g[i + 1, i] = -1
    if kind == "B":
        g = 2 * g
        g[rank - 1, rank - 1] = 2
    elif kind == "C":
        g[rank - 1, rank - 1] = 4
        g[rank - 2, rank - 1] = g[rank - 1, rank - 2] = -2
    elif kind == "D":
        g[rank - 2, rank - 1] = g[rank - 1, rank - 2] = 0
        g[rank - 3, rank - 1] = g[rank - 1, rank - 3] = -1
    return g


class RootSystem(BaseModel):
    """A reduced root system with a fixed ordering and structure constants."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: str = Field(..., description="Series letter: A, B, C, D or G")
    rank: int = Field(..., ge=1)
    gram: np.ndarray = Field(..., description="Gram matrix of the simple roots")
    positive: tuple[Root, ...] = Field(..., description="Positive roots by (height, coefficients)")
    constants: dict[tuple[Root, Root], int] = Field(
        ..., description="N_{a,b} for all pairs of roots whose sum is a root"
    )

    @model_validator(mode="after")
    def validate_counts(self) -> "RootSystem":
        """Root count must match the type tables."""
        expected = ROOT_COUNTS[self.kind](self.rank)
        if 2 * len(self.positive) != expected:
            raise ValueError(f"{self.name} has {2 * len(self.positive)} roots, expected {expected}")
        return self

    @property
    def name(self) -> str:
        """Type label such as A2 or G2."""
        return f"{self.kind}{self.rank}"

    @property
    def roots(self) -> list[Root]:
        """Positive roots followed by their negatives."""
        return list(self.positive) + [negate(r) for r in self.positive]

    @property
    def simple(self) -> list[Root]:
        """Simple roots."""
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def inner(self, a: Root, b: Root) -> int:
        """Inner product through the Gram matrix."""
        return int(np.asarray(a) @ self.gram @ np.asarray(b))

    def pairing(self, a: Root, i: int) -> int:
        """<a, alpha_i^vee> = 2 (a, alpha_i) / (alpha_i, alpha_i)."""
        simple = self.simple[i]
        value = Fraction(2 * self.inner(a, simple), self.inner(simple, simple))
        if value.denominator != 1:
            raise InvariantViolation(f"non-integral pairing of {a} with alpha_{i + 1}")
        return int(value)

    def cartan_matrix(self) -> np.ndarray:
        """a_ij = <alpha_i, alpha_j^vee>."""
        return np.array(
            [[self.pairing(self.simple[i], j) for j in range(self.rank)] for i in range(self.rank)],
            dtype=np.int64,
        )

    def coroot_coefficients(self, a: Root) -> list[int]:
        """Coefficients of a^vee on the simple coroots."""
        norm = self.inner(a, a)
        coeffs = []
        for i, c in enumerate(a):
            simple = self.simple[i]
            value = Fraction(c * self.inner(simple, simple), norm)
            if value.denominator != 1:
                raise InvariantViolation(f"non-integral coroot coefficient for {a}")
            coeffs.append(int(value))
        return coeffs

    def height(self, a: Root) -> int:
        """Sum of the coefficients."""
        return sum(a)

    def is_root(self, a: Root) -> bool:
        """Membership in the root set."""
        return a in _root_set(self.kind, self.rank)

    def string_bounds(self, a: Root, b: Root) -> tuple[int, int]:
        """(p, q): b - p a, ..., b + q a is the a-string through b."""
        p = 0
        while self.is_root(add(b, scale(a, -(p + 1)))):
            p += 1
        q = 0
        while self.is_root(add(b, scale(a, q + 1))):
            q += 1
        return p, q

    def structure_constant(self, a: Root, b: Root) -> int:
        """N_{a,b}, zero when a + b is not a root."""
        return self.constants.get((a, b), 0)


def negate(a: Root) -> Root:
    """-a."""
    return tuple(-c for c in a)


def add(a: Root, b: Root) -> Root:
    """a + b."""
    return tuple(x + y for x, y in zip(a, b))


def scale(a: Root, k: int) -> Root:
    """k a."""
    return tuple(k * c for c in a)


def is_positive(a: Root) -> bool:
    """Non-negative coefficients, not all zero."""
    return all(c >= 0 for c in a) and any(a)


@lru_cache(maxsize=None)
def _positive_roots(kind: str, rank: int) -> tuple[Root, ...]:
    gram = gram_matrix(kind, rank)
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]

    def inner(a: Root, b: Root) -> int:
        return int(np.asarray(a) @ gram @ np.asarray(b))

    found: set[Root] = set(simple)
    layer = list(simple)
    while layer:
        fresh: list[Root] = []
        for beta in layer:
            for i, alpha in enumerate(simple):
                candidate = add(beta, alpha)
                if candidate in found:
                    continue
                # lower part of the string is already complete
                p = 0
                while add(beta, scale(alpha, -(p + 1))) in found:
                    p += 1
                pairing = Fraction(2 * inner(beta, alpha), inner(alpha, alpha))
                if p - pairing > 0:
                    found.add(candidate)
                    fresh.append(candidate)
        layer = sorted(set(fresh))
    return tuple(sorted(found, key=lambda r: (sum(r), r)))


@lru_cache(maxsize=None)
def _root_set(kind: str, rank: int) -> frozenset[Root]:
    positive = _positive_roots(kind, rank)
    return frozenset(positive) | frozenset(negate(r) for r in positive)


def _structure_constants(kind: str, rank: int) -> dict[tuple[Root, Root], int]:
    """
    Chevalley constants from extraspecial pairs.

    Extraspecial pairs get N = +(p + 1). Other special pairs follow from the
    four-root identity, mixed-sign pairs from the three-root identity, and
    N_{-a,-b} = -N_{a,b}.
    """
    gram = gram_matrix(kind, rank)
    positive = _positive_roots(kind, rank)
    roots = _root_set(kind, rank)
    order = {r: i for i, r in enumerate(positive)}

    def inner(a: Root, b: Root) -> int:
        return int(np.asarray(a) @ gram @ np.asarray(b))

    def norm(a: Root) -> int:
        return inner(a, a)

    def string_p(a: Root, b: Root) -> int:
        p = 0
        while add(b, scale(a, -(p + 1))) in roots:
            p += 1
        return p

    table: dict[tuple[Root, Root], Fraction] = {}

    def n(a: Root, b: Root) -> Fraction:
        c = add(a, b)
        if c not in roots:
            return Fraction(0)
        if is_positive(a) and is_positive(b):
            return table[(a, b)]
        if not is_positive(a) and not is_positive(b):
            return -table[(negate(a), negate(b))]
        # three-root identity with a + b + (-c) = 0
        if is_positive(b) == is_positive(negate(c)):
            return Fraction(norm(c), norm(a)) * n(b, negate(c))
        return Fraction(norm(c), norm(b)) * n(negate(c), a)

    for xi in positive:
        pairs = [
            (a, add(xi, negate(a)))
            for a in positive
            if add(xi, negate(a)) in order and order[a] < order[add(xi, negate(a))]
        ]
        if not pairs:
            continue
        a0, b0 = pairs[0]
        extraspecial = Fraction(string_p(a0, b0) + 1)
        table[(a0, b0)] = extraspecial
        table[(b0, a0)] = -extraspecial
        for a, b in pairs[1:]:
            t2 = Fraction(0)
            d = add(b, negate(a0))
            if d in roots:
                t2 = n(b, negate(a0)) * n(a, negate(b0)) / norm(d)
            t3 = Fraction(0)
            d = add(a, negate(a0))
            if d in roots:
                t3 = n(negate(a0), a) * n(b, negate(b0)) / norm(d)
            value = Fraction(norm(xi)) / extraspecial * (t2 + t3)
            table[(a, b)] = value
            table[(b, a)] = -value

    constants: dict[tuple[Root, Root], int] = {}
    for a in roots:
        for b in roots:
            if add(a, b) not in roots:
                continue
            value = n(a, b)
            if value.denominator != 1 or abs(value) != string_p(a, b) + 1:
                raise InvariantViolation(f"N_{a},{b} = {value} violates |N| = p + 1")
            constants[(a, b)] = int(value)
    return constants


@lru_cache(maxsize=None)
def build_root_system(kind: str, rank: int) -> RootSystem:
    """
    Root system of the given type with Chevalley structure constants.

    Args:
        kind: A, B, C, D or G (E and F are rejected)
        rank: Rank; D needs at least 3, G only 2

    Returns:
        The root system
    """
    kind = kind.upper()
    if kind not in SUPPORTED_TYPES:
        raise UnsupportedType(f"type {kind}{rank} is not supported")
    system = RootSystem(
        kind=kind,
        rank=rank,
        gram=gram_matrix(kind, rank),
        positive=_positive_roots(kind, rank),
        constants=_structure_constants(kind, rank),
    )
    longest = {"A": 2, "D": 2, "B": 3, "C": 3, "G": 4}[kind]
    for a in system.roots:
        for b in system.roots:
            if a != b and a != negate(b):
                p, q = system.string_bounds(a, b)
                if p + q + 1 > longest:
                    raise InvariantViolation(f"root string of length {p + q + 1} in {system.name}")
    logger.debug(f"Built root system {system.name} with {len(system.roots)} roots")
    return system


def parse_type(label: str) -> tuple[str, int]:
    """Split a label such as 'B2' into ('B', 2)."""
    label = label.strip().upper()
    if len(label) < 2 or not label[1:].isdigit():
        raise PreconditionError(f"cannot read root system label {label!r}")
    return label[0], int(label[1:])


def highest_root(system: RootSystem) -> Optional[Root]:
    """The positive root of greatest height."""
    return system.positive[-1] if system.positive else None
