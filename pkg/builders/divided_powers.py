"""Divided power algebras O(m, n) and multi-index arithmetic."""

from functools import lru_cache
from itertools import product
from math import comb
from typing import Optional, Sequence

import numpy as np

from config.logging_config import get_logger
from core.field import FieldArray, FieldSpec, codes, sum_by_index
from core.linalg import rank, stack
from utils.exceptions import InvariantViolation, PreconditionError

logger = get_logger(__name__)

MultiIndex = tuple[int, ...]


def lucas_binomial(a: int, b: int, p: int) -> int:
    """binom(a, b) mod p digit by digit; zero for b < 0 or b > a."""
    if b < 0 or a < 0 or b > a:
        return 0
    result = 1
    while a or b:
        a, da = divmod(a, p)
        b, db = divmod(b, p)
        if db > da:
            return 0
        result = result * comb(da, db) % p
    return result


def multi_binomial(alpha: MultiIndex, beta: MultiIndex, p: int) -> int:
    """binom(alpha, beta) = prod binom(alpha_i, beta_i) mod p."""
    result = 1
    for a, b in zip(alpha, beta):
        result = result * lucas_binomial(a, b, p) % p
        if result == 0:
            break
    return result


def tau(p: int, n: Sequence[int]) -> MultiIndex:
    """(p^{n_1} - 1, ..., p^{n_m} - 1)."""
    return tuple(p**k - 1 for k in n)


def length(alpha: MultiIndex) -> int:
    """|alpha|."""
    return sum(alpha)


def unit(m: int, i: int) -> MultiIndex:
    """epsilon_i (0-based)."""
    return tuple(int(j == i) for j in range(m))


def leq(alpha: MultiIndex, beta: MultiIndex) -> bool:
    """Componentwise order."""
    return all(a <= b for a, b in zip(alpha, beta))


def add(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    """alpha + beta."""
    return tuple(a + b for a, b in zip(alpha, beta))


def sub(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    """alpha - beta (may have negative entries)."""
    return tuple(a - b for a, b in zip(alpha, beta))


def p_digits(a: int, p: int, width: Optional[int] = None) -> list[int]:
    """Base-p digits, least significant first, padded to ``width``."""
    digits = []
    rest = a
    while rest:
        rest, d = divmod(rest, p)
        digits.append(d)
    if width is not None:
        if len(digits) > width:
            raise PreconditionError(f"{a} needs more than {width} digits")
        digits += [0] * (width - len(digits))
    return digits


@lru_cache(maxsize=None)
def multi_indices(p: int, n: tuple[int, ...]) -> tuple[MultiIndex, ...]:
    """All alpha with 0 <= alpha <= tau(n), sorted by (|alpha|, alpha)."""
    bound = tau(p, n)
    found = product(*(range(t + 1) for t in bound))
    return tuple(sorted(found, key=lambda a: (length(a), a)))


def dp_multiply(
    algebra: "DividedPowerAlgebra", alpha: MultiIndex, beta: MultiIndex
) -> tuple[int, Optional[MultiIndex]]:
    """
    x^(alpha) x^(beta) = binom(alpha + beta, alpha) x^(alpha + beta).

    Returns:
        (coefficient mod p, alpha + beta), or (0, None) when alpha + beta leaves the
        truncation range
    """
    if not (leq(alpha, algebra.tau) and leq(beta, algebra.tau)):
        raise PreconditionError(f"{alpha} or {beta} exceeds tau = {algebra.tau}")
    total = add(alpha, beta)
    coefficient = multi_binomial(total, alpha, algebra.p)
    if not leq(total, algebra.tau):
        if coefficient != 0:
            raise InvariantViolation(f"binom({total}, {alpha}) != 0 beyond truncation")
        return 0, None
    return coefficient, total


class DividedPowerAlgebra:
    """
    O(m, n) over a field, on the monomial basis x^(alpha), 0 <= alpha <= tau(n).

    Elements are coefficient vectors in the order of :func:`multi_indices`.
    """

    def __init__(self, m: int, n: Sequence[int], spec: FieldSpec) -> None:
        """Build the basis and the multiplication table."""
        if m < 1 or len(n) != m or any(k < 1 for k in n):
            raise PreconditionError(f"O(m, n) needs m >= 1 and n of length m with entries >= 1")
        self.m = m
        self.n = tuple(int(k) for k in n)
        self.spec = spec
        self.p = spec.p
        self.tau = tau(self.p, self.n)
        self.basis = multi_indices(self.p, self.n)
        self.index = {alpha: i for i, alpha in enumerate(self.basis)}

        left, right, target, coeff = [], [], [], []
        for i, alpha in enumerate(self.basis):
            room = sub(self.tau, alpha)
            for j, beta in enumerate(self.basis):
                if not leq(beta, room):
                    continue
                c, total = dp_multiply(self, alpha, beta)
                if c:
                    left.append(i)
                    right.append(j)
                    target.append(self.index[total])
                    coeff.append(c)
        self._left = np.asarray(left, dtype=np.int64)
        self._right = np.asarray(right, dtype=np.int64)
        self._target = np.asarray(target, dtype=np.int64)
        self._coeff = spec.gf(np.asarray(coeff, dtype=np.int64))

    @property
    def dim(self) -> int:
        """p^{|n|}."""
        return len(self.basis)

    @property
    def field(self) -> type[FieldArray]:
        """Coefficient field."""
        return self.spec.gf

    @property
    def name(self) -> str:
        """Descriptor such as O:2:1,1."""
        return f"O:{self.m}:" + ",".join(str(k) for k in self.n)

    def degree(self, alpha: MultiIndex) -> int:
        """Grading degree |alpha|."""
        return length(alpha)

    @property
    def top_degree(self) -> int:
        """|tau|."""
        return length(self.tau)

    def monomial(self, alpha: MultiIndex) -> FieldArray:
        """x^(alpha) as a vector."""
        v = self.field.Zeros(self.dim)
        v[self.index[tuple(alpha)]] = 1
        return v

    def one(self) -> FieldArray:
        """The unit x^(0)."""
        return self.monomial(tuple(0 for _ in range(self.m)))

    def variable(self, i: int) -> FieldArray:
        """x_i = x^(epsilon_i)."""
        return self.monomial(unit(self.m, i))

    def multiply(self, f: FieldArray, g: FieldArray) -> FieldArray:
        """Product of two elements."""
        values = f[self._left] * g[self._right] * self._coeff
        return sum_by_index(values, self._target, self.dim)

    def multiplication_matrix(self, f: FieldArray) -> FieldArray:
        """Matrix of g -> f g on column vectors."""
        values = f[self._left] * self._coeff
        flat = sum_by_index(values, self._target * self.dim + self._right, self.dim * self.dim)
        return flat.reshape(self.dim, self.dim)

    def power(self, f: FieldArray, exponent: int) -> FieldArray:
        """f^exponent by repeated squaring."""
        result = self.one()
        base = f.copy()
        while exponent:
            if exponent & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            exponent >>= 1
        return result

    def partial(self, i: int) -> FieldArray:
        """Matrix of the special derivation D_i: x^(alpha) -> x^(alpha - epsilon_i)."""
        d = self.field.Zeros((self.dim, self.dim))
        for col, alpha in enumerate(self.basis):
            if alpha[i] > 0:
                d[self.index[sub(alpha, unit(self.m, i))], col] = 1
        return d

    def constant_term(self, f: FieldArray) -> FieldArray:
        """Coefficient of x^(0)."""
        return f[0]

    def maximal_ideal(self) -> FieldArray:
        """Rows spanning the positive-degree monomials."""
        return self.field.Identity(self.dim)[1:]

    def x_tau(self) -> FieldArray:
        """The distinguished top monomial x^(tau)."""
        return self.monomial(self.tau)

    def ideal(self, f: FieldArray) -> FieldArray:
        """Rows spanning the principal ideal O f."""
        rows = [self.multiply(self.monomial(alpha), f) for alpha in self.basis]
        return stack(rows, self.field, self.dim)

    def __repr__(self) -> str:
        return f"DividedPowerAlgebra({self.name}, dim={self.dim}, {self.spec.label})"


def build_divided_powers(m: int, n: Sequence[int], spec: FieldSpec) -> DividedPowerAlgebra:
    """
    Construct O(m, n) and check its dimension.

    Args:
        m: Number of variables
        n: Truncation heights, one per variable
        spec: Working field

    Returns:
        The algebra
    """
    algebra = DividedPowerAlgebra(m, n, spec)
    expected = spec.p ** sum(algebra.n)
    if algebra.dim != expected:
        raise InvariantViolation(f"{algebra.name} has dimension {algebra.dim}, expected {expected}")
    logger.debug(f"Built {algebra.name} (dim {algebra.dim}) over {spec.label}")
    return algebra


def is_independent(vectors: Sequence[FieldArray], width: int, field: type[FieldArray]) -> bool:
    """Linear independence by rank."""
    if not vectors:
        return True
    return rank(stack(list(vectors), field, width)) == len(vectors)


def truncated_power_vanishes(algebra: DividedPowerAlgebra, xi: Sequence[FieldArray]) -> bool:
    """Whether xi_1^{p-1} ... xi_k^{p-1} = 0 in O(m, 1)."""
    result = algebra.one()
    for f in xi:
        result = algebra.multiply(result, algebra.power(f, algebra.p - 1))
    return not np.any(codes(result))
