"""Exact arithmetic in prime fields and their extensions.

Elements are ``galois`` field arrays. The integer representation of an element of
F_{p^k} is its coefficient polynomial evaluated at p, so the coefficient vector of
code ``c`` is the base-p expansion of ``c`` (constant term first).
"""

import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Literal, Optional, Sequence, Union

import galois
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.logging_config import get_logger
from config.settings import settings
from utils.exceptions import (
    DivisionByZero,
    FieldTooLargeForEnumeration,
    PreconditionError,
    SpecMismatch,
)

logger = get_logger(__name__)

FieldArray = galois.FieldArray
Poly = galois.Poly

ArithOp = Literal["add", "sub", "mul", "inv", "pow"]

_SPEC_BY_FIELD: dict[type, "FieldSpec"] = {}


class FieldSpec(BaseModel):
    """The field F_{p^k} with a fixed modulus."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., description="Characteristic, a prime larger than 3")
    k: int = Field(1, ge=1, description="Extension degree over F_p")
    modulus: tuple[int, ...] = Field(..., description="Monic modulus, constant term first")

    @field_validator("p")
    @classmethod
    def validate_characteristic(cls, v: int) -> int:
        """Only odd primes above 3 are in scope."""
        if v <= 3 or not galois.is_prime(v):
            raise ValueError(f"p must be a prime > 3, got {v}")
        return v

    @model_validator(mode="after")
    def validate_modulus(self) -> "FieldSpec":
        """Check modulus shape: degree k, reduced coefficients, monic."""
        if len(self.modulus) != self.k + 1:
            raise ValueError(f"modulus must have {self.k + 1} coefficients")
        if any(c < 0 or c >= self.p for c in self.modulus):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if self.modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        return self

    @classmethod
    def create(cls, p: int, k: int = 1) -> "FieldSpec":
        """Build the spec for F_{p^k} with the shipped modulus."""
        return cls(p=p, k=k, modulus=load_modulus(p, k))

    @property
    def order(self) -> int:
        """Number of field elements."""
        return self.p**self.k

    @property
    def gf(self) -> type[FieldArray]:
        """The galois field class doing the arithmetic."""
        field = _galois_field(self.p, self.k, self.modulus)
        _SPEC_BY_FIELD.setdefault(field, self)
        return field

    @property
    def label(self) -> str:
        """Short human-readable name."""
        return f"F{self.p}" if self.k == 1 else f"F{self.p}^{self.k}"

    def extension(self, degree: int) -> "FieldSpec":
        """Spec of the degree-``degree`` extension of this field."""
        return FieldSpec.create(self.p, self.k * degree)

    def to_json(self) -> dict[str, Any]:
        """Serialize as ``{p, k, modulus}``."""
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "FieldSpec":
        """Inverse of :meth:`to_json`."""
        return cls(p=int(data["p"]), k=int(data["k"]), modulus=tuple(data["modulus"]))


@lru_cache(maxsize=None)
def _galois_field(p: int, k: int, modulus: tuple[int, ...]) -> type[FieldArray]:
    if k == 1:
        return galois.GF(p)
    irreducible = galois.Poly(list(reversed(modulus)), field=galois.GF(p))
    return galois.GF(p**k, irreducible_poly=irreducible)


@lru_cache(maxsize=None)
def _load_table(path: str) -> dict[str, dict[str, list[int]]]:
    table_path = Path(path)
    if not table_path.exists():
        logger.warning(f"Modulus table {table_path} not found, using the galois database")
        return {}
    with table_path.open(encoding="utf-8") as fh:
        raw = json.load(fh)
    return {key: value for key, value in raw.items() if not key.startswith("_")}


@lru_cache(maxsize=None)
def load_modulus(p: int, k: int) -> tuple[int, ...]:
    """
    Look up the modulus of F_{p^k}.

    Args:
        p: Characteristic
        k: Extension degree

    Returns:
        Monic irreducible polynomial of degree k, constant term first
    """
    table = _load_table(str(settings.modulus_table_path))
    entry = table.get(str(p), {}).get(str(k))
    if entry is None:
        try:
            conway = galois.conway_poly(p, k)
        except (ValueError, LookupError) as e:
            raise PreconditionError(f"No modulus for F{p}^{k}: {e}") from e
        modulus = tuple(int(c) for c in reversed(conway.coeffs))
        logger.debug(f"Modulus for F{p}^{k} taken from the galois database: {modulus}")
        return modulus

    modulus = tuple(int(c) for c in entry)
    if not is_irreducible_modulus(p, modulus):
        raise PreconditionError(f"Shipped modulus {modulus} for F{p}^{k} is reducible")
    return modulus


def is_irreducible_modulus(p: int, modulus: Sequence[int]) -> bool:
    """
    Brute-force irreducibility test.

    A reducible polynomial of degree k has a factor of degree j <= k/2, hence a root
    in F_{p^j}; every such field is enumerated.
    """
    k = len(modulus) - 1
    if k <= 1:
        return k == 1
    for j in range(1, k // 2 + 1):
        small = FieldSpec.create(p, j)
        if small.order > settings.enumeration_bound:
            raise FieldTooLargeForEnumeration(f"Cannot enumerate {small.label}")
        poly = galois.Poly(list(reversed(modulus)), field=small.gf)
        if np.any(poly(small.gf.elements) == 0):
            return False
    return True


def spec_of(values: FieldArray) -> FieldSpec:
    """Recover the spec a field array belongs to."""
    field = type(values)
    spec = _SPEC_BY_FIELD.get(field)
    if spec is None:
        raise SpecMismatch(f"{field.name} was not created through a FieldSpec")
    return spec


# Digits


def to_digits(codes: np.ndarray, p: int, k: int) -> np.ndarray:
    """Coefficient vectors (constant term first) of integer codes, shape (..., k)."""
    codes = np.asarray(codes, dtype=np.int64)
    powers = p ** np.arange(k, dtype=np.int64)
    return (codes[..., None] // powers) % p


def from_digits(digits: np.ndarray, p: int) -> np.ndarray:
    """Inverse of :func:`to_digits`."""
    digits = np.asarray(digits, dtype=np.int64)
    powers = p ** np.arange(digits.shape[-1], dtype=np.int64)
    return (digits * powers).sum(axis=-1)


def codes(values: FieldArray) -> np.ndarray:
    """Plain integer codes of a field array."""
    return np.asarray(values.view(np.ndarray), dtype=np.int64)


def sum_by_index(values: FieldArray, index: np.ndarray, size: int) -> FieldArray:
    """
    Add ``values[r]`` into slot ``index[r]`` of a zero vector of length ``size``.

    Addition in F_{p^k} is digitwise addition mod p, so the accumulation runs on
    integer digits.
    """
    spec = spec_of(values)
    field = type(values)
    index = np.asarray(index, dtype=np.int64)
    if index.size == 0:
        return field.Zeros(size)
    digits = to_digits(codes(values).ravel(), spec.p, spec.k)
    totals = np.empty((size, spec.k), dtype=np.int64)
    for j in range(spec.k):
        totals[:, j] = np.bincount(index.ravel(), weights=digits[:, j], minlength=size).astype(
            np.int64
        )
    return field(from_digits(totals % spec.p, spec.p))


# Elements


def element(spec: FieldSpec, coeffs: Union[int, Sequence[int]]) -> FieldArray:
    """Element from an integer of the prime field or a coefficient list."""
    if isinstance(coeffs, (int, np.integer)):
        return spec.gf(int(coeffs) % spec.p)
    if len(coeffs) > spec.k:
        raise PreconditionError(f"{len(coeffs)} coefficients given for {spec.label}")
    digits = [int(c) % spec.p for c in coeffs]
    return spec.gf(int(from_digits(np.array(digits), spec.p)))


def coefficients(a: FieldArray) -> list[int]:
    """Coefficient list of a scalar element (constant term first)."""
    spec = spec_of(a)
    return [int(d) for d in to_digits(np.array(int(a)), spec.p, spec.k)]


def generator(spec: FieldSpec) -> FieldArray:
    """The class of t modulo the modulus (the prime-field generator when k = 1)."""
    if spec.k == 1:
        return spec.gf.primitive_element
    return spec.gf(spec.p)


def field_arith(op: ArithOp, a: FieldArray, b: Union[FieldArray, int, None] = None) -> FieldArray:
    """
    Exact field operation.

    Args:
        op: One of add, sub, mul, inv, pow
        a: Left operand
        b: Right operand; the exponent for pow; ignored for inv

    Returns:
        The field result
    """
    if op == "inv":
        if a == 0:
            raise DivisionByZero("zero has no inverse")
        return a**-1
    if op == "pow":
        if not isinstance(b, (int, np.integer)):
            raise PreconditionError("pow expects an integer exponent")
        if b < 0 and a == 0:
            raise DivisionByZero("negative power of zero")
        return a ** int(b)
    if type(a) is not type(b):
        raise SpecMismatch(f"operands over different fields: {type(a).name}, {type(b).name}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise PreconditionError(f"unknown operation {op}")


def frobenius(a: FieldArray) -> FieldArray:
    """Return a^p."""
    return a ** spec_of(a).p


def enumerate_field(spec: FieldSpec, bound: Optional[int] = None) -> FieldArray:
    """All field elements in code order, subject to the enumeration bound."""
    bound = bound if bound is not None else settings.enumeration_bound
    if spec.order > bound:
        raise FieldTooLargeForEnumeration(f"{spec.label} has {spec.order} > {bound} elements")
    return spec.gf.elements


def find_roots(f: Poly, spec: Optional[FieldSpec] = None) -> FieldArray:
    """
    Roots of ``f`` in the working field by exhaustive evaluation.

    Args:
        f: Non-zero polynomial over the field
        spec: Working field; defaults to the field of ``f``

    Returns:
        Sorted array of the distinct roots
    """
    if is_zero_poly(f):
        raise PreconditionError("find_roots needs a non-zero polynomial")
    spec = spec or _SPEC_BY_FIELD.get(f.field)
    if spec is None:
        raise SpecMismatch("polynomial field was not created through a FieldSpec")
    if f.field is not spec.gf:
        f = galois.Poly(embed(f.coeffs, spec))
    points = enumerate_field(spec)
    return points[f(points) == 0]


def is_zero_poly(f: Poly) -> bool:
    """True for the zero polynomial."""
    return f.degree == 0 and int(f.coeffs[0]) == 0


def make_poly(coeffs: Sequence[Any], spec: FieldSpec) -> Poly:
    """Polynomial from coefficients listed constant term first."""
    values = spec.gf([int(c) for c in coeffs])
    return galois.Poly(values, order="asc")


# Embeddings


@lru_cache(maxsize=None)
def _generator_image(source: FieldSpec, target: FieldSpec) -> int:
    modulus = make_poly(list(source.modulus), target)
    roots = find_roots(modulus, target)
    if len(roots) == 0:
        raise SpecMismatch(f"{source.label} does not embed into {target.label}")
    return int(roots[0])


def embed(values: FieldArray, target: FieldSpec) -> FieldArray:
    """
    Map elements of a subfield into ``target``.

    The prime subfield keeps its codes; a proper extension is mapped by sending
    the class of t to the least root of its modulus in the target.
    """
    source = spec_of(values)
    if source == target:
        return values
    if source.p != target.p or target.k % source.k != 0:
        raise SpecMismatch(f"{source.label} is not a subfield of {target.label}")
    if source.k == 1:
        return target.gf(codes(values))
    theta = target.gf(_generator_image(source, target))
    digits = to_digits(codes(values), source.p, source.k)
    result = target.gf.Zeros(values.shape)
    power = target.gf(1)
    for j in range(source.k):
        result = result + target.gf(digits[..., j]) * power
        power = power * theta
    return result


def in_prime_field(values: FieldArray) -> bool:
    """True when every entry lies in F_p."""
    return bool(np.all(codes(values) < spec_of(values).p))


def random_elements(spec: FieldSpec, shape: Any, rng: np.random.Generator) -> FieldArray:
    """Uniform random field elements drawn from ``rng``."""
    return spec.gf.Random(shape, seed=rng)


# Serialization


def element_to_json(a: FieldArray) -> list[int]:
    """Scalar element as k integers in [0, p)."""
    return coefficients(a)


def element_from_json(spec: FieldSpec, data: Sequence[int]) -> FieldArray:
    """Inverse of :func:`element_to_json`."""
    return element(spec, list(data))


def vector_to_json(v: FieldArray) -> list[list[int]]:
    """Vector as a list of coefficient lists."""
    spec = spec_of(v)
    return to_digits(codes(v), spec.p, spec.k).tolist()


def vector_from_json(spec: FieldSpec, data: Sequence[Sequence[int]]) -> FieldArray:
    """Inverse of :func:`vector_to_json`."""
    if len(data) == 0:
        return spec.gf.Zeros(0)
    return spec.gf(from_digits(np.array(data, dtype=np.int64) % spec.p, spec.p))
