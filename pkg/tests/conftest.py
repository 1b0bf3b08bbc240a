"""Shared fixtures."""

import pytest

from builders.registry import build_algebra
from core.field import FieldSpec
from core.liealg import LieAlgebra
from utils.helpers import trial_rng


@pytest.fixture(scope="session")
def f5() -> FieldSpec:
    return FieldSpec.create(5)


@pytest.fixture(scope="session")
def f25() -> FieldSpec:
    return FieldSpec.create(5, 2)


@pytest.fixture
def rng():
    return trial_rng(7, 0)


@pytest.fixture(scope="session")
def sl2(f5: FieldSpec) -> LieAlgebra:
    """sl_2 on e, h, f with [e, h] = -2e, [e, f] = h, [h, f] = -2f."""
    constants = {(0, 1): {0: -2}, (0, 2): {1: 1}, (1, 2): {2: -2}}
    return LieAlgebra(f5, 3, constants, grading=[1, 0, -1], labels=["e", "h", "f"], name="sl2")


@pytest.fixture(scope="session")
def a2(f5: FieldSpec):
    return build_algebra("A2", f5)


@pytest.fixture(scope="session")
def w11(f5: FieldSpec):
    return build_algebra("W:1:1", f5)


@pytest.fixture(scope="session")
def w21(f5: FieldSpec):
    return build_algebra("W:2:1", f5)


@pytest.fixture(scope="session")
def zass1(f5: FieldSpec):
    return build_algebra("Zass:1", f5)
