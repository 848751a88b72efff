"""Shared fixtures: fields and the curves several test modules build on."""

import numpy as np
import pytest

from app.factory import (
    double_line,
    good_triple_data,
    line,
    primitive_line,
    quadruple_line,
    triple_from_data,
)
from app.field import PrimeField, RationalField
from app.scenarios import ScenarioRunner

SEED = 20240601


@pytest.fixture(scope="session")
def field():
    return PrimeField(32003)


@pytest.fixture(scope="session")
def small_field():
    return PrimeField(101)


@pytest.fixture(scope="session")
def rationals():
    return RationalField()


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def the_line(field):
    return line(field)


@pytest.fixture(scope="session")
def doubles(field):
    """Double lines of type 0..3 built from the good forms"""
    out = {}
    for a in range(4):
        data = good_triple_data(a, 0, field)
        out[a] = double_line(a, data.f, data.g)
    return out


@pytest.fixture(scope="session")
def triple01(field):
    return triple_from_data(good_triple_data(0, 1, field))


@pytest.fixture(scope="session")
def triple02(field):
    return triple_from_data(good_triple_data(0, 2, field))


@pytest.fixture(scope="session")
def quadruple022(field):
    return quadruple_line(good_triple_data(0, 2, field), seed=SEED)


@pytest.fixture(scope="session")
def primitive31(field):
    return primitive_line(3, 1, seed=SEED, field=field)


@pytest.fixture(scope="session")
def runner():
    return ScenarioRunner(seed=SEED, field_char=32003)


@pytest.fixture(scope="session")
def primitive51(field):
    """A general primitive quintuple line of type 1, no surface condition imposed"""
    return primitive_line(5, 1, seed=SEED, field=field)
