"""Shared fixtures: one cached group table per spec string.

Group tables are immutable and cache their derived data (action tables,
subgroup lists), so sharing one instance per spec across the whole session
keeps the suite fast without coupling tests to each other.
"""

import pytest

from quotset.groups import ALTERNATING4_SPEC, build_group

_CACHE = {}


def _group(spec):
    G = _CACHE.get(spec)
    if G is None:
        G = _CACHE[spec] = build_group(spec)
    return G


@pytest.fixture(scope="session")
def make_group():
    return _group


@pytest.fixture(scope="session")
def s3():
    return _group("symmetric 3")


@pytest.fixture(scope="session")
def s4():
    return _group("symmetric 4")


@pytest.fixture(scope="session")
def c7():
    return _group("cyclic 7")


@pytest.fixture(scope="session")
def c8():
    return _group("cyclic 8")


@pytest.fixture(scope="session")
def c10():
    return _group("cyclic 10")


@pytest.fixture(scope="session")
def c12():
    return _group("cyclic 12")


@pytest.fixture(scope="session")
def d4():
    return _group("dihedral 4")


@pytest.fixture(scope="session")
def d6():
    return _group("dihedral 6")


@pytest.fixture(scope="session")
def q8():
    return _group("dicyclic 2")


@pytest.fixture(scope="session")
def a4():
    return _group(ALTERNATING4_SPEC)
