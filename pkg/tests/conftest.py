import random

import pytest

from perfcode import PointPerm, catalog_taus


@pytest.fixture(scope="session")
def r3_catalog():
    catalog = catalog_taus(3)
    assert catalog.complete
    return catalog


@pytest.fixture(scope="session")
def r3_taus(r3_catalog):
    return [r3_catalog.perm(i) for i in range(len(r3_catalog))]


def random_zero_fixing(r: int, rng: random.Random) -> PointPerm:
    rest = list(range(1, 1 << r))
    rng.shuffle(rest)
    return PointPerm(r, tuple([0] + rest))


@pytest.fixture()
def rng():
    return random.Random(20240817)
