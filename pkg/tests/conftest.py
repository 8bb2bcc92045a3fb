import math

import numpy as np
import pytest

from carlab import Exponents, make_grid


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64, 4.0)


@pytest.fixture(scope="session")
def grid128():
    return make_grid(128, 4.0)


@pytest.fixture(scope="session")
def grid256():
    return make_grid(256, 4.0)


@pytest.fixture(scope="session")
def grid512():
    return make_grid(512, 4.0)


@pytest.fixture(scope="session")
def wide512():
    # 16 pi half width puts the frequency lattice at spacing 1/16, making the
    # dyadic bands around |zeta| ~ 1 resolvable
    return make_grid(512, 16 * math.pi)


@pytest.fixture(scope="session")
def wide1024():
    return make_grid(1024, 16 * math.pi)


@pytest.fixture(scope="session")
def gap_exponents():
    return Exponents.from_p(4.0 / 3.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)


def l2_err(a, b):
    num = np.sqrt(np.sum(np.abs(a - b) ** 2))
    den = np.sqrt(np.sum(np.abs(b) ** 2))
    return num / den
