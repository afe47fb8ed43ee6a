import random

import pytest

from algebroids.model import HEISENBERG, SL2, SO3, abelian, direct_sum_with_center, lie_algebra, lie_poisson, tangent_algebroid
from algebroids.poly import Poly

ACCEPTANCE_LINES: list[str] = []


def random_poly(ring, rng: random.Random, degree: int = 2, nvars: int | None = None, density: float = 0.5) -> Poly:
    nv = ring.nvars if nvars is None else nvars
    terms = {}
    for e in ring.monomials_up_to(degree, nv):
        if rng.random() < density:
            terms[e] = rng.randint(-3, 3)
    return Poly(ring, terms)


def random_section(A, rng, degree=1):
    return tuple(random_poly(A.ring, rng, degree, A.base_dim) for _ in range(A.rank))


@pytest.fixture(scope="session")
def sl2():
    return lie_algebra(3, SL2, "sl2")


@pytest.fixture(scope="session")
def heis():
    return lie_algebra(3, HEISENBERG, "heisenberg")


@pytest.fixture(scope="session")
def so3():
    return lie_algebra(3, SO3, "so3")


@pytest.fixture(scope="session")
def lp():
    return lie_poisson(3, SO3, "lie_poisson(so3)")


@pytest.fixture(scope="session")
def t1():
    return tangent_algebroid(1)


@pytest.fixture(scope="session")
def t2():
    return tangent_algebroid(2)


@pytest.fixture(scope="session")
def ab3():
    return abelian(3)


@pytest.fixture(scope="session")
def h4(so3):
    return direct_sum_with_center(so3, 1, "h4_central")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
