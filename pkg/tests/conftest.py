import random

import pytest
from hypothesis import strategies as st

from drsop.io import load_standard_instance
from drsop.model import NodeSpec, ProblemSpace, ServiceSpec

NODE_NAMES = "ABCDEFGH"


def random_space(rng: random.Random, l: int, m: int, d: int, homeless: bool = False,
                 tight: float = 1.0) -> ProblemSpace:
    """Random instance; ``tight`` scales capacities (lower means more overload)."""
    kinds = [f"k{i}" for i in range(d)]
    nodes = [NodeSpec(NODE_NAMES[j], tuple(int(rng.randint(5, 30) * tight) for _ in range(d)))
             for j in range(m)]
    homes = [n.id for n in nodes] + (["Z"] if homeless else [])
    services = [ServiceSpec(f"{i + 1:02d}", rng.choice(homes), rng.randint(0, 9),
                            tuple(rng.randint(0, 12) for _ in range(d)))
                for i in range(l)]
    return ProblemSpace(kinds, nodes, services)


@st.composite
def spaces(draw, max_l=6, max_m=4, max_d=3, homeless=True):
    d = draw(st.integers(1, max_d))
    m = draw(st.integers(1, max_m))
    l = draw(st.integers(0, max_l))
    kinds = [f"k{i}" for i in range(d)]
    level = st.integers(0, 20)
    nodes = [NodeSpec(NODE_NAMES[j], tuple(draw(level) for _ in range(d))) for j in range(m)]
    homes = list(NODE_NAMES[:m]) + (["Z"] if homeless else [])
    services = [ServiceSpec(f"{i + 1:02d}", draw(st.sampled_from(homes)), draw(st.integers(0, 9)),
                            tuple(draw(st.integers(0, 10)) for _ in range(d)))
                for i in range(l)]
    return ProblemSpace(kinds, nodes, services)


def stable_space() -> ProblemSpace:
    """Every service fits comfortably where it already is."""
    return ProblemSpace(
        ["cpu", "mem"],
        [NodeSpec("A", (10, 10)), NodeSpec("B", (10, 10))],
        [ServiceSpec("1", "A", 5, (3, 3)), ServiceSpec("2", "B", 2, (4, 4)),
         ServiceSpec("3", "A", 7, (2, 1))],
    )


@pytest.fixture(scope="session")
def standard():
    return load_standard_instance()


@pytest.fixture(scope="session")
def standard_augmented():
    return load_standard_instance(augmented=True)


@pytest.fixture(scope="session")
def test1(standard):
    return standard.restrict(services=[f"{i:02d}" for i in range(1, 21)], nodes="ABCD")


@pytest.fixture(scope="session")
def test2(standard):
    return standard.restrict(services=[f"{i:02d}" for i in range(1, 31)], nodes="ABCDEF")


# one line per acceptance criterion, echoed in the terminal summary
CRITERIA_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)
