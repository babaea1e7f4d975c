import numpy as np
import pytest

from replicator_fl.dynamics import JointState
from replicator_fl.equilibrium import solve_interior_nash
from replicator_fl.game import PENALTY_SHOOTOUT, build_zero_sum

FIG2_X = [0.51, 0.42, 0.07]
FIG2_Y = [0.42, 0.27, 0.31]


@pytest.fixture(scope="session")
def game():
    return build_zero_sum(PENALTY_SHOOTOUT)


@pytest.fixture(scope="session")
def ne(game):
    return solve_interior_nash(game)


@pytest.fixture
def fig2_state():
    return JointState.of(FIG2_X, FIG2_Y)


def random_simplex(rng, n, size=None):
    return rng.dirichlet(np.ones(n), size=size)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(label: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"{label} {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
