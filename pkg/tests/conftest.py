import functools

import pytest

from fracdual.bench import load_fixture
from fracdual.dual import dual_solve


@functools.lru_cache(maxsize=None)
def fixture_report(name: str):
    """Memoized dual solve of a shipped fixture (shared across tests)."""
    problem = load_fixture(name)
    report = dual_solve(problem.equation, problem.config(), threshold=problem.threshold)
    return problem, report


@pytest.fixture(scope="session")
def solved_fixture():
    return fixture_report
