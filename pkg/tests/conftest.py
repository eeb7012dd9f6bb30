import numpy as np
import pytest


def random_unit(rng, n):
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return c / np.linalg.norm(c)


def random_settings(rng, n):
    from unitary_fanout.synthesis import TreeSettings, tree_depth

    depth = tree_depth(n)
    alphas = tuple(rng.uniform(0, np.pi / 2, 2 ** k) for k in range(depth))
    return TreeSettings(alphas, rng.uniform(0, 2 * np.pi, n))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def record_criterion(name, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
