import pytest

from binomci.intervals import DETERMINISTIC_METHODS, ConfidenceSpec, Method, SampleSummary, compute

ALPHAS = (0.01, 0.05, 0.10)
MAX_N = 60
STEVENS_US = (0.1, 0.5, 0.9)


@pytest.fixture(scope="session")
def exhaustive_intervals():
    """Every interval for n <= 60, all x, the three alphas.

    Keys are (method, n, x, alpha) for deterministic methods and
    (Method.STEVENS, n, x, alpha, u) for the randomized one.
    """
    table = {}
    for alpha in ALPHAS:
        spec = ConfidenceSpec(alpha)
        for n in range(1, MAX_N + 1):
            for x in range(n + 1):
                sample = SampleSummary(n, x)
                for method in DETERMINISTIC_METHODS:
                    table[method, n, x, alpha] = compute(method, sample, spec)
                for u in STEVENS_US:
                    table[Method.STEVENS, n, x, alpha, u] = compute(Method.STEVENS, sample, spec, u=u)
    return table


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
