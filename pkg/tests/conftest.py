import numpy as np
import pytest

from dp2online import FiniteHypothesisClass, calibrate_sample_complexity


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def thresholds4():
    return FiniteHypothesisClass.thresholds(4)


@pytest.fixture(scope="session")
def thresholds8():
    return FiniteHypothesisClass.thresholds(8)


@pytest.fixture(scope="session")
def m0_thresholds4(thresholds4):
    return calibrate_sample_complexity(thresholds4, 0.25, 0.5, 0.1, trials=2000,
                                       random_state=0)


@pytest.fixture(scope="session")
def m0_thresholds8(thresholds8):
    return calibrate_sample_complexity(thresholds8, 0.25, 0.5, 0.1, trials=2000,
                                       random_state=0)


def within_sigmas(freq, p, n, k=3.0):
    return abs(freq - p) <= k * np.sqrt(p * (1 - p) / n)


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line: ``report(criterion, passed, detail)``."""

    def _record(criterion, passed, detail):
        line = f"{criterion} {'PASS' if passed else 'FAIL'}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
