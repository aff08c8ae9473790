"""Shared fixtures plus a terminal summary of the acceptance checks."""

import re

import pytest

from persistlab.geometry import Ball, box, interval
from persistlab.sampler import multivariate_model, one_dim_model


@pytest.fixture(scope="session")
def ball():
    return Ball((3.0, 0.0), 1.0)


@pytest.fixture(scope="session")
def square():
    return box((1.0, 1.0), (2.0, 2.0))


@pytest.fixture(scope="session")
def offset_box():
    return box((1.0, 2.0), (2.0, 3.0))


@pytest.fixture(scope="session")
def unit_interval():
    return interval(1.0, 2.0)


@pytest.fixture(scope="session")
def model15():
    return one_dim_model(1.5)


@pytest.fixture(scope="session")
def mv15():
    return multivariate_model(2, 1.5)


@pytest.fixture(scope="session")
def mv2():
    return multivariate_model(2, 2.0)


_CRITERIA = {
    1: "exponent geometry",
    2: "exponent formulas",
    3: "estimator cross-validation",
    4: "exponent trend",
    5: "optimal path",
    6: "appendix suite",
    7: "projection bound audit",
    8: "determinism",
}


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion that actually ran."""
    verdicts: dict[int, str] = {}
    for status, reports in terminalreporter.stats.items():
        for rep in reports:
            nodeid = getattr(rep, "nodeid", "")
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", nodeid)
            if m is None:
                continue
            num = int(m.group(1))
            if status in ("failed", "error"):
                verdicts[num] = "FAIL"
            elif status == "skipped":
                verdicts.setdefault(num, "SKIP")
            elif status == "passed" and getattr(rep, "when", "call") == "call":
                verdicts.setdefault(num, "PASS")
    if not verdicts:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(verdicts):
        terminalreporter.write_line(
            f"criterion {num} ({_CRITERIA.get(num, '?')}): {verdicts[num]}"
        )
