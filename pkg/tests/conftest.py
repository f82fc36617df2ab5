import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hvalg import HV, Box, FieldSpec, GammaSpec, default_box  # noqa: E402

_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")
    config.addinivalue_line("markers", "slow: long-running solver or oracle test")


@pytest.fixture(scope="session")
def q():
    return FieldSpec()


@pytest.fixture(scope="session")
def q2():
    return FieldSpec(2, (-2, 0))


@pytest.fixture(scope="session")
def hv(q):
    return HV(GammaSpec(q, [1]))


@pytest.fixture(scope="session")
def hv2(q2):
    return HV(GammaSpec(q2, [1, q2.theta()]))


@pytest.fixture(scope="session")
def box(hv):
    return default_box(hv.gamma)


@pytest.fixture(scope="session")
def small_box(hv):
    return Box.ball(hv.gamma, 2, 2, 2)


@pytest.fixture(scope="session")
def box2(hv2):
    return default_box(hv2.gamma)


def pytest_runtest_logreport(report):
    label = getattr(report, "criterion", None)
    for name, value in report.user_properties:
        if name == "criterion":
            label = value
    if label is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.append(("PASS" if report.outcome == "passed" else "FAIL", label))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, label in sorted(_ACCEPTANCE, key=lambda x: int(x[1].split(":")[0])):
        terminalreporter.write_line(f"{status} {label}")
