import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "gfs2d",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "gfs2d"))

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    failed = rep.failed
    if rep.when == "call" or failed:
        prev = _CRITERIA.get(n, (title, True))
        _CRITERIA[n] = (title, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def column_dual():
    from gfs2d import ColumnZ, ConstantPhase, ExampleX, LebesgueExponent, PhaseWitness, build_dual

    return build_dual(ColumnZ(), ExampleX(1.0, 1.0), LebesgueExponent(2), PhaseWitness(ConstantPhase(1.0)))


@pytest.fixture(scope="session")
def plain_dual():
    from gfs2d import ConstantWeight, LebesgueExponent, Point, build_dual

    return build_dual(Point(0, 0), ConstantWeight(), LebesgueExponent(2))
