import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nlifo.config import build_scenario, load_preset
from nlifo.dispersion import SourceParams, TaylorDispersion

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def scenarios():
    return {name: build_scenario(load_preset(name)) for name in ("flat_low", "flat_high", "skewed_low", "skewed_high")}


@pytest.fixture
def src():
    return SourceParams(644e-9, 845e-9, 0.04, gamma_mag=1.0 / 0.04)


@pytest.fixture
def taylor():
    return TaylorDispersion.engineered(7.7e-9, 3.5e-25, -2.5e-39)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_acceptance = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _acceptance.get(marker, "PASS")
        _acceptance[marker] = prev if report.outcome == "passed" else "FAIL"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        outcome.get_result().acceptance = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_acceptance.items()):
        terminalreporter.write_line(f"{status} criterion {number:>2}: {title}")
