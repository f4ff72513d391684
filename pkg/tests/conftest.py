from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from wpme.mesh import assemble, build_mesh
from wpme.weights import WeightSpec

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

REPO = Path(__file__).resolve().parents[1]
ACCEPTANCE_CONFIGS = REPO / "configs" / "acceptance"


@pytest.fixture
def unit_ops():
    return assemble(WeightSpec(), build_mesh((0.0, 1.0), 64))


@pytest.fixture
def radial_ops():
    return assemble(WeightSpec.radial(3), build_mesh((0.0, 1.0), 128, 2.0))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
