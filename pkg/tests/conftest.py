import math

import pytest
from hypothesis import HealthCheck, settings

from wigner_psido import GaussPacket, Interval
from wigner_psido.harness import preset, run_sweep

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

X_LOCAL = Interval(-10.0, 10.0)
X_DWELL = Interval(-15.0, 15.0)
K_BOX = Interval(-2 * math.pi, 2 * math.pi)

_ACCEPTANCE = pytest.StashKey[dict]()
_SWEEPS: dict = {}


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}
    config.addinivalue_line("markers", "slow: long-running numerical checks")


@pytest.fixture
def acceptance_log(request):
    """Record one summary line per acceptance criterion."""
    log = request.config.stash[_ACCEPTANCE]

    def record(key, ok, detail=""):
        log[key] = (ok, detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash[_ACCEPTANCE]
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(log, key=lambda k: (int(k.split()[0]), k)):
        ok, detail = log[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def packet():
    return GaussPacket()


@pytest.fixture(scope="session")
def sweep():
    """Preset sweeps, each computed once per session."""
    def get(name):
        if name not in _SWEEPS:
            _SWEEPS[name] = {r.param: r for r in run_sweep(preset(name))}
        return _SWEEPS[name]
    return get
