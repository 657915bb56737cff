import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from magbilap import MagneticGraph

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def path_graph(n, b=None, theta=None, mu=None, frontier=False):
    """Path 0-1-...-(n-1) rooted at 0."""
    k = np.arange(n - 1)
    fr = None
    if frontier:
        fr = np.zeros(n, dtype=bool)
        fr[-1] = True
    return MagneticGraph([str(i) for i in range(n)], np.ones(n) if mu is None else mu, k, k + 1,
                         np.ones(n - 1) if b is None else b, theta, root=0, frontier=fr)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE = {}


def record(number, title, passed, detail=""):
    """Store one acceptance line; printed at the end of the session."""
    ACCEPTANCE[number] = (title, bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {k:>2}. {title}: {detail}")
