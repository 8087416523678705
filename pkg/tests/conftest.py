import numpy as np
import pytest
from hypothesis import settings

from qroc.linalg import random_density

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_pair(rng, dim, rank_p=None, rank_n=None):
    return random_density(dim, rng, rank_p), random_density(dim, rng, rank_n)


def diag_state(*p):
    return np.diag(np.asarray(p, dtype=complex))


#: (label, passed, detail) verdicts of the acceptance suite, echoed after the run
ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(ACCEPTANCE, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(rows, key=lambda r: int(r[0][1:])):
        terminalreporter.write_line(f"{label} {'PASS' if ok else 'FAIL'}  {detail}")
