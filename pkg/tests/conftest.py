import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from kvforge.scripts.freelie import LieSeries, TruncationConfig, generators  # noqa: E402
from kvforge.scripts.kvsolve import solve_kv  # noqa: E402
from kvforge.scripts.settings import set_verbose  # noqa: E402


@pytest.fixture(autouse=True)
def quiet_settings(monkeypatch):
    monkeypatch.delenv("KVFORGE_VERBOSE", raising=False)
    monkeypatch.setenv("KVFORGE_THREADS", "2")
    set_verbose(None)
    yield
    set_verbose(None)


@pytest.fixture
def xy():
    return generators(TruncationConfig(2, 6))


@pytest.fixture
def sigma3():
    """The degree-3 generator of grt_1 at N = 5."""
    return LieSeries(TruncationConfig(2, 5), {(0, 0, 1): 1, (0, 1, 1): -1})


@pytest.fixture(scope="session")
def kv_zero():
    return solve_kv(4, "zero")


@pytest.fixture(scope="session")
def kv_unit():
    return solve_kv(4, "unit")
