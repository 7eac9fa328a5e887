import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from walshnet import _backend
from walshnet.search import random_net

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(params=_backend.available())
def backend(request):
    prev = _backend.set_backend(request.param)
    yield request.param
    _backend.set_backend(prev)


@st.composite
def small_nets(draw, max_sn=16, max_s=4, min_d=0):
    """Random nets with ``s * n <= max_sn``."""
    s = draw(st.integers(1, max_s))
    n = draw(st.integers(1, max(1, min(max_sn // s, 16))))
    d = draw(st.integers(min(min_d, s * n), s * n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_net(s, n, d, seed)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        for _, line in mod.RESULTS[num]:
            terminalreporter.write_line(line)
