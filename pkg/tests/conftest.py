import time

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dialccs.syntax import NIL, Input, Output, Par, Sum, Tau

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CHANS = st.sampled_from(["a", "b", "c"])


def _extend(children):
    return st.one_of(
        st.builds(Tau, children),
        st.builds(Input, CHANS, children),
        st.builds(Par, children, children),
        st.builds(Sum, children, children),
    )


terms = st.recursive(st.one_of(st.just(NIL), st.builds(Output, CHANS)), _extend, max_leaves=4)


# -- acceptance report -------------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    n, title = marker.args
    elapsed = dict(item.user_properties).get("elapsed", 0.0)
    entry = _criteria.setdefault(n, {"titles": [], "ok": True, "elapsed": 0.0, "tests": 0})
    entry["titles"].append(title)
    entry["ok"] &= rep.passed
    entry["elapsed"] += elapsed
    entry["tests"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        status = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(
            f"criterion {n}: {status}  {'; '.join(e['titles'])}  ({e['tests']} tests, {e['elapsed']:.1f}s)")
