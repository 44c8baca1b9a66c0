import time

import numpy as np
import pytest

from permpoly.gf_arith import make_field

SMALL_FIELDS = [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 1, 4), (2, 2, 2)]

_RESULTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, text): acceptance criterion")


@pytest.fixture(params=SMALL_FIELDS, ids=lambda t: "F%d^%d^%d" % t)
def small_field(request):
    return make_field(*request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    num, text = mark.args
    _RESULTS.append((num, text, rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, text, ok, dur in sorted(_RESULTS, key=lambda r: r[0]):
        terminalreporter.write_line(
            "criterion %2d: %s  %-60s (%.2fs)" % (num, "PASS" if ok else "FAIL", text, dur)
        )


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
