import math
import time
from contextlib import contextmanager

import pytest

from qseal.rng import RandomStream


def within_sigma(hits: int, trials: int, p: float, z: float = 4.0) -> bool:
    """``hits / trials`` lies within ``z`` binomial standard errors of ``p``."""
    se = math.sqrt(max(p * (1 - p), 1e-12) / trials)
    return abs(hits / trials - p) <= z * se


class ScriptedStream(RandomStream):
    """RandomStream whose ``random()`` replays a fixed script; other draws
    come from the seeded generator."""

    __slots__ = ("_script",)

    def __init__(self, script, seed: int = 0):
        super().__init__(seed)
        self._script = list(script)

    def random(self) -> float:
        return self._script.pop(0) if self._script else super().random()


@pytest.fixture
def rng():
    return RandomStream(12345)


_CRITERIA: dict[int, tuple[str, str, float]] = {}


@contextmanager
def within_budget(seconds: float):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f} s, budget {seconds} s"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    _CRITERIA[number] = (title, "PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, verdict, duration = _CRITERIA[number]
        terminalreporter.write_line(f"[{verdict}] {number:>2} {title} ({duration:.2f} s)")
