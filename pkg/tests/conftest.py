import random
import time

import pytest
from hypothesis import HealthCheck, settings

from dejean_forge.words import find_forbidden_naive, threshold_ratio

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

ACCEPTANCE = []


def grow_threshold(n, length, rng, bound=None):
    """Random threshold word by backtracking."""
    bound = bound or threshold_ratio(n)
    w = []

    def rec():
        if len(w) == length:
            return True
        opts = list(range(n))
        rng.shuffle(opts)
        for a in opts:
            w.append(a)
            if find_forbidden_naive(w, bound) is None and rec():
                return True
            w.pop()
        return False

    if not rec():
        raise RuntimeError("no threshold word of that length")
    return w


@pytest.fixture(scope="session")
def threshold_word():
    return grow_threshold


@pytest.fixture(scope="session")
def construction():
    from dejean_forge.conjugacy import class_keys
    from dejean_forge.constructions import build_roots, materialize
    cache = {}

    def get(n):
        if n not in cache:
            rf = build_roots(n)
            cache[n] = (rf, materialize(rf), class_keys(rf))
        return cache[n]
    return get


@pytest.fixture
def acceptance():
    """Records one PASS/FAIL line for the terminal summary."""
    def record(number, name, passed, started, detail=""):
        ACCEPTANCE.append((number, name, passed, time.perf_counter() - started, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, secs, detail in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {name}  ({secs:.1f}s)  {detail}")
