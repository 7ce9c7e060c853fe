import time

import numpy as np
import pytest

# criterion number -> (title, passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def record(number, title, passed, detail=""):
    ACCEPTANCE[number] = (title, bool(passed), detail)
    return bool(passed)


class SuiteCache:
    """First run of each suite, kept for the determinism rerun."""

    def __init__(self):
        self.runs = {}

    def run(self, name, fn, *args):
        if name not in self.runs:
            t0 = time.perf_counter()
            out = fn(*args)
            self.runs[name] = (out, time.perf_counter() - t0, (fn, args))
        return self.runs[name]


@pytest.fixture(scope="session")
def suite_cache():
    return SuiteCache()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        tr.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else ""))
