import sys

import pytest

from stackhom.linalg import Coefficients
from stackhom.spacefile import load_space

Z = Coefficients.integers()
Q = Coefficients.rationals()
F2 = Coefficients.prime_field(2)
F3 = Coefficients.prime_field(3)


@pytest.fixture(scope="session")
def space():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_space("builtin:" + name)
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        ok, title = mod.RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}")
