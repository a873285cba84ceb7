import pytest

from icis.parser import parse_poly

XYZ = ("x", "y", "z")


def P(text, gens=XYZ):
    return parse_poly(text, gens)


@pytest.fixture
def xyz():
    return XYZ


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.summary_line(n))
