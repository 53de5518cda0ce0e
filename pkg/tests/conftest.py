import pytest

from pcspwb.core import builtin_template


@pytest.fixture(scope="session")
def one_in_three():
    return builtin_template("one-in-three")


@pytest.fixture(scope="session")
def nae():
    return builtin_template("nae")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
