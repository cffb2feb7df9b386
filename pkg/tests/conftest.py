import mpmath
import pytest

from silkswap.invariant import PoolParams

mpmath.mp.dps = 50


def fd(fn, at, h=None):
    """Central difference of ``fn`` at ``at`` in 50-digit arithmetic."""
    at = mpmath.mpf(at)
    h = h or at * mpmath.mpf("1e-20")
    return (fn(at + h) - fn(at - h)) / (2 * h)


def fd2(fn, at, h=None):
    at = mpmath.mpf(at)
    h = h or at * mpmath.mpf("1e-12")
    return (fn(at + h) - 2 * fn(at) + fn(at - h)) / (h * h)


def rel_err(got, ref) -> float:
    got, ref = mpmath.mpf(got), mpmath.mpf(ref)
    if ref == 0:
        return float(abs(got))
    return float(abs(got - ref) / abs(ref))


@pytest.fixture
def paper_params():
    return PoolParams(100.0, 8, 8)


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
