import numpy as np
import pytest

from stablekurt.distributions import SeedSpec

ACCEPTANCE_LINES = []


@pytest.fixture
def seed():
    return SeedSpec(20261016)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def accept():
    """Record one pass/fail line per criterion, then assert every check."""

    def record(number, checks, detail):
        ok = all(checks.values())
        failed = [name for name, good in checks.items() if not good]
        tail = f" (failed: {', '.join(failed)})" if failed else ""
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}{tail}")
        assert ok, f"criterion {number} failed: {failed}; {detail}"

    return record
