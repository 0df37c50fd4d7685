import pytest

from lcdist import orbit

# one pass/fail line per acceptance criterion, printed in the terminal
# summary so the result survives pytest's output capture
_acceptance_lines: list[tuple[int, str]] = []


def record_acceptance(number: int, label: str, passed: bool, detail: str = ""):
    status = "PASS" if passed else "FAIL"
    suffix = f" ({detail})" if detail else ""
    _acceptance_lines.append((number, f"{status} criterion {number}: {label}{suffix}"))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)


class _CensusCache(dict):
    """Lazy per-q census store shared across the whole session."""

    def __missing__(self, q):
        self[q] = orbit.full_census(q)
        return self[q]


@pytest.fixture(scope="session")
def censuses():
    return _CensusCache()
