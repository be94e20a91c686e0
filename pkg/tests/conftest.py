import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def criterion(pytestconfig):
    """record(n, ok, text): print one PASS/FAIL line and assert ``ok``."""

    def record(n: int, ok: bool, text: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {n}: {text}"
        pytestconfig.stash[_LINES].append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
