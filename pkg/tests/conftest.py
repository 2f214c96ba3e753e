from contextlib import contextmanager

import pytest

_results_key = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_results_key] = []


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance criterion as PASS/FAIL."""
    results = request.config.stash[_results_key]

    @contextmanager
    def record(number: int, title: str):
        try:
            yield
        except BaseException:
            results.append((number, title, False))
            raise
        results.append((number, title, True))

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_results_key, [])
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, title, ok in sorted(results):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  [{number:>2}] {title}")
