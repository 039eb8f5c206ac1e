import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("tl", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("tl")


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache(tmp_path_factory):
    os.environ["TL_CACHE_DIR"] = str(tmp_path_factory.mktemp("tl-cache"))
    yield


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(n, title) is a context manager that marks PASS unless the body raises."""
    import contextlib
    import time

    @contextlib.contextmanager
    def record(number, title):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            _CRITERIA[number] = f"criterion {number:>2}: FAIL  {title} ({type(exc).__name__})"
            print(_CRITERIA[number])
            raise
        _CRITERIA[number] = f"criterion {number:>2}: PASS  {title} [{time.perf_counter() - start:.1f}s]"
        print(_CRITERIA[number])

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
