import pytest

from sphconv import radial

_RESULTS = pytest.StashKey[dict]()


@pytest.fixture
def bump():
    return radial.bump(1.0)


@pytest.fixture
def acceptance_results(request):
    return request.config.stash.setdefault(_RESULTS, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(results):
        passed, n, secs = results[i]
        terminalreporter.write_line(
            f"criterion {i}: {'PASS' if passed else 'FAIL'} ({n} cases, {secs:.1f} s)")
