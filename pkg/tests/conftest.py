import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile('default', max_examples=40, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('default')


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = {}


@pytest.fixture
def acceptance(capsys):
    """Record a one-line PASS/FAIL report for an acceptance criterion, then assert it."""
    def report(number, ok, detail):
        line = f'criterion {number:>2}: {"PASS" if ok else "FAIL"}  {detail}'
        _ACCEPTANCE[number] = line
        with capsys.disabled():
            print('\n' + line)
        assert ok, line
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section('acceptance criteria')
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
