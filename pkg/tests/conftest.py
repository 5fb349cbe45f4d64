import pytest
from hypothesis import settings

from magicgroups.catalog import small_nonabelian_groups

settings.register_profile('default', deadline=None, max_examples=100)
settings.load_profile('default')


@pytest.fixture(scope='session')
def nonabelian():
    return small_nonabelian_groups()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section('acceptance criteria')
        for line in RESULTS:
            terminalreporter.write_line(line)
