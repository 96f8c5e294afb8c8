import functools

import pytest
from hypothesis import settings

from platonic_census import SchlafliType, SearchConfig, search

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def run_census(triple, max_solids, orientable, threads=1):
    """Cached search report; enumerations are shared across test files."""
    return search(SearchConfig(SchlafliType(*triple), max_solids, orientable, threads))


def census_sigs(triple, max_solids, orientable):
    return sorted(run_census(triple, max_solids, orientable).signatures)


@pytest.fixture(scope="session")
def census():
    return census_sigs


# one summary line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
