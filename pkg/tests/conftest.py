import os

import pytest
from hypothesis import settings

from fastconnect import _backend

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# lines collected by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture(params=_backend.available())
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
