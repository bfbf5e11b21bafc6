import random

import pytest
from hypothesis import settings

from operadica.io import property_seed

settings.register_profile("operadica", derandomize=True, max_examples=60, deadline=None)
settings.load_profile("operadica")

ACCEPTANCE = []


@pytest.fixture
def seed():
    return property_seed()


@pytest.fixture
def rng(seed):
    return random.Random(seed)


def pytest_report_header(config):
    return f"operadica property seed: {property_seed()} (override with OPERADICA_SEED)"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    terminalreporter.write_line(f"seed {property_seed()}")
    for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
