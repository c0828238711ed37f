import random

import pytest
from hypothesis import HealthCheck, settings

from lowkgreen.examples import Example1Params, Example2Params

settings.register_profile("lowk", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lowk")


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture
def ex1():
    return Example1Params()


@pytest.fixture
def ex2():
    return Example2Params()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
