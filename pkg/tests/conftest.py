import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("PURSUIT_HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _reset_budgets():
    from pursuit import config

    config.set_current(None)
    yield
    config.set_current(None)
