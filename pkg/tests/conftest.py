"""Shared fixtures and hypothesis profile for the suite."""
from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from hrcsim import MotionModel, PolicyParams, SimParams

settings.register_profile(
    "suite", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def sim() -> SimParams:
    return SimParams()


@pytest.fixture(scope="session")
def motion() -> MotionModel:
    return MotionModel()


@pytest.fixture(scope="session")
def params() -> PolicyParams:
    return PolicyParams()
