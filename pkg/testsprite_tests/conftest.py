"""
Shared ring fixtures. Rings are immutable and memoize their derived
structures, so one instance per session keeps the sweeps cheap.
"""

import pytest
from hypothesis import HealthCheck, settings

from src.ring_specs import zoo_ring

settings.register_profile("workbench", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("workbench")

SMALL_UNITAL = ["Z2", "Z3", "Z4", "Z6", "F4", "F2xF2", "T2F2", "M2F2"]
SMALL_NONUNITAL = ["2Z4", "2Z8", "2Z6", "J(T2F2)"]


@pytest.fixture(scope="session")
def zoo():
    cache = {}

    def get(name: str):
        if name not in cache:
            cache[name] = zoo_ring(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def z6(zoo):
    return zoo("Z6")


@pytest.fixture(scope="session")
def z4(zoo):
    return zoo("Z4")


@pytest.fixture(scope="session")
def m2f2(zoo):
    return zoo("M2F2")
