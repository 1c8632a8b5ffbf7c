"""Session-wide fixtures: the instance pool and one shared suite run."""

import time

import pytest

import helpers
from prop_suites import ALL_SUITES


@pytest.fixture(scope="session")
def instance_pool():
    return helpers.build_pool()


@pytest.fixture(scope="session")
def prop_results(instance_pool):
    """Run every property suite once; unit and acceptance tests both read it."""
    results = {}
    start = time.perf_counter()
    for suite in ALL_SUITES:
        res = suite(instance_pool)
        results[res.name] = res
    elapsed = time.perf_counter() - start
    return {"results": results, "elapsed": elapsed}
