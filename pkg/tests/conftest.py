"""
Global pytest configuration for petic tests.

This file contains fixtures that keep tests isolated from each other and from the
environment: configuration overrides are undone and PETIC_ variables are removed.
"""

import os
import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent.parent))

from petic.config import reset_config  # noqa: E402
from tests.toy import toy_scenario  # noqa: E402


def pytest_configure(config):
    """Register custom markers and use auto mode for async tests."""
    config.option.asyncio_mode = "auto"
    config.addinivalue_line("markers", "slow: long-running simulation tests")


@pytest.fixture(autouse=True)
def clean_env_vars():
    """Remove PETIC_ variables and restore the configuration after each test."""
    original_env = os.environ.copy()

    for key in [k for k in os.environ if k.startswith("PETIC_")]:
        del os.environ[key]
    reset_config()

    yield

    os.environ.clear()
    os.environ.update(original_env)
    reset_config()


@pytest.fixture
def stable_scenario():
    """Scalar follower with contracting drift and a delay-free controller."""
    return toy_scenario()


@pytest.fixture
def noisy_scenario():
    """Scalar follower with multiplicative noise, so sample paths depend on the seed."""
    return toy_scenario(c=0.5, d=0.4)


@pytest.fixture
def delayed_scenario():
    """Unstable scalar follower stabilised by the delayed controller."""
    return toy_scenario(c=2.0, d=0.1, gain=0.3, mode="delayed", delay=0.05)
