"""Shared fixtures."""

import pytest

from jacobi_scattering.config import get_config


@pytest.fixture(autouse=True)
def default_settings():
    """Run every test against the default settings."""
    get_config().reset()
    yield
    get_config().reset()
