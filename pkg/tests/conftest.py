import numpy as np
import pytest

from app.core.config import settings


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def interior_grid():
    """50 points on [-5, 5], inside the series regime of every seed used in tests"""
    return np.linspace(-5, 5, 50)


@pytest.fixture
def no_tol_override(monkeypatch):
    monkeypatch.setattr(settings, "default_tol", None)
