"""Pytest configuration and fixtures."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the service root to the path so packages import top-level
service_path = Path(__file__).parent.parent
sys.path.insert(0, str(service_path))

from fastapi.testclient import TestClient  # noqa: E402

from app.main import app  # noqa: E402
from registry import get  # noqa: E402
from solver import ShootConfig, integrate, shoot  # noqa: E402


@pytest.fixture
def client():
    """FastAPI test client."""
    return TestClient(app)


@pytest.fixture
def rng():
    """Seeded generator for random sample points."""
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def resource():
    """Exhaustible-resource entry with gamma=1/2, alpha=beta=1/4, x0=1, xT=0.5, T=1."""
    return get("exhaustible-resource")


@pytest.fixture(scope="session")
def quadratic():
    """Quadratic-translation entry."""
    return get("quadratic-translation")


@pytest.fixture(scope="session")
def resource_oracle(resource):
    """Euler-Lagrange reference on the 1000-interval grid."""
    return resource.oracle(np.linspace(0.0, 1.0, 1001))


@pytest.fixture(scope="session")
def resource_arc(resource, resource_oracle):
    """RK4 arc integrated from the reference initial costate, N = 1000."""
    return integrate(
        resource.problem, -1.0, [resource_oracle.psi_a], resource.seeds, N=1000
    )


@pytest.fixture(scope="session")
def resource_shot(resource, resource_oracle):
    """Shooting solution from 1.5 times the reference initial costate."""
    return shoot(resource.problem, [1.5 * resource_oracle.psi_a], ShootConfig(grid=1000), seeds=resource.seeds)


@pytest.fixture(scope="session")
def quadratic_arc(quadratic):
    """Shooting solution of the quadratic problem from psi_a = 0, N = 1000."""
    return shoot(quadratic.problem, [0.0], ShootConfig(grid=1000), seeds=quadratic.seeds)
