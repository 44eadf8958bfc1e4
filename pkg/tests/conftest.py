import numpy as np
import pytest
from click.testing import CliRunner

# --- Project Imports ---
from models.common import ModelSpace
from services.geometry_service import geometry_service


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20250101)


@pytest.fixture
def s3_points(rng):
    return geometry_service.sample_points(ModelSpace.S3, rng, 8)


@pytest.fixture
def h3_points(rng):
    return geometry_service.sample_points(ModelSpace.H3, rng, 8)


@pytest.fixture
def r3_points(rng):
    return geometry_service.sample_points(ModelSpace.R3, rng, 8)


@pytest.fixture
def points_on(rng):
    """Sampler for any model space: points_on(space, count)."""

    def sample(space: ModelSpace, count: int = 8):
        return geometry_service.sample_points(space, rng, count)

    return sample


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)


def failures(checks) -> list[str]:
    return [f"{c.name}@{c.two_s}: {c.residual:.3g}" for c in checks if not c.passed]
