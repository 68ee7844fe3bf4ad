import pytest

from mahowald.gradedmod import sphere_module
from mahowald.resolution import minimal_resolution


@pytest.fixture(scope="session")
def sphere_res8():
    """Shared resolution of the sphere: s <= 8, t <= 24 (stems through 16)."""
    return minimal_resolution(sphere_module(0), 8, 24)
