import pytest

from cuspcorr.coeffs import make_eigenform


@pytest.fixture(scope="session")
def form12():
    return make_eigenform(12, 140_000)


@pytest.fixture(scope="session")
def form16():
    return make_eigenform(16, 140_000)
