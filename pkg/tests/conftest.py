import pytest

from sudler import PrecisionConfig, const_phi


@pytest.fixture(scope="session")
def cfg():
    return PrecisionConfig(bits=128)


@pytest.fixture(scope="session")
def cfg256():
    return PrecisionConfig(bits=256)


@pytest.fixture(scope="session")
def phi(cfg):
    return const_phi(cfg)
