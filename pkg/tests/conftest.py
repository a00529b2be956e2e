# tests/conftest.py
import pytest

from data_models.requests import BathSpec, QubitPairParams


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="Executa também os testes marcados como slow.")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="precisa de --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def reference_params() -> QubitPairParams:
    """eps1 = eps2 = 0.2, J = 1, gamma = 0.5, delta = 0.1."""
    return QubitPairParams(eps1=0.2, eps2=0.2, J=1.0, gamma=0.5, delta=0.1)


@pytest.fixture
def reference_bath() -> BathSpec:
    return BathSpec(K=0.05, T=0.2, omega_c=7.5)
