import numpy as np
import pytest

from kslab.estimates import calibrate_constants
from kslab.noise import make_stream
from kslab.spectral import DomainSpec

CALIBRATION_STREAM = 2**48


@pytest.fixture(scope="session")
def default_dom() -> DomainSpec:
    return DomainSpec(half_length=16.0, shift=0.5, modes=64)


@pytest.fixture(scope="session")
def ledger(default_dom):
    """Calibrated constants for the default domain, 10^4 samples, seed 0."""
    return calibrate_constants(default_dom, 10000, make_stream(0, CALIBRATION_STREAM))


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
