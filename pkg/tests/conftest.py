import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nearfield import CarrierConfig, build_ula, wavelength

settings.register_profile(
    "default",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

F28 = 28e9
C = 299792458.0
LAM28 = C / F28


@pytest.fixture(scope="session")
def ula64():
    return build_ula(64, LAM28 / 2)


@pytest.fixture(scope="session")
def ula256():
    return build_ula(256, LAM28 / 2)


@pytest.fixture(scope="session")
def carrier28():
    return CarrierConfig(F28)
