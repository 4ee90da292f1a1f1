# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

from fractions import Fraction
import pytest
from hypothesis import HealthCheck, settings
from thetaplane.coefficient_ring import ThetaMatrix
from thetaplane.config import AppConfig
from thetaplane.matrix_algebra import AlgMatrix, JetContext
from thetaplane.theta_algebra import AlgebraSignature, Mode

settings.register_profile(
    "thetaplane",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("thetaplane")


@pytest.fixture
def sig1() -> AlgebraSignature:
    return AlgebraSignature(1, 2)


@pytest.fixture
def sig2() -> AlgebraSignature:
    return AlgebraSignature(2, 4)


@pytest.fixture
def sig2_odd() -> AlgebraSignature:
    return AlgebraSignature(2, 5)


@pytest.fixture
def sig3() -> AlgebraSignature:
    return AlgebraSignature(3, 6)


@pytest.fixture
def theta2() -> ThetaMatrix:
    return ThetaMatrix.from_angles(2, {(2, 1): Fraction(1, 2)})


@pytest.fixture
def sig2_numeric(theta2: ThetaMatrix) -> AlgebraSignature:
    return AlgebraSignature(2, 4, Mode.NUMERIC, theta2)


@pytest.fixture
def ctx3() -> JetContext:
    return JetContext(3)


@pytest.fixture
def e2(sig2: AlgebraSignature) -> AlgMatrix:
    return AlgMatrix.standard_projector(sig2, 2, 1)


@pytest.fixture
def app_cfg() -> AppConfig:
    return AppConfig()
