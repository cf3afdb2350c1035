import cmath
import math

import pytest

from mlsurf import iwasawa, metric, spectral

# Default generic test point: a1 = 1.3, psi = -1, lambda = e^{i pi/5}.
A1 = 1.3
PSI = complex(-1.0, 0.0)
THETA = math.pi / 5.0


@pytest.fixture(scope="session")
def profile():
    return metric.profile_from_a1_psi(A1, PSI)


@pytest.fixture(scope="session")
def lam():
    return cmath.exp(1j * THETA)


@pytest.fixture(scope="session")
def dmat(profile, lam):
    return spectral.build_D(profile, lam)


@pytest.fixture(scope="session")
def spec(profile, dmat):
    return spectral.eigen(dmat, profile.beta, profile.psi)


@pytest.fixture(scope="session")
def factors(profile, lam):
    # factors at the y used by most frame tests
    return iwasawa.factors_at(profile, lam, 0.6)
