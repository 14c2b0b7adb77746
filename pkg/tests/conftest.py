import numpy as np
import pytest

from snailkit import ResonatorGeometry, SnailConfig
from snailkit.units import TWO_PI, ghz_to_rad

# The characterized device: asymmetry, series junction inductance, bare line.
BETA = 0.0993
L_J = 629e-12
OMEGA_R0 = ghz_to_rad(8.87)
Z_C = 58.7
OP_FLUX = 0.386


@pytest.fixture
def config():
    """Device SNAIL at zero external flux."""
    return SnailConfig(beta=BETA, l_j=L_J, phi_ext=0.0)


@pytest.fixture
def config_op():
    """Device SNAIL at the operating flux."""
    return SnailConfig(beta=BETA, l_j=L_J, phi_ext=TWO_PI * OP_FLUX)


@pytest.fixture
def geometry():
    return ResonatorGeometry(omega_r0=OMEGA_R0, z_c=Z_C)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
