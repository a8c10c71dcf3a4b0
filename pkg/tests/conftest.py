import numpy as np
import pytest

from latchsim import QubitParams

TWO_PI = 2.0 * np.pi

# device working point used throughout (qubit at 2.62 GHz, coupling 20 MHz,
# latching amplitude 100 MHz, Gamma_1 = 1.2 MHz, Gamma_2 = 3.1 MHz, 50 mK)
DELTA = TWO_PI * 100e6
G = TWO_PI * 20e6
OMEGA0 = TWO_PI * 2.62e9
GAMMA1 = TWO_PI * 1.2e6
GAMMA_PHI = TWO_PI * 2.5e6  # Gamma_2 = Gamma_1/2 + Gamma_phi = 2*pi*3.1 MHz


def device_qubit(nu=0.0, t_bath=0.05, g=G):
    """QubitParams at detuning nu with the device rates."""
    return QubitParams(
        omega0=OMEGA0,
        omega=OMEGA0 - nu,
        g=g,
        gamma1=GAMMA1,
        gamma_phi=GAMMA_PHI,
        t_bath=t_bath,
    )


def random_working_point(rng):
    """(nu, delta, g, omega_mod) spanning the experimentally relevant ranges."""
    nu = rng.uniform(-300e6, 300e6) * TWO_PI
    delta = rng.uniform(10e6, 200e6) * TWO_PI
    g = rng.uniform(1e6, 50e6) * TWO_PI
    omega_mod = rng.uniform(5e6, 120e6) * TWO_PI
    return nu, delta, g, omega_mod


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
