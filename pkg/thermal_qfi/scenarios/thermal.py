from __future__ import annotations

import numpy as np
from scipy.constants import Planck, Boltzmann

from thermal_qfi.core.states import SHOT_NOISE
from thermal_qfi.errors import DomainError


def mean_thermal_photons(frequency_hz: float, temperature_k: float) -> float:
    """
    Bose-Einstein occupation 1 / (exp(h f / k T) - 1).
    3.5 THz at 300 K gives about 1.33; 300 GHz at 300 K about 20.3.
    """
    if not frequency_hz > 0:
        raise DomainError(f"frequency must be positive, got {frequency_hz}")
    if temperature_k < 0:
        raise DomainError(f"temperature must be non-negative, got {temperature_k}")
    if temperature_k == 0:
        return 0.0
    x = Planck * frequency_hz / (Boltzmann * temperature_k)
    return float(1.0 / np.expm1(x))


def environment_omega(frequency_hz: float, temperature_k: float) -> float:
    """omega = n_env + 1/2 for a bath in thermal equilibrium."""
    return mean_thermal_photons(frequency_hz, temperature_k) + SHOT_NOISE
