import numpy as np
import pytest

from thermal_qfi.channels.loss import EnvironmentSpec
from thermal_qfi.core.states import SHOT_NOISE


def random_environment(rng: np.random.Generator, t0=None, omega_max: float = 50.0) -> EnvironmentSpec:
    """
    Physical environment: |g|, |g'| <= sqrt((omega1 - 1/2)(omega2 - 1/2))
    keeps every corner of the (g, g') square inside the physical region.
    """
    w1 = SHOT_NOISE + rng.uniform(0.0, omega_max)
    w2 = SHOT_NOISE + rng.uniform(0.0, omega_max)
    bound = np.sqrt((w1 - SHOT_NOISE) * (w2 - SHOT_NOISE))
    g, gp = rng.uniform(-bound, bound, size=2)
    return EnvironmentSpec(
        t0=float(rng.uniform(0.05, 1.0) if t0 is None else t0),
        omega1=float(w1),
        omega2=float(w2),
        g=float(g),
        gprime=float(gp),
    )


def random_symplectic_cov(rng: np.random.Generator, nu_min: float = 0.6, nu_max: float = 5.0) -> np.ndarray:
    """
    Random physical two-mode CM (mode-major): Williamson form
    diag(nu1, nu1, nu2, nu2) dressed by squeezers and a beam splitter.
    """
    from thermal_qfi.core.symplectic import beam_splitter

    nu = rng.uniform(nu_min, nu_max, size=2)
    d = np.diag([nu[0], nu[0], nu[1], nu[1]])
    r = rng.uniform(-0.5, 0.5, size=2)
    sq = np.diag([np.exp(r[0]), np.exp(-r[0]), np.exp(r[1]), np.exp(-r[1])])
    theta = rng.uniform(0, 2 * np.pi)
    rot = np.eye(4)
    rot[:2, :2] = [[np.cos(theta), np.sin(theta)], [-np.sin(theta), np.cos(theta)]]
    s = beam_splitter(rng.uniform(0.0, 1.0)) @ rot @ sq
    v = s @ d @ s.T
    return 0.5 * (v + v.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
