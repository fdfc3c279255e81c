from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from thermal_qfi.core.states import (
    PHYSICALITY_TOL,
    SHOT_NOISE,
    GaussianState,
    TwoModeCov,
    coherent_state,
)
from thermal_qfi.core.symplectic import MODE_MAJOR
from thermal_qfi.core.validation import check_physical, environment_cov
from thermal_qfi.errors import DomainError
from thermal_qfi.types import PhysicalityReport


def _check_t0(t0: float) -> None:
    if not 0.0 < t0 <= 1.0:
        raise DomainError(f"t0 must lie in (0,1], got {t0}")


def _check_tau(tau: float) -> None:
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"tau must lie in [0,1], got {tau}")


def _check_omega(name: str, omega: float) -> None:
    if omega < SHOT_NOISE - PHYSICALITY_TOL:
        raise DomainError(f"{name} must be >= 1/2 (shot noise), got {omega}")


@dataclass(frozen=True)
class EnvironmentSpec:
    """
    Decoherence channel: both modes cross beam splitters of transmissivity
    t0 whose other ports carry a Gaussian environment with CM
    [[omega1 I, G], [G, omega2 I]], G = diag(g, g').
    """
    t0: float
    omega1: float
    omega2: float
    g: float = 0.0
    gprime: float = 0.0

    def __post_init__(self):
        _check_t0(self.t0)
        _check_omega("omega1", self.omega1)
        _check_omega("omega2", self.omega2)
        self.report().raise_if_failed()

    @classmethod
    def symmetric(cls, t0: float, omega: float, g: float = 0.0, gprime: Optional[float] = None) -> "EnvironmentSpec":
        return cls(t0=t0, omega1=omega, omega2=omega, g=g, gprime=g if gprime is None else gprime)

    @classmethod
    def from_n_env(
        cls,
        t0: float,
        n_env1: float,
        n_env2: Optional[float] = None,
        g: float = 0.0,
        gprime: Optional[float] = None,
    ) -> "EnvironmentSpec":
        """omega = n_env + 1/2 per environmental mode."""
        n2 = n_env1 if n_env2 is None else n_env2
        if n_env1 < 0 or n2 < 0:
            raise DomainError(f"n_env must be non-negative, got {n_env1}, {n2}")
        return cls(
            t0=t0,
            omega1=n_env1 + SHOT_NOISE,
            omega2=n2 + SHOT_NOISE,
            g=g,
            gprime=g if gprime is None else gprime,
        )

    @property
    def cov(self) -> np.ndarray:
        return environment_cov(self.omega1, self.omega2, self.g, self.gprime)

    @property
    def is_symmetric(self) -> bool:
        return self.omega1 == self.omega2

    def report(self) -> PhysicalityReport:
        return check_physical(self.cov)


@dataclass(frozen=True)
class ChannelParams:
    """Unknown loss `tau` followed by the decoherence channel `env`."""
    tau: float
    env: EnvironmentSpec

    def __post_init__(self):
        _check_tau(self.tau)


def evolve_source(source: GaussianState, params: ChannelParams) -> GaussianState:
    """
    Closed-form output of D o (E_tau x I) on a block-form two-mode state:
      a~ = T0 tau a + T0 (1 - tau)/2 + (1 - T0) omega1
      b~ = T0 b + (1 - T0) omega2
      c1 = T0 sqrt(tau) c + (1 - T0) g,  c2 = T0 sqrt(tau) c' + (1 - T0) g'
    Means: x_A -> sqrt(T0 tau) x_A, x_B -> sqrt(T0) x_B.
    """
    if source.n_modes != 2:
        raise DomainError(f"evolve_source expects a two-mode state, got {source.n_modes} modes")
    tau, env = params.tau, params.env
    t0 = env.t0
    src = source.reordered(MODE_MAJOR)
    cm = TwoModeCov.from_cov(src.cov)
    st = np.sqrt(tau)

    out = TwoModeCov(
        a=t0 * tau * cm.a + t0 * (1.0 - tau) * SHOT_NOISE + (1.0 - t0) * env.omega1,
        b=t0 * cm.b + (1.0 - t0) * env.omega2,
        c1=t0 * st * cm.c1 + (1.0 - t0) * env.g,
        c2=t0 * st * cm.c2 + (1.0 - t0) * env.gprime,
    )
    mean = np.concatenate([np.sqrt(t0 * tau) * src.mean[:2], np.sqrt(t0) * src.mean[2:]])
    return out.to_state(mean)


def evolve_coherent(
    n_bar: float,
    tau: float,
    t0: float,
    omega: float,
    phase: float = 0.0,
) -> GaussianState:
    """
    Coherent probe through E_tau then a single-mode thermal-loss channel:
    mean sqrt(T0 tau) x, CM a' I with a' = T0/2 + (1 - T0) omega.
    """
    _check_tau(tau)
    _check_t0(t0)
    _check_omega("omega", omega)
    probe = coherent_state(n_bar, phase)
    a_prime = t0 * SHOT_NOISE + (1.0 - t0) * omega
    return GaussianState(mean=np.sqrt(t0 * tau) * probe.mean, cov=a_prime * np.eye(2))


def reduced_state(state: GaussianState, mode_index: int) -> GaussianState:
    """Single-mode marginal of `state`."""
    return state.mode_block(mode_index)
