from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from thermal_qfi.core.states import PHYSICALITY_TOL, SHOT_NOISE
from thermal_qfi.errors import DomainError


@dataclass(frozen=True)
class BenchmarkParams:
    """
    Coherent probe with n_bar photons, unknown loss tau and a single-mode
    thermal-loss channel (t0, omega).
    """
    n_bar: float
    tau: float
    t0: float
    omega: float

    def __post_init__(self):
        if self.n_bar < 0:
            raise DomainError(f"n_bar must be non-negative, got {self.n_bar}")
        if not 0.0 < self.tau <= 1.0:
            raise DomainError(f"tau must lie in (0,1], got {self.tau}")
        if not 0.0 < self.t0 <= 1.0:
            raise DomainError(f"t0 must lie in (0,1], got {self.t0}")
        if self.omega < SHOT_NOISE - PHYSICALITY_TOL:
            raise DomainError(f"omega must be >= 1/2, got {self.omega}")


def decoherence_factor(t0: float, omega: float) -> float:
    """gamma_dec = T0 / (T0 + 2 (1 - T0) omega); 1 when T0 = 1."""
    return float(t0 / (t0 + 2.0 * (1.0 - t0) * omega))


def qfi_coherent_analytic(params: BenchmarkParams) -> float:
    """H_coh = gamma_dec n_bar / tau."""
    return decoherence_factor(params.t0, params.omega) * params.n_bar / params.tau


def qcr_error_bound(h: float, n_probes: int = 1) -> float:
    """Quantum Cramer-Rao bound on the variance of tau: 1 / (N H)."""
    if isinstance(n_probes, bool) or int(n_probes) != n_probes or n_probes < 1:
        raise DomainError(f"n_probes must be an integer >= 1, got {n_probes}")
    if not h > 0:
        raise DomainError(f"QFI must be positive for a finite bound, got {h}")
    if np.isinf(h):
        return 0.0
    return 1.0 / (int(n_probes) * float(h))
