from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from thermal_qfi.channels.loss import ChannelParams, EnvironmentSpec, evolve_coherent, evolve_source
from thermal_qfi.core.states import GaussianState, SourceSpec, make_source
from thermal_qfi.errors import DomainError, NumericalError
from thermal_qfi.types import QfiResult

from .fidelity import log_fidelity


@dataclass(frozen=True)
class CoherentProbe:
    """Single-mode coherent probe; only mode A enters the channel."""
    n_bar: float
    phase: float = 0.0

    def __post_init__(self):
        if self.n_bar < 0:
            raise DomainError(f"n_bar must be non-negative, got {self.n_bar}")


Probe = Union[SourceSpec, CoherentProbe, GaussianState]

# truncation error halves with the step, rounding noise grows about 4x per halving
NOISE_RATIO = 2.0


@dataclass
class QfiSettings:
    dtau: float = 1e-3
    dtau_floor: float = 1e-6
    rtol: float = 1e-5
    max_levels: int = 8
    # an extrapolation this many times worse than the best so far is noise
    safe: float = 2.0

    def __post_init__(self):
        if not self.dtau > 0 or not self.dtau_floor > 0:
            raise DomainError(f"dtau and dtau_floor must be positive, got {self.dtau}, {self.dtau_floor}")
        if not self.rtol > 0:
            raise DomainError(f"rtol must be positive, got {self.rtol}")
        if int(self.max_levels) < 1:
            raise DomainError(f"max_levels must be >= 1, got {self.max_levels}")

    @classmethod
    def from_config(cls, section: Optional[Dict[str, Any]]) -> "QfiSettings":
        s = section or {}
        return cls(
            dtau=float(s.get("dtau", 1e-3)),
            dtau_floor=float(s.get("dtau_floor", 1e-6)),
            rtol=float(s.get("rtol", 1e-5)),
            max_levels=int(s.get("max_levels", 8)),
            safe=float(s.get("safe", 2.0)),
        )


def evolve_probe(probe: Probe, tau: float, env: EnvironmentSpec) -> GaussianState:
    """Output state of D o (E_tau x I) for any supported probe."""
    if isinstance(probe, CoherentProbe):
        return evolve_coherent(probe.n_bar, tau, env.t0, env.omega1, probe.phase)
    params = ChannelParams(tau=tau, env=env)
    if isinstance(probe, SourceSpec):
        return evolve_source(make_source(probe), params)
    if isinstance(probe, GaussianState):
        return evolve_source(probe, params)
    raise DomainError(f"Unsupported probe type: {type(probe).__name__}")


def _check_tau_open(tau: float, env: EnvironmentSpec) -> None:
    ChannelParams(tau=tau, env=env)
    if tau <= 0.0:
        raise DomainError(f"tau must be > 0 for a finite QFI (H diverges as 1/tau), got {tau}")
    if tau >= 1.0:
        raise DomainError(f"tau must be < 1 so that tau + dtau stays a transmissivity, got {tau}")


def qfi_numeric(
    probe: Probe,
    env: EnvironmentSpec,
    tau: float,
    dtau: Optional[float] = None,
    settings: Optional[QfiSettings] = None,
) -> QfiResult:
    """
    H(tau) = 8 (1 - F(rho_tau, rho_{tau+dtau})) / dtau^2.

    The step is halved from `dtau` and the raw estimates are
    Richardson-extrapolated (H(dtau) = H + O(dtau)). Stops once two
    successive extrapolations agree to `rtol`, at the step floor, or at
    the rounding floor of the fidelity: once the raw estimates start moving
    apart as the step is halved, smaller steps only add noise.
    `converged` says whether `rtol` was met. A negative estimate is a
    numerical failure, not a zero.
    """
    settings = settings or QfiSettings()
    tau = float(tau)
    _check_tau_open(tau, env)
    if isinstance(probe, GaussianState) and probe.n_modes != 2:
        raise DomainError(f"Gaussian probes must have two modes, got {probe.n_modes}")

    h0 = float(settings.dtau if dtau is None else dtau)
    if not h0 > 0:
        raise DomainError(f"dtau must be positive, got {h0}")
    if tau + h0 > 1.0:
        h0 = 0.5 * (1.0 - tau)

    if isinstance(probe, SourceSpec):
        probe = make_source(probe)
    rho_tau = evolve_probe(probe, tau, env)

    def raw(step: float) -> float:
        infid = -np.expm1(log_fidelity(rho_tau, evolve_probe(probe, tau + step, env)))
        return 8.0 * float(infid) / (step * step)

    tableau: List[List[float]] = [[raw(h0)]]
    best = tableau[0][0]
    best_step = h0
    best_change = float("inf")
    converged = False
    levels = 1

    for i in range(1, int(settings.max_levels)):
        step = h0 / 2.0**i
        if step < settings.dtau_floor:
            break
        row = [raw(step)]
        if i >= 2:
            shrink = abs(row[0] - tableau[i - 1][0])
            if shrink > NOISE_RATIO * abs(tableau[i - 1][0] - tableau[i - 2][0]):
                break
        for k in range(1, i + 1):
            row.append(row[k - 1] + (row[k - 1] - tableau[i - 1][k - 1]) / (2.0**k - 1.0))
        tableau.append(row)
        levels = i + 1

        est, prev = row[-1], tableau[i - 1][-1]
        change = abs(est - prev) / max(abs(est), np.finfo(float).tiny)
        if change <= best_change:
            best, best_step, best_change = est, step, change
        if change < settings.rtol:
            converged = True
            break
        if change > settings.safe * best_change:
            break

    if best < 0.0:
        raise NumericalError(
            f"QFI estimate is negative ({best:.6e}) at tau={tau}, dtau={best_step:.3e}; "
            "the fidelity is below its rounding floor"
        )
    return QfiResult(
        tau=tau,
        h=float(best),
        dtau=best_step,
        converged=converged,
        relative_step_change=best_change,
        levels=levels,
    )


def qfi_curve(
    probe: Probe,
    env: EnvironmentSpec,
    taus: Sequence[float],
    settings: Optional[QfiSettings] = None,
) -> List[QfiResult]:
    return [qfi_numeric(probe, env, t, settings=settings) for t in taus]
