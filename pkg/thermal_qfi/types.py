from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from thermal_qfi.errors import DomainError


@dataclass(frozen=True)
class QfiResult:
    """
    One numerical QFI evaluation.
    `relative_step_change` is the relative gap between the last two
    extrapolated estimates; `levels` counts the step halvings used.
    """
    tau: float
    h: float
    dtau: float
    converged: bool
    relative_step_change: float
    levels: int = 1

    def __post_init__(self):
        if self.h < 0:
            raise DomainError(f"QFI must be non-negative, got {self.h}")
        if not self.dtau > 0:
            raise DomainError(f"dtau must be positive, got {self.dtau}")

    def error_bound(self, n_probes: int = 1) -> float:
        from thermal_qfi.metrology.benchmark import qcr_error_bound
        return qcr_error_bound(self.h, n_probes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tau": float(self.tau),
            "h": float(self.h),
            "dtau": float(self.dtau),
            "converged": bool(self.converged),
            "relative_step_change": float(self.relative_step_change),
            "levels": int(self.levels),
        }


@dataclass
class PhysicalityReport:
    """
    Diagnostics for a two-mode block-form CM (omega1 I, omega2 I, diag(g, g')).
    `constraints` maps each physicality condition to its outcome.
    """
    omega1: float
    omega2: float
    g: float
    gprime: float
    nu_sq: float
    nu_tilde_sq: float
    constraints: Dict[str, bool]
    separable: Optional[bool] = None

    @property
    def physical(self) -> bool:
        return all(self.constraints.values())

    def raise_if_failed(self) -> None:
        if not self.physical:
            failed = [k for k, ok in self.constraints.items() if not ok]
            raise DomainError("Unphysical covariance matrix: violates " + "; ".join(failed))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "omega1": self.omega1,
            "omega2": self.omega2,
            "g": self.g,
            "gprime": self.gprime,
            "nu_sq": self.nu_sq,
            "nu_tilde_sq": self.nu_tilde_sq,
            "constraints": dict(self.constraints),
            "physical": self.physical,
            "separable": self.separable,
        }


CSV_FIELDS: Tuple[str, ...] = (
    "scenario",
    "curve",
    "eta",
    "tau",
    "qfi",
    "qfi_benchmark",
    "beats_benchmark",
    "n_signal",
    "n_low",
    "t0",
    "omega1",
    "omega2",
    "g",
    "gprime",
)


@dataclass(frozen=True)
class SweepRow:
    """
    One (curve, tau) point of a scenario sweep.
    `eta` is None on the coherent-benchmark curve; the single-thermal
    curve carries eta = 1. `converged` is kept in memory only and is not
    a CSV column.
    """
    scenario: str
    curve: str
    eta: Optional[float]
    tau: float
    qfi: float
    qfi_benchmark: float
    beats_benchmark: bool
    n_signal: float
    n_low: float
    t0: float
    omega1: float
    omega2: float
    g: float
    gprime: float
    converged: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {k: getattr(self, k) for k in CSV_FIELDS}


@dataclass
class OrderingReport:
    scenario: str
    taus: List[float]
    rankings: Dict[float, List[str]]
    flags: Dict[str, bool]
    top_curve: Optional[str] = None
    max_relative_gap: Dict[str, float] = field(default_factory=dict)
    beats_everywhere: Dict[str, bool] = field(default_factory=dict)
    beats_nowhere: Dict[str, bool] = field(default_factory=dict)
    crossovers: List[Dict[str, Any]] = field(default_factory=list)
    # (curve, tau) points whose QFI did not meet the step tolerance
    unconverged: List[Tuple[str, float]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "taus": list(self.taus),
            "rankings": {repr(t): list(r) for t, r in self.rankings.items()},
            "flags": dict(self.flags),
            "top_curve": self.top_curve,
            "max_relative_gap": dict(self.max_relative_gap),
            "beats_everywhere": dict(self.beats_everywhere),
            "beats_nowhere": dict(self.beats_nowhere),
            "crossovers": list(self.crossovers),
            "unconverged": [{"curve": c, "tau": t} for c, t in self.unconverged],
        }
