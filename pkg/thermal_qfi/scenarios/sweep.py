from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from thermal_qfi.errors import DomainError, ThermalQfiError, with_context
from thermal_qfi.logging import RunLogger
from thermal_qfi.metrology.benchmark import BenchmarkParams, qfi_coherent_analytic
from thermal_qfi.metrology.qfi import QfiSettings, qfi_numeric
from thermal_qfi.types import QfiResult, SweepRow
from thermal_qfi.utils.parallel import ParallelConfig, parallel_map

from .presets import KIND_COHERENT, Curve, ScenarioPreset


@dataclass
class SweepSettings:
    tau_min: float = 0.01
    tau_max: float = 0.99
    steps: int = 99
    coincidence_rtol: float = 0.02

    @classmethod
    def from_config(cls, section: Optional[Dict[str, Any]]) -> "SweepSettings":
        s = section or {}
        return cls(
            tau_min=float(s.get("tau_min", 0.01)),
            tau_max=float(s.get("tau_max", 0.99)),
            steps=int(s.get("steps", 99)),
            coincidence_rtol=float(s.get("coincidence_rtol", 0.02)),
        )

    def grid(self) -> List[float]:
        return default_tau_grid(self.steps, self.tau_min, self.tau_max)


def default_tau_grid(steps: int = 99, tau_min: float = 0.01, tau_max: float = 0.99) -> List[float]:
    """Evenly spaced taus, rounded to 12 decimals so grid points print cleanly."""
    if int(steps) < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    if not 0.0 < tau_min <= tau_max < 1.0:
        raise DomainError(f"Grid must satisfy 0 < tau_min <= tau_max < 1, got [{tau_min}, {tau_max}]")
    if int(steps) == 1:
        return [float(tau_min)]
    if tau_min == tau_max:
        raise DomainError("tau_min == tau_max needs steps = 1")
    return [float(t) for t in np.round(np.linspace(tau_min, tau_max, int(steps)), 12)]


def _check_grid(taus: Sequence[float]) -> List[float]:
    grid = [float(t) for t in taus]
    if not grid:
        raise DomainError("tau grid is empty")
    for t in grid:
        if not 0.0 < t < 1.0:
            raise DomainError(f"tau grid points must lie in (0,1), got {t}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("tau grid must be strictly ascending")
    return grid


@dataclass(frozen=True)
class _Point:
    preset: ScenarioPreset
    curve: Curve
    tau: float
    settings: QfiSettings


def benchmark_qfi(preset: ScenarioPreset, tau: float) -> float:
    """Coherent probe of the same signal energy through mode A's channel."""
    params = BenchmarkParams(n_bar=preset.n_signal, tau=tau, t0=preset.t0, omega=preset.omega1)
    return qfi_coherent_analytic(params)


def _evaluate(point: _Point) -> Tuple[SweepRow, Optional[QfiResult]]:
    p, curve, tau = point.preset, point.curve, point.tau
    try:
        bench = benchmark_qfi(p, tau)
        result = None
        if curve.kind == KIND_COHERENT:
            qfi = bench
        else:
            result = qfi_numeric(p.source(curve.eta), p.environment(), tau, settings=point.settings)
            qfi = result.h
    except ThermalQfiError as e:
        raise with_context(e, f"scenario={p.name} curve={curve.name} tau={tau:g}") from e

    row = SweepRow(
        scenario=p.name,
        curve=curve.name,
        eta=curve.eta,
        tau=tau,
        qfi=float(qfi),
        qfi_benchmark=float(bench),
        beats_benchmark=bool(qfi > bench),
        n_signal=p.n_signal,
        n_low=p.n_low,
        t0=p.t0,
        omega1=p.omega1,
        omega2=p.omega2,
        g=p.g,
        gprime=p.gprime,
        converged=result is None or result.converged,
    )
    return row, result


def sweep(
    preset: ScenarioPreset,
    tau_grid: Optional[Sequence[float]] = None,
    settings: Optional[QfiSettings] = None,
    parallel: Optional[ParallelConfig] = None,
    progress: bool = False,
    logger: Optional[RunLogger] = None,
) -> List[SweepRow]:
    """
    One row per (curve, tau), ordered by curve (eta_list, single-thermal,
    coherent) and then by tau. Points are independent; the output does not
    depend on the parallel mode or worker count.
    """
    grid = _check_grid(default_tau_grid() if tau_grid is None else tau_grid)
    settings = settings or QfiSettings()
    points = [_Point(preset, curve, tau, settings) for curve in preset.curves() for tau in grid]

    if logger is not None:
        logger.log_event(
            "sweep_start",
            {"scenario": preset.name, "points": len(points), "preset": preset.to_dict()},
        )

    out = parallel_map(_evaluate, points, parallel, progress=progress, desc=preset.name)
    rows = [row for row, _ in out]

    if logger is not None:
        for row, result in out:
            if result is not None and not result.converged:
                logger.log_qfi_result(result, "qfi_not_converged", scenario=preset.name, curve=row.curve)
        logger.log_event("sweep_done", {"scenario": preset.name, "rows": len(rows)})
    return rows
