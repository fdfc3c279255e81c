from .ordering import ordering_report
from .presets import CURVE_COHERENT, CURVE_SINGLE_THERMAL, PRESETS, Curve, ScenarioPreset, preset
from .reports import read_sweep_csv, render_summary, write_all_reports, write_sweep_csv
from .sweep import SweepSettings, benchmark_qfi, default_tau_grid, sweep
from .thermal import environment_omega, mean_thermal_photons

__all__ = [
    "CURVE_COHERENT",
    "CURVE_SINGLE_THERMAL",
    "PRESETS",
    "Curve",
    "ScenarioPreset",
    "SweepSettings",
    "benchmark_qfi",
    "default_tau_grid",
    "environment_omega",
    "mean_thermal_photons",
    "ordering_report",
    "preset",
    "read_sweep_csv",
    "render_summary",
    "sweep",
    "write_all_reports",
    "write_sweep_csv",
]
