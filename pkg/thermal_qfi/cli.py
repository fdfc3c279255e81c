"""
Command-line front end.

  thermal-qfi qfi --probe coherent --n-signal 10 --tau 0.5 --t0 0.7 --omega 0.5
  thermal-qfi sweep --scenario pure_loss --out pic1.csv
  thermal-qfi check --omega1 1.5 --omega2 100.5 --g -9.97497 --gprime -9.97497
  thermal-qfi presets

All quadrature variances use the shot-noise-1/2 convention ([q, p] = i):
vacuum has omega = 1/2 and a thermal bath with n_env photons has
omega = n_env + 1/2.

Exit codes: 0 ok, 2 invalid input, 3 numerical failure, 4 I/O error
(`check` exits 1 when the environment is unphysical).
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from thermal_qfi.channels.loss import EnvironmentSpec
from thermal_qfi.config import Config, load_and_merge
from thermal_qfi.core.states import SHOT_NOISE, source_for_signal
from thermal_qfi.core.validation import check_physical, environment_cov
from thermal_qfi.errors import DomainError, ThermalQfiError
from thermal_qfi.logging import RunLogger
from thermal_qfi.metrology.benchmark import BenchmarkParams, qfi_coherent_analytic
from thermal_qfi.metrology.qfi import CoherentProbe, QfiSettings, qfi_numeric
from thermal_qfi.scenarios.ordering import ordering_report
from thermal_qfi.scenarios.presets import PRESETS, ScenarioPreset, preset
from thermal_qfi.scenarios.reports import render_summary, write_sweep_csv
from thermal_qfi.scenarios.sweep import SweepSettings, sweep
from thermal_qfi.utils.parallel import ParallelConfig

EXIT_IO = 4


def _boolstr(b: bool) -> str:
    return "true" if b else "false"


def _passfail(b: bool) -> str:
    return "PASS" if b else "FAIL"


def _eta_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, default=None, help="YAML config (e.g. configs/base.yaml)")
    p.add_argument("--override", type=str, default=None, help="second YAML file merged on top of --config")


def _add_env_args(p: argparse.ArgumentParser, with_t0: bool = True) -> None:
    g = p.add_argument_group("decoherence channel (shot-noise units, vacuum variance 1/2)")
    if with_t0:
        g.add_argument("--t0", type=float, default=None, help="T0, decoherence transmissivity in (0,1] (default 1)")
    g.add_argument("--omega", type=float, default=None, help="omega, variance of both environment modes (>= 1/2)")
    g.add_argument("--omega1", type=float, default=None, help="omega1, variance of environment mode E1 (>= 1/2)")
    g.add_argument("--omega2", type=float, default=None, help="omega2, variance of environment mode E2 (>= 1/2)")
    g.add_argument(
        "--n-env",
        type=float,
        default=None,
        help="n_env, mean thermal photons per environment mode; sets omega = n_env + 1/2",
    )
    g.add_argument("--g", type=float, default=None, help="g, qq cross-covariance of the environment (default 0)")
    g.add_argument("--gprime", type=float, default=None, help="g', pp cross-covariance (default: same as --g)")


def _omegas(args: argparse.Namespace):
    direct = [args.omega, args.omega1, args.omega2]
    if args.n_env is not None:
        if any(v is not None for v in direct):
            raise DomainError("Give either --omega/--omega1/--omega2 or --n-env, not both")
        if args.n_env < 0:
            raise DomainError(f"n_env must be non-negative, got {args.n_env}")
        w = args.n_env + SHOT_NOISE
        return w, w
    base = SHOT_NOISE if args.omega is None else args.omega
    w1 = base if args.omega1 is None else args.omega1
    w2 = base if args.omega2 is None else args.omega2
    return w1, w2


def _correlations(args: argparse.Namespace, default_g: float = 0.0, default_gprime: Optional[float] = None):
    g = default_g if args.g is None else args.g
    if args.gprime is not None:
        return g, args.gprime
    if args.g is None and default_gprime is not None:
        return g, default_gprime
    return g, g


def _environment(args: argparse.Namespace) -> EnvironmentSpec:
    omega1, omega2 = _omegas(args)
    g, gprime = _correlations(args)
    t0 = 1.0 if args.t0 is None else args.t0
    return EnvironmentSpec(t0=t0, omega1=omega1, omega2=omega2, g=g, gprime=gprime)


def _load_config(args: argparse.Namespace) -> Config:
    return load_and_merge(args.config, args.override)


def cmd_qfi(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    env = _environment(args)
    if args.probe == "coherent":
        probe = CoherentProbe(n_bar=args.n_signal, phase=args.phase)
    else:
        eta = 1.0 if args.probe == "single-thermal" else args.eta
        probe = source_for_signal(args.n_signal, eta, args.n_low)

    settings = QfiSettings.from_config(cfg.section("qfi"))
    result = qfi_numeric(probe, env, args.tau, dtau=args.dtau, settings=settings)
    bench = qfi_coherent_analytic(BenchmarkParams(n_bar=args.n_signal, tau=args.tau, t0=env.t0, omega=env.omega1))

    print(
        f"tau={result.tau:.12g} H={result.h:.12g} dtau={result.dtau:.6g} "
        f"converged={_boolstr(result.converged)}"
    )
    print(f"benchmark H_coh={bench:.12g} beats_benchmark={_boolstr(result.h > bench)}")
    if result.h > 0:
        print(f"qcr_bound n_probes={args.n_probes} var_tau>={result.error_bound(args.n_probes):.6g}")
    if not result.converged:
        print(
            f"[WARN] step control stopped at relative change {result.relative_step_change:.3g} "
            f"after {result.levels} levels",
            file=sys.stderr,
        )
    return 0


def _sweep_preset(args: argparse.Namespace) -> ScenarioPreset:
    if args.scenario is not None:
        base = preset(args.scenario)
    else:
        if args.n_signal is None:
            raise DomainError("sweep needs --scenario or at least --n-signal for a custom scenario")
        base = None

    changes = {}
    if args.n_signal is not None:
        changes["n_signal"] = args.n_signal
    if args.n_low is not None:
        changes["n_low"] = args.n_low
    if args.t0 is not None:
        changes["t0"] = args.t0
    if args.etas is not None:
        changes["eta_list"] = tuple(args.etas)
    if any(v is not None for v in (args.omega, args.omega1, args.omega2, args.n_env)):
        w1, w2 = _omegas(args)
        if args.omega is None and args.n_env is None and base is not None:
            w1 = base.omega1 if args.omega1 is None else args.omega1
            w2 = base.omega2 if args.omega2 is None else args.omega2
        changes["omega1"], changes["omega2"] = w1, w2
    if args.g is not None or args.gprime is not None:
        g0 = 0.0 if base is None else base.g
        gp0 = None if base is None else base.gprime
        changes["g"], changes["gprime"] = _correlations(args, g0, gp0)

    if base is None:
        fields = {"name": "custom", "n_low": 0.0, "t0": 1.0, "omega1": SHOT_NOISE, "omega2": SHOT_NOISE}
        fields.update(changes)
        return ScenarioPreset(**fields)
    if not changes:
        return base
    return dataclasses.replace(base, **changes)


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    scenario = _sweep_preset(args)

    sweep_cfg = SweepSettings.from_config(cfg.section("sweep"))
    if args.steps is not None:
        sweep_cfg.steps = args.steps
    if args.tau_min is not None:
        sweep_cfg.tau_min = args.tau_min
    if args.tau_max is not None:
        sweep_cfg.tau_max = args.tau_max

    par = ParallelConfig.from_config(cfg.section("parallel"))
    if args.parallel is not None:
        par.mode = args.parallel
    if args.workers is not None:
        par.max_workers = args.workers

    # everything that can be rejected is rejected before the run log exists
    grid = sweep_cfg.grid()
    settings = QfiSettings.from_config(cfg.section("qfi"))
    par.checked_mode()
    out_parent = Path(args.out).resolve().parent
    if not out_parent.is_dir():
        raise FileNotFoundError(f"Output directory does not exist: {out_parent}")

    log_dir = args.log_dir or cfg.resolve_path("logging", "log_dir")
    logger = None
    if log_dir:
        logger = RunLogger(
            out_dir=log_dir,
            run_name=str(cfg.section("project").get("run_name", scenario.name)),
            meta={"command": "sweep", "scenario": scenario.to_dict(), "config": cfg.source_path},
        )

    rows = sweep(
        scenario,
        grid,
        settings=settings,
        parallel=par,
        progress=args.progress,
        logger=logger,
    )
    report = ordering_report(rows, sweep_cfg.coincidence_rtol)
    n = write_sweep_csv(rows, args.out)
    if logger is not None and cfg.section("logging").get("save_events", True):
        logger.save_report(report)

    print(render_summary(report, scenario), end="")
    if report.unconverged:
        print(
            f"[WARN] {len(report.unconverged)} of {len(rows)} QFI points did not reach rtol={settings.rtol:g}",
            file=sys.stderr,
        )
    print(f"[OK] {n} rows -> {args.out}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    omega1, omega2 = _omegas(args)
    g, gprime = _correlations(args)
    report = check_physical(environment_cov(omega1, omega2, g, gprime))

    print(f"omega1={omega1:.12g} omega2={omega2:.12g} g={g:.12g} gprime={gprime:.12g}")
    print(f"nu^2={report.nu_sq:.12g}")
    print(f"nu~^2={report.nu_tilde_sq:.12g}")
    for name, ok in report.constraints.items():
        print(f"{name}: {_passfail(ok)}")
    print(f"physical: {_passfail(report.physical)}")
    if report.physical:
        print(f"separable: {_passfail(bool(report.separable))}")
    else:
        print("separable: n/a (unphysical)")
    return 0 if report.physical else 1


def _preset_line(p: ScenarioPreset) -> str:
    parts = [p.name, f"n_signal={p.n_signal:g}", f"n_low={p.n_low:g}", f"t0={p.t0:g}"]
    if p.is_symmetric:
        parts.append(f"omega={p.omega1:g}")
    else:
        parts += [f"omega1={p.omega1:g}", f"omega2={p.omega2:g}"]
    parts.append(f"g={p.g:g}")
    if p.gprime != p.g:
        parts.append(f"gprime={p.gprime:g}")
    parts.append("etas=" + ",".join(f"{e:g}" for e in p.eta_list))
    return " ".join(parts)


def cmd_presets(args: argparse.Namespace) -> int:
    for p in PRESETS.values():
        print(_preset_line(p))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="thermal-qfi",
        description="Quantum Fisher information for loss estimation with correlated-thermal probes.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    q = sub.add_parser("qfi", help="QFI H(tau) at a single point, with the coherent benchmark")
    q.add_argument(
        "--probe",
        choices=["source", "coherent", "single-thermal"],
        default="source",
        help="correlated-thermal source, coherent state, or the eta = 1 thermal probe",
    )
    q.add_argument("--eta", type=float, default=0.5, help="eta, source beam-splitter transmissivity in (0,1]")
    q.add_argument("--n-signal", type=float, default=10.0, help="n, mean photons sent through the loss on mode A")
    q.add_argument("--n-low", type=float, default=0.0, help="n_L, mean photons of the faint thermal input")
    q.add_argument("--tau", type=float, required=True, help="tau, unknown loss transmissivity in (0,1)")
    q.add_argument("--phase", type=float, default=0.0, help="coherent probe phase in radians")
    q.add_argument("--dtau", type=float, default=None, help="initial finite-difference step on tau (default 1e-3)")
    q.add_argument("--n-probes", type=int, default=1, help="N, probe copies in the Cramer-Rao bound 1/(N H)")
    _add_env_args(q)
    _add_config_args(q)
    q.set_defaults(func=cmd_qfi)

    s = sub.add_parser("sweep", help="sweep a scenario over a tau grid and write CSV")
    s.add_argument("--scenario", choices=list(PRESETS), default=None, help="named scenario")
    s.add_argument("--out", type=str, required=True, help="CSV output path (directory must exist)")
    s.add_argument("--n-signal", type=float, default=None, help="n, mean photons on mode A")
    s.add_argument("--n-low", type=float, default=None, help="n_L, mean photons of the faint thermal input")
    s.add_argument("--etas", type=_eta_list, default=None, help="comma-separated eta values, e.g. 0.5,0.1,0.01")
    s.add_argument("--steps", type=int, default=None, help="number of tau grid points (default 99)")
    s.add_argument("--tau-min", type=float, default=None, help="smallest tau of the grid (default 0.01)")
    s.add_argument("--tau-max", type=float, default=None, help="largest tau of the grid (default 0.99)")
    s.add_argument("--workers", type=int, default=None, help="parallel workers")
    s.add_argument("--parallel", choices=["thread", "process", "none"], default=None, help="parallel mode")
    s.add_argument("--progress", action="store_true", help="show a progress bar on stderr")
    s.add_argument("--log-dir", type=str, default=None, help="write run.json and events.jsonl here")
    _add_env_args(s)
    _add_config_args(s)
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("check", help="physicality and separability of an environment CM")
    _add_env_args(c, with_t0=False)
    c.set_defaults(func=cmd_check)

    p = sub.add_parser("presets", help="list the named scenarios")
    p.set_defaults(func=cmd_presets)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return int(args.func(args))
    except ThermalQfiError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
