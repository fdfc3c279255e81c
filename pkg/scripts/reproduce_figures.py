#!/usr/bin/env python3
"""
Sweep every named scenario and write CSV, ordering report and summary
per scenario.

Usage:
  python scripts/reproduce_figures.py \
    --config configs/base.yaml \
    --out_dir runs/figures
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from thermal_qfi.config import load_and_merge
from thermal_qfi.errors import ThermalQfiError
from thermal_qfi.logging import RunLogger
from thermal_qfi.metrology.qfi import QfiSettings
from thermal_qfi.scenarios import PRESETS, SweepSettings, ordering_report, render_summary, sweep, write_all_reports
from thermal_qfi.utils.parallel import ParallelConfig


def parse_args() -> argparse.Namespace:
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", type=str, default=None)
    ap.add_argument("--out_dir", type=str, required=True)
    ap.add_argument("--scenarios", type=str, default=",".join(PRESETS))
    ap.add_argument("--progress", action="store_true")
    return ap.parse_args()


def main() -> None:
    args = parse_args()
    cfg = load_and_merge(args.config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    sweep_cfg = SweepSettings.from_config(cfg.section("sweep"))
    qfi_cfg = QfiSettings.from_config(cfg.section("qfi"))
    par = ParallelConfig.from_config(cfg.section("parallel"))

    names = [s.strip() for s in args.scenarios.split(",") if s.strip()]
    unknown = [n for n in names if n not in PRESETS]
    if unknown:
        print(f"[ERROR] unknown scenarios: {', '.join(unknown)}", file=sys.stderr)
        sys.exit(2)
    logger = RunLogger(out_dir=str(out_dir / "logs"), run_name="reproduce_figures", meta={"config": cfg.source_path})

    for name in names:
        p = PRESETS[name]
        try:
            rows = sweep(p, sweep_cfg.grid(), settings=qfi_cfg, parallel=par, progress=args.progress, logger=logger)
            report = ordering_report(rows, sweep_cfg.coincidence_rtol)
        except ThermalQfiError as e:
            print(f"[ERROR] {e}", file=sys.stderr)
            sys.exit(e.exit_code)
        paths = write_all_reports(out_dir, rows, report, p)
        logger.save_report(report)
        print(render_summary(report, p))
        if report.unconverged:
            print(f"[WARN] {name}: {len(report.unconverged)} QFI points did not converge", file=sys.stderr)
        print(f"[OK] {name} -> {paths['csv']}")


if __name__ == "__main__":
    main()
