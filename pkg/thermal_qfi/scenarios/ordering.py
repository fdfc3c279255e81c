from __future__ import annotations

from typing import Dict, List, Sequence

from thermal_qfi.errors import DomainError
from thermal_qfi.types import OrderingReport, SweepRow

from .presets import CURVE_COHERENT, CURVE_SINGLE_THERMAL

DEFAULT_COINCIDENCE_RTOL = 0.02

FLAG_ALL_BEAT = "all curves beat benchmark"
FLAG_NONE_BEAT = "no curve beats benchmark"
FLAG_MONOTONE = "monotone in eta"
FLAG_STRICT = "strictly ordered in eta"


def _ceiling_flag(rtol: float) -> str:
    return f"benchmark ceiling ({rtol * 100:g}%)"


def _coincide_flag(eta: float) -> str:
    return f"eta={eta:g} coincides with benchmark"


def _group(rows: Sequence[SweepRow]) -> Dict[str, Dict[float, SweepRow]]:
    curves: Dict[str, Dict[float, SweepRow]] = {}
    for r in rows:
        by_tau = curves.setdefault(r.curve, {})
        if r.tau in by_tau:
            raise DomainError(f"Duplicate row for curve={r.curve} tau={r.tau}")
        by_tau[r.tau] = r
    return curves


def ordering_report(rows: Sequence[SweepRow], coincidence_rtol: float = DEFAULT_COINCIDENCE_RTOL) -> OrderingReport:
    """
    Rank the curves at every tau and evaluate the benchmark comparisons
    over the whole grid. Ties within `coincidence_rtol` of the benchmark
    count as coincidence, not as beating it.
    """
    if not rows:
        raise DomainError("ordering_report needs at least one row")
    scenarios = {r.scenario for r in rows}
    if len(scenarios) != 1:
        raise DomainError(f"Rows mix scenarios: {sorted(scenarios)}")

    curves = _group(rows)
    taus = sorted({r.tau for r in rows})
    for name, by_tau in curves.items():
        if set(by_tau) != set(taus):
            raise DomainError(f"Curve {name} does not cover the full tau grid")

    order = list(curves)
    bench = {t: next(iter(curves.values()))[t].qfi_benchmark for t in taus}

    # eta-list curves sorted by decreasing eta, single-thermal (eta = 1) first
    eta_curves = [c for c in order if c not in (CURVE_SINGLE_THERMAL, CURVE_COHERENT)]
    eta_curves.sort(key=lambda c: -float(curves[c][taus[0]].eta))
    thermal = ([CURVE_SINGLE_THERMAL] if CURVE_SINGLE_THERMAL in curves else []) + eta_curves

    rankings: Dict[float, List[str]] = {}
    for t in taus:
        rankings[t] = sorted(order, key=lambda c: -curves[c][t].qfi)

    max_gap: Dict[str, float] = {}
    everywhere: Dict[str, bool] = {}
    nowhere: Dict[str, bool] = {}
    crossovers: List[Dict[str, object]] = []
    for c in thermal:
        beats = [curves[c][t].beats_benchmark for t in taus]
        everywhere[c] = all(beats)
        nowhere[c] = not any(beats)
        max_gap[c] = max(abs(curves[c][t].qfi - bench[t]) / bench[t] for t in taus)
        for i in range(1, len(taus)):
            if beats[i] != beats[i - 1]:
                crossovers.append(
                    {"curve": c, "tau_before": taus[i - 1], "tau_after": taus[i], "beats_after": beats[i]}
                )

    def ordered(strict: bool) -> bool:
        for t in taus:
            h = [curves[c][t].qfi for c in thermal]
            for lo, hi in zip(h, h[1:]):
                if hi < lo or (strict and hi == lo):
                    return False
        return True

    flags: Dict[str, bool] = {
        FLAG_ALL_BEAT: bool(eta_curves) and all(everywhere[c] for c in eta_curves),
        FLAG_NONE_BEAT: all(nowhere[c] for c in thermal),
        FLAG_MONOTONE: ordered(strict=False),
        FLAG_STRICT: ordered(strict=True),
        _ceiling_flag(coincidence_rtol): all(
            curves[c][t].qfi <= bench[t] * (1.0 + coincidence_rtol) for c in thermal for t in taus
        ),
    }
    if eta_curves:
        lowest = eta_curves[-1]
        flags[_coincide_flag(float(curves[lowest][taus[0]].eta))] = max_gap[lowest] < coincidence_rtol

    top_curve = None
    if thermal:
        leaders = {max(thermal, key=lambda c: curves[c][t].qfi) for t in taus}
        if len(leaders) == 1:
            top_curve = leaders.pop()

    return OrderingReport(
        scenario=scenarios.pop(),
        taus=taus,
        rankings=rankings,
        flags=flags,
        top_curve=top_curve,
        max_relative_gap=max_gap,
        beats_everywhere=everywhere,
        beats_nowhere=nowhere,
        crossovers=crossovers,
        unconverged=[(r.curve, r.tau) for r in rows if not r.converged],
    )
