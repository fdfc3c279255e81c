from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from thermal_qfi.channels.loss import EnvironmentSpec
from thermal_qfi.core.states import SourceSpec, source_for_signal
from thermal_qfi.core.validation import check_separable, separable_correlation
from thermal_qfi.errors import DomainError

CURVE_SINGLE_THERMAL = "single_thermal"
CURVE_COHERENT = "coherent"
DEFAULT_ETAS: Tuple[float, ...] = (0.5, 0.1, 0.01)

KIND_SOURCE = "source"
KIND_SINGLE_THERMAL = "single_thermal"
KIND_COHERENT = "coherent"


def eta_curve_name(eta: float) -> str:
    return f"eta={eta:g}"


@dataclass(frozen=True)
class Curve:
    """One line of a scenario figure."""
    name: str
    kind: str
    eta: Optional[float] = None


@dataclass(frozen=True)
class ScenarioPreset:
    """
    Parameters of one figure: signal energy n_signal on mode A, faint
    input n_low, and the decoherence channel (t0, omega1, omega2, g, g').
    """
    name: str
    n_signal: float
    n_low: float
    t0: float
    omega1: float
    omega2: float
    g: float = 0.0
    gprime: float = 0.0
    eta_list: Tuple[float, ...] = DEFAULT_ETAS
    includes_single_thermal: bool = True
    includes_coherent: bool = True
    description: str = ""

    def __post_init__(self):
        if not self.eta_list:
            raise DomainError(f"{self.name}: eta_list must not be empty")
        if not check_separable(self.environment().cov):
            raise DomainError(f"{self.name}: environment is entangled")
        for eta in self.eta_list:
            self.source(eta)

    @property
    def is_symmetric(self) -> bool:
        return self.omega1 == self.omega2

    def environment(self) -> EnvironmentSpec:
        return EnvironmentSpec(t0=self.t0, omega1=self.omega1, omega2=self.omega2, g=self.g, gprime=self.gprime)

    def source(self, eta: float) -> SourceSpec:
        return source_for_signal(self.n_signal, eta, self.n_low)

    def curves(self) -> List[Curve]:
        """eta_list curves in order, then single-thermal and coherent."""
        out = [Curve(name=eta_curve_name(eta), kind=KIND_SOURCE, eta=float(eta)) for eta in self.eta_list]
        if self.includes_single_thermal:
            out.append(Curve(name=CURVE_SINGLE_THERMAL, kind=KIND_SINGLE_THERMAL, eta=1.0))
        if self.includes_coherent:
            out.append(Curve(name=CURVE_COHERENT, kind=KIND_COHERENT))
        return out

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "n_signal": self.n_signal,
            "n_low": self.n_low,
            "t0": self.t0,
            "omega1": self.omega1,
            "omega2": self.omega2,
            "g": self.g,
            "gprime": self.gprime,
            "eta_list": list(self.eta_list),
            "includes_single_thermal": self.includes_single_thermal,
            "includes_coherent": self.includes_coherent,
        }


def _asymmetric(name: str, sign: int, description: str) -> ScenarioPreset:
    omega1, omega2 = 1.5, 100.5
    g = separable_correlation(omega1, omega2, sign)
    return ScenarioPreset(
        name=name,
        n_signal=50.0,
        n_low=8.3e-3,
        t0=0.8,
        omega1=omega1,
        omega2=omega2,
        g=g,
        gprime=g,
        description=description,
    )


PRESETS: Dict[str, ScenarioPreset] = {
    p.name: p
    for p in (
        ScenarioPreset(
            name="pure_loss",
            n_signal=10.0,
            n_low=1e-4,
            t0=0.7,
            omega1=0.5,
            omega2=0.5,
            description="zero-temperature bath; eta=0.01 approaches the coherent benchmark",
        ),
        ScenarioPreset(
            name="thermal_loss",
            n_signal=20.0,
            n_low=0.12,
            t0=0.4,
            omega1=1.83,
            omega2=1.83,
            description="room-temperature bath at 3.5 THz (n_env = 1.33)",
        ),
        ScenarioPreset(
            name="correlated_symmetric",
            n_signal=50.0,
            n_low=8.3e-3,
            t0=0.8,
            omega1=20.84,
            omega2=20.84,
            g=0.5 - 20.84,
            gprime=0.5 - 20.84,
            description="correlated bath, g = g' = 1/2 - omega; every source beats the benchmark",
        ),
        _asymmetric(
            "correlated_asymmetric_negative",
            -1,
            "asymmetric bath with negative correlations; only strongly asymmetric sources win",
        ),
        _asymmetric(
            "correlated_asymmetric_positive",
            +1,
            "asymmetric bath with positive correlations; the benchmark is not beaten",
        ),
    )
}


def preset(name: str) -> ScenarioPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise DomainError(f"Unknown scenario {name!r}; expected one of {', '.join(PRESETS)}") from None
