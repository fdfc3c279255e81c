from .benchmark import BenchmarkParams, decoherence_factor, qcr_error_bound, qfi_coherent_analytic
from .fidelity import (
    FidelityInputs,
    fidelity_displaced,
    fidelity_general,
    fidelity_zero_mean,
    infidelity,
    log_fidelity,
    passive_occupations,
)
from .linalg import matrix_sqrt_principal
from .qfi import CoherentProbe, QfiSettings, evolve_probe, qfi_curve, qfi_numeric

__all__ = [
    "BenchmarkParams",
    "CoherentProbe",
    "FidelityInputs",
    "QfiSettings",
    "decoherence_factor",
    "evolve_probe",
    "fidelity_displaced",
    "fidelity_general",
    "fidelity_zero_mean",
    "infidelity",
    "log_fidelity",
    "matrix_sqrt_principal",
    "passive_occupations",
    "qcr_error_bound",
    "qfi_coherent_analytic",
    "qfi_curve",
    "qfi_numeric",
]
