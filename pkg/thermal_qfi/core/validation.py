from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from thermal_qfi.errors import DomainError
from thermal_qfi.types import PhysicalityReport

from .states import PHYSICALITY_TOL, SHOT_NOISE
from .symplectic import MODE_MAJOR, check_symmetric, reorder

BLOCK_FORM_TOL = 1e-12


@dataclass(frozen=True)
class TwoModeInvariants:
    delta: float
    delta_tilde: float
    det: float
    nu_sq: float
    nu_tilde_sq: float


def _smaller_root(delta: float, det: float) -> float:
    # (delta - sqrt(delta^2 - 4 det)) / 2, written without the cancellation
    disc = np.sqrt(max(delta * delta - 4.0 * det, 0.0))
    denom = delta + disc
    if denom <= 0.0:
        return 0.0
    return float(2.0 * det / denom)


def two_mode_invariants(cov: np.ndarray, ordering: str = MODE_MAJOR) -> TwoModeInvariants:
    """
    Symplectic invariants of a two-mode CM V = [[A, C], [C^T, B]]:
    Delta = det A + det B + 2 det C, and Delta~ with the sign of det C
    flipped (partial transposition). nu^2 and nu~^2 are the smaller
    roots of x^2 - Delta x + det V.
    """
    v = reorder(check_symmetric(cov), ordering, MODE_MAJOR)
    if v.shape != (4, 4):
        raise DomainError(f"Expected a two-mode CM, got shape {v.shape}")
    det_a = float(np.linalg.det(v[:2, :2]))
    det_b = float(np.linalg.det(v[2:, 2:]))
    det_c = float(np.linalg.det(v[:2, 2:]))
    det_v = float(np.linalg.det(v))
    delta = det_a + det_b + 2.0 * det_c
    delta_tilde = det_a + det_b - 2.0 * det_c
    return TwoModeInvariants(
        delta=delta,
        delta_tilde=delta_tilde,
        det=det_v,
        nu_sq=_smaller_root(delta, det_v),
        nu_tilde_sq=_smaller_root(delta_tilde, det_v),
    )


def environment_cov(omega1: float, omega2: float, g: float, gprime: float) -> np.ndarray:
    """Mode-major CM [[omega1 I, G], [G, omega2 I]] with G = diag(g, g')."""
    return np.array(
        [
            [omega1, 0.0, g, 0.0],
            [0.0, omega1, 0.0, gprime],
            [g, 0.0, omega2, 0.0],
            [0.0, gprime, 0.0, omega2],
        ],
        dtype=float,
    )


def separable_correlation(omega1: float, omega2: float, sign: int = -1) -> float:
    """
    g = g' = sign * sqrt((2 omega1 - 1)(2 omega2 - 1)) / 2, which keeps
    the environment both physical and separable.
    """
    if omega1 < SHOT_NOISE or omega2 < SHOT_NOISE:
        raise DomainError(f"omega1, omega2 must be >= 1/2, got {omega1}, {omega2}")
    if sign not in (-1, 1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    return sign * float(np.sqrt((2.0 * omega1 - 1.0) * (2.0 * omega2 - 1.0))) / 2.0


def _block_entries(cov: np.ndarray, ordering: str):
    v = reorder(check_symmetric(cov), ordering, MODE_MAJOR)
    if v.shape != (4, 4):
        raise DomainError(f"Expected a two-mode CM, got shape {v.shape}")
    w1, w2, g, gp = float(v[0, 0]), float(v[2, 2]), float(v[0, 2]), float(v[1, 3])
    scale = max(1.0, float(np.max(np.abs(v))))
    if float(np.max(np.abs(v - environment_cov(w1, w2, g, gp)))) > BLOCK_FORM_TOL * scale:
        raise DomainError("Covariance matrix is not of block form (omega1 I, omega2 I, diag(g, g'))")
    return w1, w2, g, gp


def _nu_ok(nu_sq: float, tol: float) -> bool:
    return float(np.sqrt(max(nu_sq, 0.0))) >= SHOT_NOISE - tol


def check_physical(cov: np.ndarray, ordering: str = MODE_MAJOR, tol: float = PHYSICALITY_TOL) -> PhysicalityReport:
    """
    Physicality of a block-form two-mode CM:
      |g| < sqrt(omega1 omega2), |g'| < sqrt(omega1 omega2), nu^2 >= 1/4.
    Separability (nu~^2 >= 1/4) is filled in when the CM is physical.
    """
    w1, w2, g, gp = _block_entries(cov, ordering)
    inv = two_mode_invariants(cov, ordering)
    bound = float(np.sqrt(max(w1 * w2, 0.0)))
    constraints = {
        "|g| < sqrt(omega1 omega2)": abs(g) < bound,
        "|g'| < sqrt(omega1 omega2)": abs(gp) < bound,
        "nu^2 >= 1/4": _nu_ok(inv.nu_sq, tol),
    }
    report = PhysicalityReport(
        omega1=w1,
        omega2=w2,
        g=g,
        gprime=gp,
        nu_sq=inv.nu_sq,
        nu_tilde_sq=inv.nu_tilde_sq,
        constraints=constraints,
    )
    if report.physical:
        report.separable = _nu_ok(inv.nu_tilde_sq, tol)
    return report


def check_separable(cov: np.ndarray, ordering: str = MODE_MAJOR, tol: float = PHYSICALITY_TOL) -> bool:
    report = check_physical(cov, ordering, tol)
    report.raise_if_failed()
    return bool(report.separable)
