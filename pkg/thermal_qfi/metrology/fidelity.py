from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from thermal_qfi.core.states import GaussianState
from thermal_qfi.core.symplectic import QUAD_MAJOR, check_symmetric, symplectic_form
from thermal_qfi.errors import DomainError, NumericalError

from .linalg import matrix_sqrt_principal

# log F may exceed 0 by this much before it is treated as a failure.
CLAMP_TOL = 1e-9
SINGULAR_COND = 1e14
# relative mismatch between the q and p blocks still read as a passive CM
PASSIVE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class FidelityInputs:
    """
    Covariance matrices in quadrature-major ordering and the mean
    difference delta = x1 - x2 (zero when omitted).
    """
    v1: np.ndarray
    v2: np.ndarray
    delta: Optional[np.ndarray] = None

    def __post_init__(self):
        v1 = check_symmetric(self.v1)
        v2 = check_symmetric(self.v2)
        if v1.shape != v2.shape:
            raise DomainError(f"CM shapes differ: {v1.shape} vs {v2.shape}")
        dim = v1.shape[0]
        delta = np.zeros(dim) if self.delta is None else np.asarray(self.delta, dtype=float)
        if delta.shape != (dim,):
            raise DomainError(f"delta of shape {delta.shape} does not match {dim}x{dim} CMs")
        object.__setattr__(self, "v1", v1)
        object.__setattr__(self, "v2", v2)
        object.__setattr__(self, "delta", delta)

    @classmethod
    def from_states(cls, s1: GaussianState, s2: GaussianState) -> "FidelityInputs":
        if s1.n_modes != s2.n_modes:
            raise DomainError(f"States have different mode counts: {s1.n_modes} vs {s2.n_modes}")
        q1 = s1.reordered(QUAD_MAJOR)
        q2 = s2.reordered(QUAD_MAJOR)
        return cls(v1=q1.cov, v2=q2.cov, delta=q1.mean - q2.mean)


def _clamp(log_f: float) -> float:
    if np.isnan(log_f):
        raise NumericalError("Fidelity evaluated to NaN")
    if log_f > CLAMP_TOL:
        raise NumericalError(f"Fidelity exceeds 1 beyond rounding (log F = {log_f:.3e})")
    return min(log_f, 0.0)


def _solve(v_sum: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if np.linalg.cond(v_sum) > SINGULAR_COND:
        raise NumericalError("V1 + V2 is numerically singular")
    return np.linalg.solve(v_sum, rhs)


def passive_occupations(v: np.ndarray) -> Optional[np.ndarray]:
    """
    Occupation matrix N = P + iQ - I/2 of a quadrature-major CM of the
    form [[P, -Q], [Q, P]] (a phase-insensitive state), or None when V
    has any other form or N is not positive semidefinite. N is returned
    real when Q vanishes.
    """
    n = v.shape[0] // 2
    qq, qp, pq, pp = v[:n, :n], v[:n, n:], v[n:, :n], v[n:, n:]
    tol = PASSIVE_RTOL * max(1.0, float(np.max(np.abs(v))))
    if np.max(np.abs(qq - pp)) > tol or np.max(np.abs(qp + pq)) > tol:
        return None
    occ = 0.5 * (qq + pp) - 0.5 * np.eye(n)
    if np.any(pq - qp):
        occ = occ + 0.5j * (pq - qp)
    if np.linalg.eigvalsh(occ).min() < -tol:
        return None
    return occ


def _log_cm_term_passive(n1: np.ndarray, n2: np.ndarray) -> float:
    """
    Phase-insensitive states are rho = det(I - X) Gamma(X) with
    X = N (I + N)^-1, so
      F = sqrt(det(I - X1) det(I - X2)) / det(I - sqrt(sqrt(X1) X2 sqrt(X1))).
    Up to two modes everything is written with traces and determinants of
    N itself (2x2: X = (N + det(N) I) / det(I + N)), so a near-pure mode
    never goes through a square root or an inverse on its own.
    """
    m = n1.shape[0]
    if m == 1:
        a1, a2 = max(float(n1[0, 0].real), 0.0), max(float(n2[0, 0].real), 0.0)
        log_plus = np.log1p(a1) + np.log1p(a2)
        denom = 1.0 - np.sqrt(a1 * a2 / ((1.0 + a1) * (1.0 + a2)))
    elif m == 2:
        d1, d2 = float(np.linalg.det(n1).real), float(np.linalg.det(n2).real)
        t1, t2 = float(np.trace(n1).real), float(np.trace(n2).real)
        plus1, plus2 = 1.0 + t1 + d1, 1.0 + t2 + d2
        log_plus = np.log(plus1) + np.log(plus2)
        # tr(X1 X2) and sqrt(det X1 det X2)
        tr_y = (float(np.trace(n1 @ n2).real) + d2 * t1 + d1 * t2 + 2.0 * d1 * d2) / (plus1 * plus2)
        prod = np.sqrt(max(d1 * d2, 0.0) / (plus1 * plus2))
        total = np.sqrt(max(tr_y + 2.0 * prod, 0.0))
        denom = 1.0 - total + prod
    else:
        eye = np.eye(m)
        x1 = eye - np.linalg.inv(eye + n1)
        x2 = eye - np.linalg.inv(eye + n2)
        w, u = np.linalg.eigh(x1)
        root1 = (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T
        y = np.linalg.eigvalsh(root1 @ x2 @ root1)
        log_plus = np.linalg.slogdet(eye + n1)[1] + np.linalg.slogdet(eye + n2)[1]
        denom = float(np.prod(1.0 - np.sqrt(np.clip(y, 0.0, None))))

    if not denom > 0:
        raise NumericalError(f"Phase-insensitive fidelity denominator is not positive ({denom:.3e})")
    return float(-0.5 * log_plus - np.log(denom))


def _log_cm_term(v1: np.ndarray, v2: np.ndarray) -> float:
    """
    log of the zero-mean fidelity. Phase-insensitive pairs use the
    closed form in `_log_cm_term_passive`; anything else goes through
      F^4 = det[2 (sqrt(I + (V_aux Omega)^-2 / 4) + I) V_aux] / det(V1 + V2)
      V_aux = Omega^T (V1 + V2)^-1 (Omega / 4 + V2 Omega V1)
    """
    if np.array_equal(v1, v2):
        return 0.0
    n1, n2 = passive_occupations(v1), passive_occupations(v2)
    if n1 is not None and n2 is not None:
        return _log_cm_term_passive(n1, n2)
    return _log_cm_term_general(v1, v2)


def _log_cm_term_general(v1: np.ndarray, v2: np.ndarray) -> float:
    n = v1.shape[0] // 2
    omega = symplectic_form(n, QUAD_MAJOR)
    eye = np.eye(2 * n)
    v_sum = v1 + v2

    v_aux = omega.T @ _solve(v_sum, omega / 4.0 + v2 @ omega @ v1)
    m_inv = np.linalg.inv(v_aux @ omega)
    root = matrix_sqrt_principal(eye + 0.25 * (m_inv @ m_inv))

    sign_num, logdet_num = np.linalg.slogdet(2.0 * (root + eye) @ v_aux)
    sign_den, logdet_den = np.linalg.slogdet(v_sum)
    if sign_num <= 0 or sign_den <= 0:
        raise NumericalError("Fidelity determinant ratio is not positive")
    return 0.25 * float(logdet_num - logdet_den)


def _log_displacement_term(v_sum: np.ndarray, delta: np.ndarray) -> float:
    if not np.any(delta):
        return 0.0
    return -0.25 * float(delta @ _solve(v_sum, delta))


def log_fidelity_inputs(inputs: FidelityInputs) -> float:
    log_f = _log_cm_term(inputs.v1, inputs.v2) + _log_displacement_term(inputs.v1 + inputs.v2, inputs.delta)
    return _clamp(log_f)


def log_fidelity(s1: GaussianState, s2: GaussianState) -> float:
    """log F(s1, s2); <= 0 always."""
    return log_fidelity_inputs(FidelityInputs.from_states(s1, s2))


def fidelity_zero_mean(v1: np.ndarray, v2: np.ndarray) -> float:
    """
    Root fidelity of two zero-mean Gaussian states given their
    quadrature-major CMs.
    """
    return float(np.exp(log_fidelity_inputs(FidelityInputs(v1=v1, v2=v2))))


def fidelity_displaced(v: np.ndarray, delta: np.ndarray) -> float:
    """Equal CMs, means differing by delta: exp(-delta^T (2V)^-1 delta / 4)."""
    inputs = FidelityInputs(v1=v, v2=v, delta=delta)
    return float(np.exp(log_fidelity_inputs(inputs)))


def fidelity_general(s1: GaussianState, s2: GaussianState) -> float:
    """Zero-mean fidelity of the CMs times the displacement factor."""
    return float(np.exp(log_fidelity(s1, s2)))


def infidelity(s1: GaussianState, s2: GaussianState) -> float:
    """1 - F without the cancellation of subtracting from one."""
    return float(-np.expm1(log_fidelity(s1, s2)))
