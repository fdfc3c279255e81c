from __future__ import annotations

import numpy as np
import scipy.linalg

from thermal_qfi.errors import DomainError, NumericalError

SQRT_RESIDUAL_TOL = 1e-10
SQRT_IMAG_TOL = 1e-9
# eigenvalues this small (relative) are rounding noise around an exact zero
EIG_ZERO_TOL = 1e-14
EIGVEC_COND_MAX = 1e12


def _residual(r: np.ndarray, m: np.ndarray, scale: float) -> float:
    return float(np.linalg.norm(r @ r - m, np.inf)) / scale


def matrix_sqrt_principal(
    m: np.ndarray,
    residual_tol: float = SQRT_RESIDUAL_TOL,
    imag_tol: float = SQRT_IMAG_TOL,
) -> np.ndarray:
    """
    Principal square root of a real, not necessarily symmetric, matrix whose
    eigenvalues stay off the negative real axis.

    Primary path: complex eigendecomposition, principal branch per
    eigenvalue, real part kept. When the eigenvector basis is
    ill-conditioned or the residual check fails, scipy's Schur-based
    sqrtm is used instead. Eigenvalues within `imag_tol` (relative) of
    zero on the negative side are rounding and are clamped to zero.
    """
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"matrix_sqrt_principal needs a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.linalg.norm(a, np.inf)))

    w, vecs = np.linalg.eig(a)
    w = w.astype(complex)
    on_negative_axis = (w.real < 0.0) & (np.abs(w.imag) <= imag_tol * scale)
    if np.any(w.real[on_negative_axis] < -imag_tol * scale):
        raise NumericalError(f"Eigenvalue on the negative real axis: {w[on_negative_axis]}")
    w[on_negative_axis | (np.abs(w) <= EIG_ZERO_TOL * scale)] = 0.0

    root = None
    if np.linalg.cond(vecs) < EIGVEC_COND_MAX:
        root = vecs @ np.diag(np.sqrt(w)) @ np.linalg.inv(vecs)
        if float(np.max(np.abs(root.imag))) > imag_tol * scale or _residual(root.real, a, scale) > residual_tol:
            root = None

    if root is None:
        root = scipy.linalg.sqrtm(a)
        if isinstance(root, tuple):
            root = root[0]

    imag = float(np.max(np.abs(np.imag(root))))
    if imag > imag_tol * scale:
        raise NumericalError(f"Matrix square root has imaginary residue {imag:.3e}")
    r = np.real(root)
    res = _residual(r, a, scale)
    if res > residual_tol:
        raise NumericalError(f"Matrix square root residual {res:.3e} exceeds {residual_tol:.1e}")
    return r
