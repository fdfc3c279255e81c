from __future__ import annotations

from typing import Sequence

import numpy as np

from thermal_qfi.errors import DomainError

# Canonical quadrature orderings.
MODE_MAJOR = "qpqp"    # q_A, p_A, q_B, p_B, ...
QUAD_MAJOR = "qqpp"    # q_A, q_B, ..., p_A, p_B, ...
ORDERINGS = {MODE_MAJOR, QUAD_MAJOR}

SYMMETRY_TOL = 1e-12


def _check_ordering(ordering: str) -> None:
    if ordering not in ORDERINGS:
        raise DomainError(f"Unknown ordering tag: {ordering!r} (expected one of {sorted(ORDERINGS)})")


def symplectic_form(n_modes: int, ordering: str = MODE_MAJOR) -> np.ndarray:
    """
    Omega for `n_modes` modes; [[0, I], [-I, 0]] in quadrature-major
    ordering, block-diagonal [[0, 1], [-1, 0]] per mode in mode-major.
    """
    _check_ordering(ordering)
    n = int(n_modes)
    if n < 1:
        raise DomainError(f"n_modes must be positive, got {n_modes}")
    if ordering == QUAD_MAJOR:
        eye = np.eye(n)
        zero = np.zeros((n, n))
        return np.block([[zero, eye], [-eye, zero]])
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _permutation(n_modes: int) -> np.ndarray:
    # mode-major index of each quadrature-major slot
    return np.concatenate([np.arange(0, 2 * n_modes, 2), np.arange(1, 2 * n_modes, 2)])


def reorder(x: np.ndarray, from_ordering: str, to_ordering: str) -> np.ndarray:
    """
    Permute a covariance matrix (2n x 2n) or a mean vector (2n) between
    the two canonical orderings. Pure permutation, no arithmetic.
    """
    _check_ordering(from_ordering)
    _check_ordering(to_ordering)
    arr = np.asarray(x, dtype=float)
    dim = arr.shape[0]
    if dim % 2 or (arr.ndim == 2 and arr.shape != (dim, dim)) or arr.ndim not in (1, 2):
        raise DomainError(f"Expected a 2n vector or 2n x 2n matrix, got shape {arr.shape}")
    if from_ordering == to_ordering:
        return arr.copy()

    perm = _permutation(dim // 2)
    if from_ordering == QUAD_MAJOR:
        perm = np.argsort(perm)
    if arr.ndim == 1:
        return arr[perm]
    return arr[np.ix_(perm, perm)]


def beam_splitter(eta: float) -> np.ndarray:
    """
    Two-mode beam splitter of transmissivity eta, mode-major ordering:
    S = [[sqrt(eta) I, sqrt(1-eta) I], [-sqrt(1-eta) I, sqrt(eta) I]].
    Mixing diag(mu_H I, mu_L I) gives cross-covariance
    sqrt(eta (1-eta)) (mu_L - mu_H) <= 0.
    """
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0,1], got {eta}")
    t = np.sqrt(eta)
    r = np.sqrt(1.0 - eta)
    return np.kron(np.array([[t, r], [-r, t]]), np.eye(2))


def expand_symplectic(s: np.ndarray, modes: Sequence[int], n_modes: int) -> np.ndarray:
    """
    Embed a symplectic acting on `modes` (mode-major) into the identity on
    an `n_modes` register.
    """
    k = len(modes)
    if s.shape != (2 * k, 2 * k):
        raise DomainError(f"Symplectic of shape {s.shape} does not act on {k} modes")
    if len(set(modes)) != k or min(modes) < 0 or max(modes) >= n_modes:
        raise DomainError(f"Invalid target modes {list(modes)} for a {n_modes}-mode register")
    idx = np.array([2 * m + j for m in modes for j in (0, 1)])
    out = np.eye(2 * n_modes)
    out[np.ix_(idx, idx)] = s
    return out


def check_symmetric(cov: np.ndarray, tol: float = SYMMETRY_TOL) -> np.ndarray:
    v = np.asarray(cov, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
        raise DomainError(f"Covariance matrix must be 2n x 2n, got shape {v.shape}")
    asym = float(np.max(np.abs(v - v.T))) if v.size else 0.0
    if asym > tol:
        raise DomainError(f"Covariance matrix is not symmetric (max asymmetry {asym:.3e})")
    return v


def symplectic_eigenvalues(cov: np.ndarray, ordering: str = MODE_MAJOR) -> np.ndarray:
    """
    Sorted symplectic spectrum (n values): moduli of the eigenvalues of
    i Omega V, each of which appears twice.
    """
    v = check_symmetric(cov)
    omega = symplectic_form(v.shape[0] // 2, ordering)
    ev = np.sort(np.abs(np.linalg.eigvals(1j * omega @ v)))
    return ev[::2]


def congruence(s: np.ndarray, cov: np.ndarray) -> np.ndarray:
    """S V S^T, symmetrized against matmul rounding."""
    out = s @ cov @ s.T
    return 0.5 * (out + out.T)
