from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import block_diag

from thermal_qfi.errors import DomainError

from .symplectic import (
    MODE_MAJOR,
    _check_ordering,
    beam_splitter,
    check_symmetric,
    congruence,
    reorder,
    symplectic_eigenvalues,
)

SHOT_NOISE = 0.5
PHYSICALITY_TOL = 1e-10


def _frozen(x: np.ndarray) -> np.ndarray:
    out = np.array(x, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GaussianState:
    """
    Gaussian state of `n_modes` bosonic modes: mean vector and covariance
    matrix in shot-noise units (vacuum variance 1/2).
    Stored mode-major unless `ordering` says otherwise.
    """
    mean: np.ndarray
    cov: np.ndarray
    ordering: str = MODE_MAJOR

    def __post_init__(self):
        _check_ordering(self.ordering)
        cov = check_symmetric(self.cov)
        mean = np.asarray(self.mean, dtype=float)
        if mean.shape != (cov.shape[0],):
            raise DomainError(f"Mean of shape {mean.shape} does not match a {cov.shape[0]}x{cov.shape[0]} CM")
        nu_min = float(symplectic_eigenvalues(cov, self.ordering)[0])
        if nu_min < SHOT_NOISE - PHYSICALITY_TOL:
            raise DomainError(f"Unphysical state: smallest symplectic eigenvalue {nu_min:.12g} < 1/2")
        object.__setattr__(self, "cov", _frozen(cov))
        object.__setattr__(self, "mean", _frozen(mean))

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2

    def reordered(self, ordering: str) -> "GaussianState":
        if ordering == self.ordering:
            return self
        return GaussianState(
            mean=reorder(self.mean, self.ordering, ordering),
            cov=reorder(self.cov, self.ordering, ordering),
            ordering=ordering,
        )

    def mode_block(self, mode: int) -> "GaussianState":
        if not 0 <= mode < self.n_modes:
            raise DomainError(f"mode index {mode} out of range for {self.n_modes} modes")
        mm = self.reordered(MODE_MAJOR)
        sl = slice(2 * mode, 2 * mode + 2)
        return GaussianState(mean=mm.mean[sl], cov=mm.cov[sl, sl])

    def photon_number(self, mode: int = 0) -> float:
        m = self.mode_block(mode)
        return float((np.trace(m.cov) + m.mean @ m.mean) / 2.0 - SHOT_NOISE)


def tensor(*states: GaussianState) -> GaussianState:
    """Product state, mode-major, modes in argument order."""
    parts = [s.reordered(MODE_MAJOR) for s in states]
    return GaussianState(
        mean=np.concatenate([p.mean for p in parts]),
        cov=block_diag(*[p.cov for p in parts]),
    )


def thermal_state(n_bar: float) -> GaussianState:
    n_bar = float(n_bar)
    if n_bar < 0:
        raise DomainError(f"n_bar must be non-negative, got {n_bar}")
    return GaussianState(mean=np.zeros(2), cov=(n_bar + SHOT_NOISE) * np.eye(2))


def coherent_state(n_bar: float, phase: float = 0.0) -> GaussianState:
    """
    Coherent state with n_bar = |alpha|^2, alpha = (q + i p) / sqrt(2);
    `phase` sets the direction of the mean vector.
    """
    n_bar = float(n_bar)
    if n_bar < 0:
        raise DomainError(f"n_bar must be non-negative, got {n_bar}")
    r = np.sqrt(2.0 * n_bar)
    mean = np.array([r * np.cos(phase), r * np.sin(phase)])
    return GaussianState(mean=mean, cov=SHOT_NOISE * np.eye(2))


@dataclass(frozen=True)
class SourceSpec:
    """
    Correlated-thermal source: thermal states with n_high and n_low photons
    mixed on a beam splitter of transmissivity eta; mode A is the signal.
    """
    eta: float
    n_high: float
    n_low: float

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise DomainError(f"eta must lie in (0,1], got {self.eta}")
        if self.n_low < 0:
            raise DomainError(f"n_low must be non-negative, got {self.n_low}")
        if self.n_high < self.n_low:
            raise DomainError(f"n_high ({self.n_high}) must be >= n_low ({self.n_low})")

    @property
    def mu_high(self) -> float:
        return self.n_high + SHOT_NOISE

    @property
    def mu_low(self) -> float:
        return self.n_low + SHOT_NOISE

    @property
    def n_signal(self) -> float:
        return self.eta * self.n_high + (1.0 - self.eta) * self.n_low


@dataclass(frozen=True)
class TwoModeCov:
    """
    Block-form two-mode CM: diag(a, a, b, b) on the diagonal and
    cross-covariances c1 (qq) and c2 (pp).
    """
    a: float
    b: float
    c1: float
    c2: float

    def __post_init__(self):
        if self.a < SHOT_NOISE - PHYSICALITY_TOL or self.b < SHOT_NOISE - PHYSICALITY_TOL:
            raise DomainError(f"Diagonal variances must be >= 1/2, got a={self.a}, b={self.b}")
        bound = np.sqrt(self.a * self.b)
        if abs(self.c1) >= bound or abs(self.c2) >= bound:
            raise DomainError(f"Cross-covariances must satisfy |c| < sqrt(ab) = {bound:.12g}")

    def to_cov(self) -> np.ndarray:
        return np.array(
            [
                [self.a, 0.0, self.c1, 0.0],
                [0.0, self.a, 0.0, self.c2],
                [self.c1, 0.0, self.b, 0.0],
                [0.0, self.c2, 0.0, self.b],
            ]
        )

    @classmethod
    def from_cov(cls, cov: np.ndarray, ordering: str = MODE_MAJOR, tol: float = 1e-12) -> "TwoModeCov":
        v = reorder(check_symmetric(cov), ordering, MODE_MAJOR)
        if v.shape != (4, 4):
            raise DomainError(f"Expected a two-mode CM, got shape {v.shape}")
        out = cls(a=float(v[0, 0]), b=float(v[2, 2]), c1=float(v[0, 2]), c2=float(v[1, 3]))
        if float(np.max(np.abs(v - out.to_cov()))) > tol * max(1.0, float(np.max(np.abs(v)))):
            raise DomainError("Covariance matrix is not of block form (a I, b I, diag(c1, c2))")
        return out

    def to_state(self, mean: Optional[np.ndarray] = None) -> GaussianState:
        return GaussianState(mean=np.zeros(4) if mean is None else mean, cov=self.to_cov())


def make_source(spec: SourceSpec) -> GaussianState:
    """
    Two-mode zero-mean state with
      a = eta mu_H + (1-eta) mu_L,  b = eta mu_L + (1-eta) mu_H,
      c = sqrt(eta (1-eta)) (mu_L - mu_H).
    """
    eta, mu_h, mu_l = spec.eta, spec.mu_high, spec.mu_low
    a = eta * mu_h + (1.0 - eta) * mu_l
    b = eta * mu_l + (1.0 - eta) * mu_h
    c = np.sqrt(eta * (1.0 - eta)) * (mu_l - mu_h)
    return TwoModeCov(a=a, b=b, c1=c, c2=c).to_state()


def make_source_by_mixing(spec: SourceSpec) -> GaussianState:
    """Same source built as S (mu_H I (+) mu_L I) S^T with S = beam_splitter(eta)."""
    s = beam_splitter(spec.eta)
    v_in = block_diag(spec.mu_high * np.eye(2), spec.mu_low * np.eye(2))
    return GaussianState(mean=np.zeros(4), cov=congruence(s, v_in))


def source_for_signal(n_signal: float, eta: float, n_low: float = 0.0) -> SourceSpec:
    """
    Source whose mode A carries `n_signal` photons:
    n_high = (n_signal - (1-eta) n_low) / eta.
    """
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"eta must lie in (0,1], got {eta}")
    if n_low < 0:
        raise DomainError(f"n_low must be non-negative, got {n_low}")
    n_high = (n_signal - (1.0 - eta) * n_low) / eta
    if n_high < n_low:
        raise DomainError(
            f"Infeasible source: n_signal={n_signal} with eta={eta} and n_low={n_low} "
            f"needs n_high={n_high:.6g} < n_low"
        )
    return SourceSpec(eta=float(eta), n_high=float(n_high), n_low=float(n_low))
