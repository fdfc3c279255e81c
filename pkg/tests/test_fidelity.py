import numpy as np
import pytest

from conftest import random_symplectic_cov
from thermal_qfi.channels.loss import ChannelParams, EnvironmentSpec, evolve_source
from thermal_qfi.core.states import (
    GaussianState,
    coherent_state,
    make_source,
    source_for_signal,
    tensor,
    thermal_state,
)
from thermal_qfi.core.symplectic import MODE_MAJOR, QUAD_MAJOR, reorder
from thermal_qfi.errors import DomainError, NumericalError
from thermal_qfi.metrology import (
    FidelityInputs,
    fidelity_displaced,
    fidelity_general,
    fidelity_zero_mean,
    infidelity,
    matrix_sqrt_principal,
)
from thermal_qfi.metrology.fidelity import _log_cm_term_general, _log_cm_term_passive, passive_occupations


def _q(cov):
    return reorder(cov, MODE_MAJOR, QUAD_MAJOR)


def _thermal_pair_cov(n):
    return _q(tensor(thermal_state(n), thermal_state(0)).cov)


def _thermal_oracle(n1, n2):
    return 1.0 / (np.sqrt((n1 + 1) * (n2 + 1)) - np.sqrt(n1 * n2))


def test_identical_states_have_unit_fidelity(rng):
    for _ in range(20):
        v = _q(random_symplectic_cov(rng))
        assert fidelity_zero_mean(v, v) == 1.0


def test_thermal_fidelity_example():
    f = fidelity_zero_mean(_thermal_pair_cov(0.0), _thermal_pair_cov(1.0))
    assert f == pytest.approx(1 / np.sqrt(2), abs=1e-10)


def test_thermal_fidelity_matches_closed_form(rng):
    for n1, n2 in rng.uniform(0.0, 20.0, size=(100, 2)):
        f = fidelity_zero_mean(_thermal_pair_cov(n1), _thermal_pair_cov(n2))
        assert abs(f - _thermal_oracle(n1, n2)) < 1e-10


def test_fidelity_bounds_and_symmetry(rng):
    for _ in range(500):
        v1 = _q(random_symplectic_cov(rng))
        v2 = _q(random_symplectic_cov(rng))
        f12 = fidelity_zero_mean(v1, v2)
        f21 = fidelity_zero_mean(v2, v1)
        assert 0.0 <= f12 <= 1.0
        assert f12 < 1.0
        assert abs(f12 - f21) < 1e-12


def test_fidelity_close_states_is_close_to_one(rng):
    v = random_symplectic_cov(rng)
    bump = np.diag([1e-4, 1e-4, 0.0, 0.0])
    f = fidelity_zero_mean(_q(v), _q(v + bump))
    assert 1.0 - 1e-6 < f < 1.0


def _random_passive_cov(rng, n_modes, nu_min=0.6, nu_max=5.0):
    """Thermal occupations dressed by a random passive (unitary) transform, quadrature-major."""
    z = rng.normal(size=(n_modes, n_modes)) + 1j * rng.normal(size=(n_modes, n_modes))
    u, _ = np.linalg.qr(z)
    s = np.block([[u.real, -u.imag], [u.imag, u.real]])
    nu = rng.uniform(nu_min, nu_max, size=n_modes)
    v = s @ np.diag(np.concatenate([nu, nu])) @ s.T
    return 0.5 * (v + v.T)


def test_passive_occupations_detects_phase_insensitive_cms(rng):
    occ = passive_occupations(_thermal_pair_cov(3.0))
    assert occ is not None and not np.iscomplexobj(occ)
    assert np.allclose(occ, np.diag([3.0, 0.0]))
    assert passive_occupations(_random_passive_cov(rng, 2)) is not None
    for _ in range(20):
        assert passive_occupations(_q(random_symplectic_cov(rng))) is None


@pytest.mark.parametrize("n_modes", [1, 2, 3])
def test_passive_closed_form_matches_general_path(rng, n_modes):
    for _ in range(50):
        v1 = _random_passive_cov(rng, n_modes)
        v2 = _random_passive_cov(rng, n_modes)
        n1, n2 = passive_occupations(v1), passive_occupations(v2)
        assert n1 is not None and n2 is not None
        assert _log_cm_term_passive(n1, n2) == pytest.approx(_log_cm_term_general(v1, v2), abs=1e-9)


def test_fidelity_near_pure_source_states():
    # one exactly pure mode in both states; 1 - F must stay ~ H h^2 / 8
    state = make_source(source_for_signal(10.0, 0.5, 0.0))
    env = EnvironmentSpec.symmetric(t0=1.0, omega=0.5)
    rho = evolve_source(state, ChannelParams(tau=0.5, env=env))
    for h in (1e-3, 1e-4, 1e-5):
        other = evolve_source(state, ChannelParams(tau=0.5 + h, env=env))
        infid = infidelity(rho, other)
        assert 0.0 < infid
        assert 8.0 * infid / h**2 < 20.0 * 1.01
        assert infid == pytest.approx(infidelity(other, rho), rel=1e-3)


def test_fidelity_displaced_examples():
    vac = 0.5 * np.eye(2)
    assert fidelity_displaced(vac, np.zeros(2)) == 1.0
    assert fidelity_displaced(vac, np.array([1.0, 1.0])) == pytest.approx(np.exp(-0.5))


def test_fidelity_displaced_coherent_channel_form():
    t0, omega, n_bar, tau, dtau = 0.7, 1.3, 10.0, 0.4, 1e-3
    a_prime = t0 / 2 + (1 - t0) * omega
    x_bar = np.array([np.sqrt(2 * n_bar), 0.0])
    step = np.sqrt(tau + dtau) - np.sqrt(tau)
    delta = np.sqrt(t0) * step * x_bar

    f = fidelity_displaced(a_prime * np.eye(2), delta)
    # |x_bar|^2 = 2 n_bar is absorbed: the exponent carries n_bar itself
    assert f == pytest.approx(np.exp(-(t0 / (4 * a_prime)) * step**2 * n_bar), rel=1e-14)


def test_fidelity_displaced_dimension_mismatch():
    with pytest.raises(DomainError):
        fidelity_displaced(0.5 * np.eye(2), np.zeros(4))


def test_fidelity_general_reduces_to_components(rng):
    s = GaussianState(mean=np.zeros(4), cov=random_symplectic_cov(rng))
    assert fidelity_general(s, s) == 1.0

    s1 = GaussianState(mean=np.zeros(4), cov=random_symplectic_cov(rng))
    s2 = GaussianState(mean=np.zeros(4), cov=random_symplectic_cov(rng))
    assert fidelity_general(s1, s2) == pytest.approx(fidelity_zero_mean(_q(s1.cov), _q(s2.cov)), rel=1e-14)

    c1, c2 = coherent_state(3.0, 0.2), coherent_state(2.5, 0.9)
    delta = c1.mean - c2.mean
    assert fidelity_general(c1, c2) == pytest.approx(fidelity_displaced(c1.cov, delta), rel=1e-14)
    assert 1.0 - fidelity_general(c1, c2) == pytest.approx(infidelity(c1, c2), rel=1e-10)


def test_fidelity_general_mode_mismatch():
    with pytest.raises(DomainError):
        fidelity_general(thermal_state(1.0), tensor(thermal_state(1.0), thermal_state(0.0)))


def test_fidelity_inputs_shape_checks():
    with pytest.raises(DomainError):
        FidelityInputs(v1=np.eye(2), v2=np.eye(4))
    with pytest.raises(DomainError):
        FidelityInputs(v1=np.eye(2), v2=np.eye(2), delta=np.zeros(3))


def test_matrix_sqrt_examples():
    assert np.allclose(matrix_sqrt_principal(np.eye(4)), np.eye(4))
    assert np.allclose(matrix_sqrt_principal(np.diag([4.0, 9.0, 1.0, 1.0])), np.diag([2.0, 3.0, 1.0, 1.0]))
    assert np.array_equal(matrix_sqrt_principal(np.zeros((2, 2))), np.zeros((2, 2)))


def test_matrix_sqrt_residuals(rng):
    for _ in range(500):
        a = rng.normal(size=(4, 4))
        spd = a @ a.T + 0.1 * np.eye(4)
        r = matrix_sqrt_principal(spd)
        assert np.linalg.norm(r @ r - spd, np.inf) / np.linalg.norm(spd, np.inf) < 1e-10


def test_matrix_sqrt_non_symmetric(rng):
    s = rng.normal(size=(4, 4)) + 3 * np.eye(4)
    d = np.diag([0.5, 2.0, 3.0, 7.0])
    m = s @ d @ np.linalg.inv(s)
    r = matrix_sqrt_principal(m)
    assert np.allclose(r @ r, m, atol=1e-10)
    assert np.allclose(r, s @ np.sqrt(d) @ np.linalg.inv(s), atol=1e-8)


def test_matrix_sqrt_rejects_negative_axis():
    with pytest.raises(NumericalError):
        matrix_sqrt_principal(np.diag([-1.0, 1.0]))
    with pytest.raises(DomainError):
        matrix_sqrt_principal(np.ones((2, 3)))
