import numpy as np
import pytest

from conftest import random_environment
from thermal_qfi.channels import (
    ChannelParams,
    EnvironmentSpec,
    evolve_coherent,
    evolve_dilation_oracle,
    evolve_source,
    reduced_state,
)
from thermal_qfi.core.states import (
    SourceSpec,
    TwoModeCov,
    coherent_state,
    make_source,
    source_for_signal,
    tensor,
    thermal_state,
)
from thermal_qfi.core.validation import check_physical
from thermal_qfi.errors import DomainError


def _vacuum_env(t0=1.0):
    return EnvironmentSpec.symmetric(t0=t0, omega=0.5)


def test_identity_channel_leaves_source_unchanged():
    src = make_source(SourceSpec(eta=0.5, n_high=20, n_low=0))
    out = evolve_source(src, ChannelParams(tau=1.0, env=_vacuum_env()))
    assert np.allclose(out.cov, src.cov)
    assert np.allclose(out.mean, src.mean)


def test_full_loss_leaves_vacuum_on_a():
    src = make_source(SourceSpec(eta=0.3, n_high=12, n_low=1))
    cm = TwoModeCov.from_cov(evolve_source(src, ChannelParams(tau=0.0, env=_vacuum_env())).cov)
    assert cm.a == pytest.approx(0.5)
    assert cm.c1 == 0.0 and cm.c2 == 0.0


def test_closed_form_coefficients_example():
    src = make_source(SourceSpec(eta=0.5, n_high=20, n_low=0))
    env = EnvironmentSpec.symmetric(t0=0.7, omega=0.5)
    cm = TwoModeCov.from_cov(evolve_source(src, ChannelParams(tau=0.5, env=env)).cov)
    assert cm.a == pytest.approx(4.0)
    assert cm.b == pytest.approx(7.5)
    assert cm.c1 == pytest.approx(0.7 * np.sqrt(0.5) * -10.0)
    assert cm.c2 == pytest.approx(-4.9497, abs=1e-4)


def test_evolve_coherent_examples():
    s = evolve_coherent(10, 1.0, 1.0, 0.5)
    ref = coherent_state(10)
    assert np.allclose(s.mean, ref.mean) and np.allclose(s.cov, ref.cov)

    assert evolve_coherent(10, 0.5, 0.7, 0.5).cov[0, 0] == pytest.approx(0.5)
    assert evolve_coherent(20, 0.5, 0.4, 1.83).cov[0, 0] == pytest.approx(1.298)


def test_evolve_coherent_pure_loss_composition(rng):
    for _ in range(20):
        n, tau, t0, phase = rng.uniform(0, 50), rng.uniform(0, 1), rng.uniform(0.01, 1), rng.uniform(0, 6.3)
        out = evolve_coherent(n, tau, t0, 0.5, phase)
        direct = coherent_state(n * t0 * tau, phase)
        assert np.allclose(out.mean, direct.mean, atol=1e-12)
        assert np.allclose(out.cov, 0.5 * np.eye(2))


def test_evolve_coherent_validation():
    with pytest.raises(DomainError):
        evolve_coherent(1.0, 1.2, 0.5, 0.5)
    with pytest.raises(DomainError):
        evolve_coherent(1.0, 0.5, 0.0, 0.5)
    with pytest.raises(DomainError):
        evolve_coherent(1.0, 0.5, 0.5, 0.3)


def test_channel_params_validation():
    with pytest.raises(DomainError, match=r"tau must lie in \[0,1\]"):
        ChannelParams(tau=1.5, env=_vacuum_env())
    with pytest.raises(DomainError):
        ChannelParams(tau=-0.1, env=_vacuum_env())


def test_environment_validation():
    with pytest.raises(DomainError):
        EnvironmentSpec.symmetric(t0=0.0, omega=1.0)
    with pytest.raises(DomainError):
        EnvironmentSpec.symmetric(t0=0.5, omega=0.4)
    with pytest.raises(DomainError):
        EnvironmentSpec.symmetric(t0=0.5, omega=1.0, g=1.5)
    env = EnvironmentSpec.from_n_env(t0=0.4, n_env1=1.33)
    assert env.omega1 == pytest.approx(1.83)
    assert env.is_symmetric


def test_oracle_matches_closed_form_on_random_grid(rng):
    for _ in range(200):
        eta = rng.uniform(0.01, 1.0)
        n_low = rng.uniform(0.0, 2.0)
        n_high = n_low + rng.uniform(0.0, 50.0)
        src = make_source(SourceSpec(eta=eta, n_high=n_high, n_low=n_low))
        params = ChannelParams(tau=float(rng.uniform(0.0, 1.0)), env=random_environment(rng))

        closed = evolve_source(src, params)
        oracle = evolve_dilation_oracle(src, params)
        assert np.max(np.abs(closed.cov - oracle.cov)) < 1e-12
        assert check_physical(closed.cov).physical


def test_oracle_transports_displacement(rng):
    mean = rng.normal(size=4) * 3.0
    src = make_source(SourceSpec(eta=0.4, n_high=8, n_low=0.2))
    shifted = TwoModeCov.from_cov(src.cov).to_state(mean)
    params = ChannelParams(tau=0.37, env=random_environment(rng))
    closed = evolve_source(shifted, params)
    oracle = evolve_dilation_oracle(shifted, params)
    assert np.max(np.abs(closed.mean - oracle.mean)) < 1e-12
    assert np.max(np.abs(closed.cov - oracle.cov)) < 1e-12


def test_oracle_identity():
    src = make_source(SourceSpec(eta=0.5, n_high=4, n_low=0))
    out = evolve_dilation_oracle(src, ChannelParams(tau=1.0, env=_vacuum_env()))
    assert np.allclose(out.cov, src.cov)


def test_uncorrelated_environment_acts_mode_by_mode():
    src = tensor(thermal_state(6.0), thermal_state(2.0))
    env = EnvironmentSpec(t0=0.6, omega1=1.2, omega2=3.0)
    out = evolve_dilation_oracle(src, ChannelParams(tau=0.3, env=env))

    a = 0.6 * (0.3 * 6.5 + 0.7 * 0.5) + 0.4 * 1.2
    b = 0.6 * 2.5 + 0.4 * 3.0
    assert np.allclose(out.cov, np.diag([a, a, b, b]))


def test_monotone_damping():
    src = make_source(SourceSpec(eta=0.2, n_high=40, n_low=0.1))
    env = EnvironmentSpec.symmetric(t0=0.8, omega=2.0, g=-0.5)
    taus = np.linspace(0.0, 1.0, 11)
    cms = [TwoModeCov.from_cov(evolve_source(src, ChannelParams(tau=t, env=env)).cov) for t in taus]
    a = [cm.a for cm in cms]
    src_c = TwoModeCov.from_cov(src.cov).c1
    assert all(y > x for x, y in zip(a, a[1:]))
    # the source part of c1 scales with sqrt(tau)
    shifts = [cm.c1 - 0.2 * env.g for cm in cms]
    assert np.allclose(shifts, 0.8 * np.sqrt(taus) * src_c)


def test_reduced_state_examples():
    src = make_source(source_for_signal(10, 0.01, 0.0))
    assert np.allclose(reduced_state(src, 0).cov, 10.5 * np.eye(2))
    assert reduced_state(src, 1).cov[0, 0] == pytest.approx(0.99 * 1000.5 + 0.01 * 0.5)

    vac = tensor(thermal_state(0), thermal_state(0))
    assert np.allclose(reduced_state(vac, 1).cov, 0.5 * np.eye(2))
    with pytest.raises(DomainError):
        reduced_state(vac, 2)
