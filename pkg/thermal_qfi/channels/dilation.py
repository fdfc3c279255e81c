from __future__ import annotations

import numpy as np

from thermal_qfi.core.states import GaussianState, tensor, thermal_state
from thermal_qfi.core.symplectic import MODE_MAJOR, beam_splitter, congruence, expand_symplectic
from thermal_qfi.errors import DomainError

from .loss import ChannelParams

# register layout
MODE_A, MODE_B, MODE_V, MODE_E1, MODE_E2 = range(5)
N_MODES = 5


def channel_symplectic(params: ChannelParams) -> np.ndarray:
    """
    10x10 symplectic on (A, B, V, E1, E2): beam_splitter(tau) on (A, V),
    then beam_splitter(T0) on (A, E1) and on (B, E2).
    """
    loss = expand_symplectic(beam_splitter(params.tau), [MODE_A, MODE_V], N_MODES)
    dec_a = expand_symplectic(beam_splitter(params.env.t0), [MODE_A, MODE_E1], N_MODES)
    dec_b = expand_symplectic(beam_splitter(params.env.t0), [MODE_B, MODE_E2], N_MODES)
    return dec_b @ dec_a @ loss


def evolve_dilation_oracle(source: GaussianState, params: ChannelParams) -> GaussianState:
    """
    Reference evolution by unitary dilation: the source, a vacuum ancilla V
    and the (mixed) environment evolve under passive symplectics, then V,
    E1 and E2 are traced out.
    """
    if source.n_modes != 2:
        raise DomainError(f"evolve_dilation_oracle expects a two-mode state, got {source.n_modes} modes")
    env_state = GaussianState(mean=np.zeros(4), cov=params.env.cov)
    register = tensor(source.reordered(MODE_MAJOR), thermal_state(0.0), env_state)

    s = channel_symplectic(params)
    cov = congruence(s, register.cov)
    mean = s @ register.mean
    keep = slice(0, 4)
    return GaussianState(mean=mean[keep], cov=cov[keep, keep])
