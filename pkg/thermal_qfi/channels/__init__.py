from .dilation import channel_symplectic, evolve_dilation_oracle
from .loss import (
    ChannelParams,
    EnvironmentSpec,
    evolve_coherent,
    evolve_source,
    reduced_state,
)
