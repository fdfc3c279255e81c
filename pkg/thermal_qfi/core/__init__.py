from .states import (
    SHOT_NOISE,
    GaussianState,
    SourceSpec,
    TwoModeCov,
    coherent_state,
    make_source,
    make_source_by_mixing,
    source_for_signal,
    tensor,
    thermal_state,
)
from .symplectic import (
    MODE_MAJOR,
    QUAD_MAJOR,
    beam_splitter,
    expand_symplectic,
    reorder,
    symplectic_eigenvalues,
    symplectic_form,
)
from .validation import (
    check_physical,
    check_separable,
    environment_cov,
    separable_correlation,
    two_mode_invariants,
)
