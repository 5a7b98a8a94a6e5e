"""Electric discrete-time quantum walk: simulator, spectra, and statistics.

A walker with a two-level internal state moves on a 1-D integer lattice; each
step applies a coin rotation, a spin-conditioned shift, and a linear phase
e^{i phi x} (the electric field). The package simulates pure and dephased
evolution exactly at desk scale, computes quasi-energy band structure for
rational fields, and provides the measurement statistics used to present
finite-shot data (Clopper-Pearson intervals).
"""

__version__ = "0.1.0"

from .analysis import (
    DiscriminationReport,
    Distribution,
    ExpFitResult,
    WidthSeries,
    convergents,
    distinguishing_steps,
    fit_two_sided_exponential,
    position_distribution,
    return_probability,
    rms_width,
    time_averaged_distribution,
    tv_distance,
    width_series,
)
from .engine import (
    WalkParams,
    apply_coin,
    apply_field,
    apply_shift,
    dephase,
    evolve,
    evolve_density,
    step,
)
from .errors import (
    ConfigError,
    DomainError,
    EwalkError,
    FitError,
    WindowOverflowError,
)
from .kernels import BACKEND
from .spectral import (
    BandStructure,
    BandTransferReport,
    RationalPhase,
    band_flatness,
    band_structure,
    band_transfer,
    bloch_matrix,
    dispersion_free,
    free_step_matrix,
    group_velocity,
    velocity_multiset,
)
from .states import (
    DensityState,
    MomentumSpinor,
    SiteWindow,
    SpinorState,
    density_from_pure,
    inverse_momentum_transform,
    momentum_transform,
    new_localized,
    purity,
)
from .stats import (
    CountsRecord,
    IntervalEstimate,
    clopper_pearson,
    empirical_distribution,
    sample_measurements,
)
