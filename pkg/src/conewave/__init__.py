"""Band-limited wave packets under strictly convex dispersion: exact
evaluation, one-term cone approximations, explicit error constants, and the
variance-minimizing cone origin."""

from .band_profile import (
    BandProfile,
    Shape,
    SpectralMoments,
    l1_norm_u0,
    make_profile,
    spectral_moments,
)
from .errors import (
    AccuracyError,
    ConcavityError,
    ConewaveError,
    ConvexityError,
    DegenerateBandError,
    DomainError,
    EmptyFieldError,
    RangeError,
    StationaryPointInBandError,
)
from .moments import (
    MomentReport,
    SampledField,
    firstterm_field,
    firstterm_moments_closed,
    mean_match_check,
    solution_field,
    solution_moments_closed,
    spatial_moments,
    variance_gap,
)
from .oscillatory import OscillatoryJob, integrate_smooth, oscillatory_integral
from .stationary_phase import (
    ExpansionConstants,
    PhaseData,
    Side,
    L_delta,
    exterior_constants,
    expand_with_bound,
    first_term,
    fresnel_primitive,
    interior_constants,
    phase_diffeo,
    phase_from_symbol,
)
from .symbols import Symbol, SymbolKind, band_extrema, eval_derivs, invert_velocity
from .wavepacket import (
    ConeConstants,
    ConeSpec,
    OriginResult,
    Region,
    argmin_variance_scan,
    classify_point,
    cone_constants,
    evaluate_solution,
    first_term_H,
    make_cone,
    optimal_origin,
    remainder_bound,
    shift_norm_g,
    shifted_lp_check,
)

__version__ = "0.1.0"
