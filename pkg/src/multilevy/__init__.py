"""multilevy: spectral toolkit for multiparameter Levy-type operator families.

Builds probability measures from multi-time characteristic exponents
b(s_1..s_k; xi), applies the associated contraction operators as Fourier
multipliers or convolutions, evaluates the mixed-derivative symbol
a(s; xi) = exp(b) d^k/ds_1..ds_k exp(-b), and solves the characteristic-data
hyperbolic problem d^2 v/ds dt = a(s,t;D) v numerically against its closed
form.
"""

from .errors import (
    AccuracyError,
    AccuracyWarning,
    CapabilityError,
    ContractError,
    DimensionMismatchError,
    GridTooSmallError,
    InputError,
    MultilevyError,
    SymbolIntegrityError,
)
from .symbols import (
    Block,
    Combination,
    Drift,
    LogEuclid,
    Power,
    Quadratic,
    Relativistic,
    Symbol,
    check_negative_definite,
    standard_catalog,
    symbol_from_dict,
    symbol_to_dict,
    zero_symbol,
)
from .timefamily import (
    CurveRestriction,
    GrowthEstimate,
    Identity,
    Interaction,
    Monomial,
    PowerLaw,
    ProductCoupling,
    SaturatingCoupling,
    Separable,
    Sqrt,
    TimeFamily,
    estimate_growth,
    family_from_dict,
    family_to_dict,
    restrict_to_curve,
)
from .spectral import (
    FrequencyGrid,
    GriddedMeasure,
    SpatialField,
    SpectralField,
    apply_convolution,
    apply_multiplier,
    apply_symbol_multiplier,
    auto_frequency_grid,
    check_commutation,
    check_contraction,
    fourier_forward,
    fourier_inverse,
    gaussian_field,
    random_band_limited_field,
    synthesize_measure,
)
from .symbolcalc import (
    DerivedSymbol,
    apply_derived_symbol,
    set_partitions,
    symbol_closed_form,
    symbol_finite_difference,
    symbol_from_partitions,
)
from .goursat import (
    GoursatProblem,
    GoursatSolution,
    check_boundary_limits,
    exact_solution,
    mixed_derivative_residual,
    residual_decay,
    solve_picard,
    solve_transformed,
)
from .montecarlo import (
    SampleBatch,
    ecf_check,
    sample_measure,
    semigroup_convolution_check,
    uniform_stream,
)

__version__ = "0.1.0"
