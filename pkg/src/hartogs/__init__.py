"""L^p ranges, kernels and Toeplitz eigenvalues on generalized Hartogs triangles."""
from .errors import (
    AccuracyError,
    ConditionError,
    DomainError,
    HartogsError,
    RangeError,
    SingularityError,
)
from .index_core import (
    HartogsExponent,
    MultiIndex,
    WitnessMonomial,
    enumerate_index_set,
    in_index_set,
    least_exponent,
    reduce_exponent,
    witness_monomial,
)
from .moments import (
    BoundaryPower,
    ModPower,
    MomentValue,
    adjoint_antiholo_constant,
    boundary_power_eigenvalue,
    mod_power_eigenvalue,
    monomial_norm_sq,
    parse_symbol,
    remark_29_integral,
    symbol_moment,
)
from .ranges import (
    INF,
    PRange,
    TypeCD,
    bergman_range,
    gain_consistency,
    r_upper_constraint,
    schur_exponents,
    schur_p_range,
    smoothing_outcome,
    toeplitz_mod_power_range,
    type_cd_range,
    unbounded_thresholds,
)
from .kernel import (
    DomainPoint,
    k_eta_power_majorant,
    kernel_estimate_rhs,
    kernel_partial_sum,
    ratio_diagnostic,
    type_cd_rhs,
)
from .quad import (
    QuadConfig,
    disc_lemma_check,
    integrate_polar,
    lp_divergence_scan,
    schur_estimate_check,
)

__version__ = "0.1.0"
