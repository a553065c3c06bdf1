"""Exact Dunkl-operator calculus for law-of-large-numbers moments of Bessel generating functions."""
from .combinatorics import catalan, enumerate_nc, partitions_of, sigma
from .cumulants import (
    finalvalue_rhs,
    free_cumulant,
    mixed_moment_limit,
    moment_from_cumulants,
    moment_via_residue,
    moments_from_spec,
    theorem_value_rhs,
)
from .dunkl import (
    MultivariatePoly,
    coefficient_poly_fit,
    d_r_product,
    divided_switch,
    dunkl_apply,
    finite_mixed_moment,
    q_r_product,
)
from .ensembles import hermite_log_bgf, hermite_spec, monte_carlo_moments, sample_beta_hermite
from .series import (
    LIMIT,
    AxialSeries,
    CumulantSpec,
    SymmetricSeries,
    TruncationError,
    apply_Q,
    apply_R,
    axial_mul,
    constant_term,
)

__version__ = "0.1.0"
