"""Planar Gaussian random fields and their scaled Ornstein-Uhlenbeck representations.

The catalog covers the standard Wiener field (Brownian sheet), the stationary
Ornstein-Uhlenbeck field, bivariate and tied-down Wiener bridges, tied-down
scaled Wiener bridges, the Kiefer process, and (F,G)-Wiener bridges.  Every
product-type member is also expressed as a space-domain scaled stationary OU
field; the package evaluates both forms, samples them exactly on grids, and
verifies the representation identities deterministically and by Monte Carlo.
"""

from ._backend import backend_name
from .grids import GridSpec, fraction_grid, interior_linspace
from .kernels import (
    CdfSpec,
    DomainError,
    Kernel2D,
    OUParams,
    bivariate_bridge_field,
    covariance_matrix,
    eval_bivariate_bridge,
    eval_fg_bridge,
    eval_kiefer,
    eval_ou,
    eval_scaled_bridge_axis,
    eval_tied_down_bridge,
    eval_wiener,
    exponential_cdf,
    fg_bridge_field,
    kiefer_field,
    ou_field,
    scaled_bridge_field,
    tied_down_bridge_field,
    uniform_cdf,
    wiener_field,
)
from .mcverify import EmpiricalCovariance, covariance_gate, covariance_gate_matrix, \
    empirical_covariance, ou_stationarity_gate
from .reporting import VerificationReport, reports_to_json
from .sampling import (
    GENERATOR_ID,
    FactorizationError,
    FieldSample,
    factorize,
    sample_bridge_via_wiener,
    sample_dense,
    sample_kronecker,
    sample_ou_via_wiener,
    write_samples_csv,
)
from .transforms import (
    AxisTransform,
    OURepresentation,
    bivariate_slice_candidates,
    identity_check,
    induced_covariance,
    rank_one_defect,
    reduced_wiener_form,
    scaled_representation,
    separability_falsifier,
    transform_fg,
    transform_kiefer,
    transform_scaled,
    transform_tied_down,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
