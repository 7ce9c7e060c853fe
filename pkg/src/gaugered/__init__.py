"""Discrete gauge field theory on rectangular lattice charts.

Exterior calculus with Lie-algebra-valued forms, Maxwell and Yang-Mills
residuals, gauge transformations, Noether currents, gradient-flow solvers and
reconstruction of connections from curvature.
"""
from .gauge import (
    GroupField,
    ProjectionWarning,
    bracket_wedge,
    covariant_derivative,
    curvature,
    gauge_transform_connection,
    gauge_transform_curvature,
    group_derivative_term,
    phi_map,
)
from .io import read_snapshot, write_snapshot
from .lattice import (
    FormField,
    LatticeChart,
    MetricSignature,
    codifferential,
    exterior_derivative,
    hodge_star,
    inner_product,
    pointwise_pairing,
    star_inverse,
    wedge,
)
from .lie import SU2, U1, LieAlgebra, algebra_by_name
from .reconstruct import CompatibilityError, flatness_residual, holonomy, poincare_reconstruct
from .samples import PlaneWave, SmoothForm, random_form
from .theory import (
    NoetherPreconditionError,
    ResidualReport,
    Theory,
    action,
    bianchi_residual,
    coadjoint_curvature_residual,
    delta_l_delta_F,
    lagrangian_density,
    maxwell_residual,
    noether_current,
    noether_divergence,
    ym_residual,
)
from .variation import (
    FlowDivergenceError,
    FlowParams,
    analytic_action_gradient,
    gradient_flow_solve,
    numeric_action_gradient,
    reduction_equivalence_check,
)

__version__ = "0.1.0"

__all__ = [
    "CompatibilityError",
    "FlowDivergenceError",
    "FlowParams",
    "FormField",
    "GroupField",
    "LatticeChart",
    "LieAlgebra",
    "MetricSignature",
    "NoetherPreconditionError",
    "PlaneWave",
    "ProjectionWarning",
    "ResidualReport",
    "SU2",
    "SmoothForm",
    "Theory",
    "U1",
    "action",
    "algebra_by_name",
    "analytic_action_gradient",
    "bianchi_residual",
    "bracket_wedge",
    "coadjoint_curvature_residual",
    "codifferential",
    "covariant_derivative",
    "curvature",
    "delta_l_delta_F",
    "exterior_derivative",
    "flatness_residual",
    "gauge_transform_connection",
    "gauge_transform_curvature",
    "gradient_flow_solve",
    "group_derivative_term",
    "hodge_star",
    "holonomy",
    "inner_product",
    "lagrangian_density",
    "maxwell_residual",
    "noether_current",
    "noether_divergence",
    "numeric_action_gradient",
    "phi_map",
    "poincare_reconstruct",
    "pointwise_pairing",
    "random_form",
    "read_snapshot",
    "reduction_equivalence_check",
    "star_inverse",
    "wedge",
    "write_snapshot",
    "ym_residual",
]

