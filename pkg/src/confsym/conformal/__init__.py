"""Curved conformal geometry in exact jet arithmetic."""

from .experiment import ExperimentReport, flat_cross_check, yamabe_ckt_experiment, yamabe_ckt_residual
from .geometry import GeometryCache, MetricJet, SingularMetric, geometry_cache
from .invariance import (
    Background,
    InvarianceReport,
    infer_output_weight,
    invariance_check,
    random_background,
)
from .pairings import (
    curved_delta,
    curved_second_symmetry,
    factorization_identity_residual,
    inner_product_curved,
    pairing_first,
    pairing_oneform,
    pairing_second,
    special_weight_operators,
    yamabe_apply,
)
from .rescaling import (
    ConformalFactor,
    connection_change_residual,
    cov_deriv,
    curvature_transform_residual,
    rescale,
    transform_field,
)

__all__ = [
    "Background",
    "ConformalFactor",
    "ExperimentReport",
    "GeometryCache",
    "InvarianceReport",
    "MetricJet",
    "SingularMetric",
    "connection_change_residual",
    "cov_deriv",
    "curvature_transform_residual",
    "curved_delta",
    "curved_second_symmetry",
    "factorization_identity_residual",
    "flat_cross_check",
    "geometry_cache",
    "infer_output_weight",
    "inner_product_curved",
    "invariance_check",
    "pairing_first",
    "pairing_oneform",
    "pairing_second",
    "random_background",
    "rescale",
    "special_weight_operators",
    "transform_field",
    "yamabe_apply",
    "yamabe_ckt_experiment",
    "yamabe_ckt_residual",
]
