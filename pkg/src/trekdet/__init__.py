"""Cancellation-free expansions of covariance minors in Gaussian graphical models."""

from .determinant import (
    DetExpansion,
    ExpansionClass,
    det_acyclic,
    det_polynomial,
    det_rational,
    det_rational_expr,
    trek_separated,
    verify_positivity,
    verify_power_of_two,
)
from .flows import (
    SelfAvoidingFlow,
    TrekFlow,
    enumerate_flows,
    enumerate_trek_flows,
    flow_sign,
    pair_sign,
    path_matrix_det,
    trek_flow_monomial,
    trek_flow_sign,
    up_down_cycles,
)
from .graphs import (
    DiGraph,
    MixedGraph,
    VariableId,
    bidirected_subdivision,
    build_trek_graph,
    is_acyclic,
    lambda_var,
    omega_var,
    parse_graph,
)
from .oracle import det_leibniz, oracle_compare, sigma_matrix, sigma_series_truncated
from .polynomial import (
    Monomial,
    Polynomial,
    RationalExpr,
    canonical_string,
    rat_equal,
    subdivision_pullback,
    subdivision_pullback_exact,
)
from .treks import Trek, enumerate_treks, sigma_entry_collapsed, sigma_entry_truncated, tailswap, trek_monomial

__version__ = "0.1.0"
