"""Exact arithmetic for the Weyl algebra, its trace cocycle and the local index identity.

Everything is computed over the rationals with a formal parameter ``e``;
no floating point is involved anywhere.
"""
from __future__ import annotations

from .scalars import EPS, ONE, ZERO, EpsScalar
from .weyl import DimensionError, SpMatrix, WeylElement, bracket, moyal, quadratic_to_sp, sp_action, sp_to_quadratic
from .hochschild import ChainTensor, canonical_cycle, hochschild_boundary, normalize_chain
from .integrate import OrderedRegion, UPolynomial, closed_form_I, integrate_over_region, psi_cycle_integral
from .cocycle import alpha_apply, mu_apply, pi_apply, tau_closed_form_n1, tau_eval, tau_sigma_eval
from .lie import GlWeylElement, WedgeTuple, cup_product, d_lie_eval, flat_trace_density, phi_n_apply, theta_eval
from .chern_weil import (
    CartanPoint,
    HElement,
    InvariantPoly,
    ahat_ch_component,
    chi_eval,
    comb_factor,
    curvature_C,
    genfun_check,
    p_n_cartan_graphsum,
    p_n_cartan_integral,
    polarize,
    project_pr,
    rrh_check,
    special_vectors,
)
from .parsing import ParseError, parse_weyl_expression
from .suites import SuiteReport, emit_report, run_suite

__all__ = [
    "EPS",
    "ONE",
    "ZERO",
    "EpsScalar",
    "DimensionError",
    "SpMatrix",
    "WeylElement",
    "bracket",
    "moyal",
    "quadratic_to_sp",
    "sp_action",
    "sp_to_quadratic",
    "ChainTensor",
    "canonical_cycle",
    "hochschild_boundary",
    "normalize_chain",
    "OrderedRegion",
    "UPolynomial",
    "closed_form_I",
    "integrate_over_region",
    "psi_cycle_integral",
    "alpha_apply",
    "mu_apply",
    "pi_apply",
    "tau_closed_form_n1",
    "tau_eval",
    "tau_sigma_eval",
    "GlWeylElement",
    "WedgeTuple",
    "cup_product",
    "d_lie_eval",
    "flat_trace_density",
    "phi_n_apply",
    "theta_eval",
    "CartanPoint",
    "HElement",
    "InvariantPoly",
    "ahat_ch_component",
    "chi_eval",
    "comb_factor",
    "curvature_C",
    "genfun_check",
    "p_n_cartan_graphsum",
    "p_n_cartan_integral",
    "polarize",
    "project_pr",
    "rrh_check",
    "special_vectors",
    "ParseError",
    "parse_weyl_expression",
    "SuiteReport",
    "emit_report",
    "run_suite",
]

__version__ = "0.1.0"
