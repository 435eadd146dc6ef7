"""Vertex couplings of quantum graphs and their approximation by delta networks."""

from .approximation import ApproxParams, ApproxTopology, build_params, check_limits, neighbor_sets
from .convergence import QuadConfig, convergence_sweep, hs_nn_closed_form, hs_norm_difference
from .coupling import (
    Coupling,
    STForm,
    couplings_equivalent,
    delta_coupling,
    delta_unitary,
    from_unitary,
    st_to_coupling,
    to_st_form,
    validate,
)
from .resolvent import SpectralPoint, assemble_m, default_kappa, eval_kernel_ad, lambda_ad

__all__ = [
    "ApproxParams",
    "ApproxTopology",
    "Coupling",
    "QuadConfig",
    "STForm",
    "SpectralPoint",
    "assemble_m",
    "build_params",
    "check_limits",
    "convergence_sweep",
    "couplings_equivalent",
    "default_kappa",
    "delta_coupling",
    "delta_unitary",
    "eval_kernel_ad",
    "from_unitary",
    "hs_nn_closed_form",
    "hs_norm_difference",
    "lambda_ad",
    "neighbor_sets",
    "st_to_coupling",
    "to_st_form",
    "validate",
]
