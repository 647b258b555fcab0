"""Spectral simulation and verification toolkit for damped elastic waves."""

__version__ = "0.1.0"

from .asymptotics import (
    DecayReport,
    LinearSource,
    Moments,
    NormSpec,
    decay_slope,
    linear_norm,
    linear_norm_series,
    moments,
    nonlinear_moment,
    profile_error_series,
    profile_hat,
)
from .audit import (
    BoundScanReport,
    decay_fit,
    dilation_ratios,
    heat_multiplier_l1,
    inequality_check,
    symbol_bound_scan,
)
from .elastic import (
    ElasticState,
    LameParams,
    default_cutoffs,
    diagonalize_check,
    duhamel_increment,
    linear_propagate,
    matrix_kernel,
    projection,
)
from .grid import (
    CutoffSpec,
    Grid3,
    VectorField,
    apply_symbol,
    lp_norm,
    make_field,
    make_grid,
    transform,
)
from .kernels import (
    DampingParams,
    KernelEval,
    char_roots,
    diffusion_hat,
    kernel_eval,
    kernel_hat,
    lowfreq_residual,
    mode_oracle,
    wave_hat,
)
from .radial import radial_l2_norm
from .solver import (
    ContractionTensor,
    SolverConfig,
    Trajectory,
    evolve,
    nonlinearity,
    picard_iterate,
    x1_norm,
)

__all__ = [
    "DampingParams",
    "KernelEval",
    "char_roots",
    "kernel_hat",
    "kernel_eval",
    "diffusion_hat",
    "wave_hat",
    "mode_oracle",
    "lowfreq_residual",
    "Grid3",
    "VectorField",
    "CutoffSpec",
    "make_grid",
    "make_field",
    "transform",
    "apply_symbol",
    "lp_norm",
    "radial_l2_norm",
    "LameParams",
    "ElasticState",
    "projection",
    "matrix_kernel",
    "linear_propagate",
    "duhamel_increment",
    "diagonalize_check",
    "default_cutoffs",
    "ContractionTensor",
    "SolverConfig",
    "Trajectory",
    "nonlinearity",
    "evolve",
    "picard_iterate",
    "x1_norm",
    "Moments",
    "DecayReport",
    "NormSpec",
    "LinearSource",
    "moments",
    "nonlinear_moment",
    "profile_hat",
    "decay_slope",
    "linear_norm",
    "linear_norm_series",
    "profile_error_series",
    "BoundScanReport",
    "inequality_check",
    "dilation_ratios",
    "decay_fit",
    "symbol_bound_scan",
    "heat_multiplier_l1",
]
