"""Landau operator with a delta or delta-prime interaction on a circle.

Per-channel special functions, secular equations, eigenvalue search, Green
kernels with the rank-one shell correction, and special-function-free
reference solvers for cross-checking.
"""

from .channel import (
    ChannelParams,
    InteractionKind,
    SolutionSample,
    SpinBranch,
    eval_f,
    eval_g,
    landau_levels,
    psi_vector,
    wronskian,
)
from .greens import (
    GreenEvaluation,
    KreinCoefficients,
    SingularEnergyError,
    apply_resolvent,
    green_free,
    green_perturbed,
    mu_coeffs,
)
from .hyperfun import HyperDomainError, PrecisionLossError, kummer_m, tricomi_u
from .spectral import (
    InteractionSpec,
    SecularRoot,
    SolverOptions,
    SpectrumReport,
    count_negative,
    find_eigenvalues,
    secular_delta,
    secular_delta_prime,
    spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "InteractionKind",
    "SolutionSample",
    "SpinBranch",
    "eval_f",
    "eval_g",
    "landau_levels",
    "psi_vector",
    "wronskian",
    "GreenEvaluation",
    "KreinCoefficients",
    "SingularEnergyError",
    "apply_resolvent",
    "green_free",
    "green_perturbed",
    "mu_coeffs",
    "HyperDomainError",
    "PrecisionLossError",
    "kummer_m",
    "tricomi_u",
    "InteractionSpec",
    "SecularRoot",
    "SolverOptions",
    "SpectrumReport",
    "count_negative",
    "find_eigenvalues",
    "secular_delta",
    "secular_delta_prime",
    "spectrum",
]
