"""Beamformer weight design for heterogeneous loudspeaker arrays.

The package designs complex drive weights that hold a generalized
directivity index (GDI) exactly at a target value while maximizing
either radiated efficiency (equality-constrained eigenvector designs)
or minimizing drive effort under a distortionless response constraint,
plus the unconstrained Rayleigh-quotient designs they extend.
"""

from .arrays import (
    ArraySpec,
    DirectionDensity,
    Transducer,
    covariance_from_density,
    density_from_window,
    gdi,
    steering_vector,
    three_way_array,
    three_way_penalty_breakpoints,
)
from .grq import (
    GrqResult,
    PenaltyWeights,
    build_penalty,
    interpolate_lambdas,
    max_grpq,
    max_grq,
)
from .linalg import (
    ConvergenceError,
    EigenDecomposition,
    GeneralizedEig,
    NotPositiveDefinite,
    cholesky,
    eig_hermitian,
    generalized_eig,
    symmetrize,
)
from .mecd import (
    ConstraintMatrix,
    DivergenceError,
    InfeasibleTau,
    MecdResult,
    build_constraint,
    mecd_dm,
    mecd_pa,
    project_onto_quadric,
)
from .mscd import ConstraintDegenerate, MscdResult, mscd_solve
from .secular import (
    AllPolesOneSign,
    SecularProblem,
    SecularRoot,
    build_secular,
    eval_secular,
    solve_secular,
)

__version__ = "0.1.0"

__all__ = [
    "AllPolesOneSign",
    "ArraySpec",
    "ConstraintDegenerate",
    "ConstraintMatrix",
    "ConvergenceError",
    "DirectionDensity",
    "DivergenceError",
    "EigenDecomposition",
    "GeneralizedEig",
    "GrqResult",
    "InfeasibleTau",
    "MecdResult",
    "MscdResult",
    "NotPositiveDefinite",
    "PenaltyWeights",
    "SecularProblem",
    "SecularRoot",
    "Transducer",
    "build_constraint",
    "build_penalty",
    "build_secular",
    "cholesky",
    "covariance_from_density",
    "density_from_window",
    "eig_hermitian",
    "eval_secular",
    "gdi",
    "generalized_eig",
    "interpolate_lambdas",
    "max_grpq",
    "max_grq",
    "mecd_dm",
    "mecd_pa",
    "mscd_solve",
    "project_onto_quadric",
    "solve_secular",
    "steering_vector",
    "symmetrize",
    "three_way_array",
    "three_way_penalty_breakpoints",
]
