"""Radial bound states with the origin boundary condition made explicit."""

from .errors import (
    BracketError,
    ClassificationError,
    ConfigError,
    DivergentVolumeError,
    DomainError,
    FallToCenterError,
    PolicyError,
    RadialBCError,
    RegimeError,
    SolverConvergenceError,
    StartOffError,
    UnsupportedClassError,
)
from .potentials import (
    Coulomb,
    Harmonic,
    InverseSquare,
    OriginClass,
    PotentialModel,
    PowerLaw,
    SphericalWell,
    SumPotential,
    Tabulated,
    evaluate,
    origin_class,
    origin_series,
)
from .indicial import IndicialReport, admissibility_table, solve_indicial
from .grid import RadialGrid
from .solver import (
    DirichletOrigin,
    EigenResult,
    L2Only,
    Level,
    MixedSAE,
    RadialProblem,
    SolverOptions,
    find_level,
    kg_effective,
    sae_bound_state,
    sae_oracle_energy,
    sae_oracle_kappa,
    series_start,
    spectrum,
)
from .deltadiag import (
    CandidateU,
    Power,
    PowerPair,
    ResidualReport,
    Sampled,
    residual_limit,
    sphere_residual,
)

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "CandidateU",
    "ClassificationError",
    "ConfigError",
    "Coulomb",
    "DirichletOrigin",
    "DivergentVolumeError",
    "DomainError",
    "EigenResult",
    "FallToCenterError",
    "Harmonic",
    "IndicialReport",
    "InverseSquare",
    "L2Only",
    "Level",
    "MixedSAE",
    "OriginClass",
    "PolicyError",
    "PotentialModel",
    "Power",
    "PowerLaw",
    "PowerPair",
    "RadialBCError",
    "RadialGrid",
    "RadialProblem",
    "RegimeError",
    "ResidualReport",
    "Sampled",
    "SolverConvergenceError",
    "SolverOptions",
    "SphericalWell",
    "StartOffError",
    "SumPotential",
    "Tabulated",
    "UnsupportedClassError",
    "admissibility_table",
    "evaluate",
    "find_level",
    "kg_effective",
    "origin_class",
    "origin_series",
    "residual_limit",
    "sae_bound_state",
    "sae_oracle_energy",
    "sae_oracle_kappa",
    "series_start",
    "spectrum",
    "sphere_residual",
]
