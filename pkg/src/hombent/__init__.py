"""Evolutionary search and exact census tooling for homogeneous bent Boolean functions."""

from hombent.census import (
    asymptotic_quadratic_density,
    density_report,
    enumerate_homogeneous_bent,
    known_cubic_k_values,
    quadratic_bent_count,
    quadratic_bent_oracle,
)
from hombent.core import (
    AnfVector,
    TruthTable,
    WalshSpectrum,
    algebraic_degree,
    anf_to_truth_table,
    covering_radius_bound,
    homogeneity_repair,
    is_bent,
    is_homogeneous,
    mobius_transform,
    monomial_count,
    nonlinearity,
    walsh_hadamard,
)
from hombent.engine import EngineConfig, LocalSearchConfig, RunResult, run_sst
from hombent.fitness import FitnessValue, count_max_values, fit_bent, fit_bent_k

__version__ = "0.1.0"

__all__ = [
    "AnfVector",
    "EngineConfig",
    "FitnessValue",
    "LocalSearchConfig",
    "RunResult",
    "TruthTable",
    "WalshSpectrum",
    "algebraic_degree",
    "anf_to_truth_table",
    "asymptotic_quadratic_density",
    "count_max_values",
    "covering_radius_bound",
    "density_report",
    "enumerate_homogeneous_bent",
    "fit_bent",
    "fit_bent_k",
    "homogeneity_repair",
    "is_bent",
    "is_homogeneous",
    "known_cubic_k_values",
    "mobius_transform",
    "monomial_count",
    "nonlinearity",
    "quadratic_bent_count",
    "quadratic_bent_oracle",
    "run_sst",
    "walsh_hadamard",
    "__version__",
]
