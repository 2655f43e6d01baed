"""Functional-equation toolkit: roots, orbits, semi-stable and pseudostable
solutions, complete monotonicity and positive definiteness checks."""
from .functional import (CDCoefficients, ConstraintError, Dense, Discrete, Inconclusive, SubordinatedSampler,
                         build_log_periodic, cd_functions, classify_orbit, compute_cd, lemma1_residual,
                         orbit_cd, prop3_transform, pseudostable_mixing, solve_p, verify_eq2)
from .monotone import check_cm, derivative_factors
from .posdef import check_pd
from .powersum import PowerSum, TermOverflow

__all__ = [
    "CDCoefficients", "ConstraintError", "Dense", "Discrete", "Inconclusive", "PowerSum", "SubordinatedSampler",
    "TermOverflow", "build_log_periodic", "cd_functions", "check_cm", "check_pd", "classify_orbit", "compute_cd",
    "derivative_factors", "lemma1_residual", "orbit_cd", "prop3_transform", "pseudostable_mixing", "solve_p",
    "verify_eq2",
]
