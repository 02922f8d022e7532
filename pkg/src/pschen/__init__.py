"""Toolkit for distribution levels, linear-sieve functions, and almost-prime
counts along Piatetski-Shapiro sequences.

The analytic core is exact: exponent pairs and level solving in rational
arithmetic, floor/ceil of rational powers with certified directed rounding,
and adaptive quadrature with reported error bounds. The empirical layer
counts actual PS primes, progression discrepancies, and weighted-sieve
patterns at desk scale.
"""

from .arith import (
    SingularSeriesResult,
    SpfTable,
    arith_fn,
    base_primes,
    big_omega,
    euler_phi,
    factor,
    heath_brown_check,
    heath_brown_max_residual,
    mobius,
    psi,
    psi_truncation_gap,
    spf_table,
    tau_r,
    twin_singular_series,
    von_mangoldt,
)
from .chen_bracket import (
    BracketBreakdown,
    chen_bracket,
    coeff_S,
    coeff_S1,
    coeff_S2,
    coeff_S3,
)
from .errors import (
    ConvergenceError,
    CostError,
    DomainError,
    PrecisionExhaustionError,
    PschenError,
)
from .exponent_pairs import BASELINE, ExponentPair, a_process, eph_pair, iterate_a
from .levels import (
    A3,
    A36,
    CONSTRAINT_NAMES,
    GAMMA0,
    LEVEL_LADDER,
    PAIR_PRESETS,
    LadderEntry,
    LevelQuery,
    LevelResult,
    constraint_bounds,
    constraints_at,
    decomposition_ok,
    solve_level,
    subproduct_window_check,
    theorem1_level,
    typeI_max_exponent,
    typeII_feasible,
)
from .ps_empirical import (
    ChenCounts,
    DiscrepancyReport,
    DiscrepancyRow,
    PrimeTable,
    PSContext,
    bv_discrepancy,
    chen_counts,
    chen_thresholds,
    count_near_diagonal,
    enumerate_ps,
    exp_sum_progression,
    is_ps,
    lemma_bound,
    pi_gamma,
    sieve_primes,
    verify_weight_inequality,
)
from .quadrature import adaptive_quad, nested_quadrature
from .sieve_functions import (
    C0,
    SieveFnValue,
    big_f,
    ddeq_residual,
    small_f,
    v_coefficient,
)

__version__ = "0.1.0"

__all__ = [
    "A3",
    "A36",
    "BASELINE",
    "BracketBreakdown",
    "C0",
    "CONSTRAINT_NAMES",
    "ChenCounts",
    "ConvergenceError",
    "CostError",
    "DiscrepancyReport",
    "DiscrepancyRow",
    "DomainError",
    "ExponentPair",
    "GAMMA0",
    "LEVEL_LADDER",
    "LadderEntry",
    "LevelQuery",
    "LevelResult",
    "PAIR_PRESETS",
    "PSContext",
    "PrecisionExhaustionError",
    "PrimeTable",
    "PschenError",
    "SieveFnValue",
    "SingularSeriesResult",
    "SpfTable",
    "a_process",
    "adaptive_quad",
    "arith_fn",
    "base_primes",
    "big_f",
    "big_omega",
    "bv_discrepancy",
    "chen_bracket",
    "chen_counts",
    "chen_thresholds",
    "coeff_S",
    "coeff_S1",
    "coeff_S2",
    "coeff_S3",
    "constraint_bounds",
    "constraints_at",
    "count_near_diagonal",
    "ddeq_residual",
    "decomposition_ok",
    "enumerate_ps",
    "eph_pair",
    "euler_phi",
    "exp_sum_progression",
    "factor",
    "heath_brown_check",
    "heath_brown_max_residual",
    "is_ps",
    "iterate_a",
    "lemma_bound",
    "mobius",
    "nested_quadrature",
    "pi_gamma",
    "psi",
    "psi_truncation_gap",
    "sieve_primes",
    "small_f",
    "solve_level",
    "spf_table",
    "subproduct_window_check",
    "tau_r",
    "theorem1_level",
    "twin_singular_series",
    "typeI_max_exponent",
    "typeII_feasible",
    "v_coefficient",
    "verify_weight_inequality",
    "von_mangoldt",
]
