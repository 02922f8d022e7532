"""The four weighted-sieve coefficients and the positivity bracket.

Everything here is the pure xi-functional left after factoring the common
prefactor S * x^gamma / log^2 x out of the main terms: coeff_S is the
lower-bound coefficient, coeff_S1/coeff_S2 carry their 1/2 weights
already, and chen_bracket(xi) assembles

    total = coeff_S - coeff_S1 - coeff_S2 - coeff_S3,

which must stay positive for the two-prime-factor conclusion. The cutoff
constants 10.92 and 3.29 are fixed decimal inputs of the method, not
tunables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .quadrature import adaptive_quad, nested_quadrature

T1_DEN = 10.92  # z1 = x^{1/10.92}, the sieve level
T2_DEN = 3.29  # z2 = x^{1/3.29}, the almost-prime cutoff

# coeff_S needs 10.92*xi - 1 in [4, 5] so its f-branch input is valid;
# coeff_S1 needs 4/10.92 <= xi <= 3/10.92 + 1/3.29 for ordered ranges.
XI_S_LO = 5.0 / T1_DEN
XI_S_HI = 6.0 / T1_DEN
XI_S1_LO = 4.0 / T1_DEN
XI_S1_HI = 3.0 / T1_DEN + 1.0 / T2_DEN


@dataclass(frozen=True)
class BracketBreakdown:
    """chen_bracket output: the four terms, their combination, error bound."""

    xi: float
    term_S: float
    term_S1: float
    term_S2: float
    term_S3: float
    total: float
    quad_error: float


def _coeff_s(xi: float, tol: float) -> tuple[float, float]:
    # validate xi against the exported window constants rather than the
    # recomputed u = 10.92*xi - 1, which can land one ulp past 5 at the
    # upper endpoint 6/10.92
    if not XI_S_LO <= xi <= XI_S_HI:
        raise DomainError(
            f"coeff_S needs 10.92*xi - 1 in [4, 5], i.e. xi in"
            f" [{XI_S_LO}, {XI_S_HI}], got xi={xi}"
        )
    u = T1_DEN * xi - 1.0
    scale = 4.0 / xi
    inner, err = nested_quadrature(
        lambda t1, t2: math.log(t2 - 1.0) / (t1 * t2),
        [(3.0, u), (2.0, lambda t1: t1 - 1.0)],
        tol / scale,
    )
    return scale * (math.log(u) + inner), scale * err


def _coeff_s1(xi: float, tol: float) -> tuple[float, float]:
    if not XI_S1_LO <= xi <= XI_S1_HI:
        raise DomainError(
            f"coeff_S1 needs xi in [{XI_S1_LO}, {XI_S1_HI}], got {xi}"
        )
    a_lo = 1.0 / T1_DEN
    a_mid = xi - 3.0 / T1_DEN
    a_hi = 1.0 / T2_DEN

    def outer(a: float) -> float:
        return 1.0 / (a * (xi - a))

    budget = tol / 2.0  # value is scaled by 2 below
    val_a, err_a = adaptive_quad(outer, a_mid, a_hi, budget / 3.0)
    val_b1, err_b1 = adaptive_quad(outer, a_lo, a_mid, budget / 3.0)
    val_b2, err_b2 = nested_quadrature(
        lambda a, b: math.log(b - 1.0) / (b * a * (xi - a)),
        [(a_lo, a_mid), (2.0, lambda a: T1_DEN * (xi - a) - 1.0)],
        budget / 3.0,
    )
    value = 2.0 * (val_a + val_b1 + val_b2)
    return value, 2.0 * (err_a + err_b1 + err_b2)


def _coeff_s2(xi: float, tol: float) -> tuple[float, float]:
    if xi <= 0:
        raise DomainError(f"coeff_S2 needs xi > 0, got {xi}")
    scale = 2.0 / xi
    value, err = nested_quadrature(
        lambda a1, a2: 1.0 / (a1 * a2 * (1.0 - a1 - a2)),
        [(1.0 / T1_DEN, 1.0 / T2_DEN), (1.0 / T2_DEN, lambda a1: (1.0 - a1) / 2.0)],
        tol / scale,
    )
    return scale * value, scale * err


def _coeff_s3(xi: float, tol: float) -> tuple[float, float]:
    if xi <= 0:
        raise DomainError(f"coeff_S3 needs xi > 0, got {xi}")
    scale = 4.0 / xi
    value, err = nested_quadrature(
        lambda a1, a2: 1.0 / (a1 * a2 * (1.0 - a1 - a2)),
        [(1.0 / T2_DEN, 1.0 / 3.0), (lambda a1: a1, lambda a1: (1.0 - a1) / 2.0)],
        tol / scale,
    )
    return scale * value, scale * err


def coeff_S(xi: float, tol: float = 1e-9) -> float:
    """(4/xi)(log(10.92 xi - 1) + int_3^{10.92 xi - 1} dt1/t1
    int_2^{t1-1} log(t2-1)/t2 dt2), the lower-bound coefficient."""
    _check_tol(tol)
    return _coeff_s(xi, tol)[0]


def coeff_S1(xi: float, tol: float = 1e-9) -> float:
    """Half-weighted S1 coefficient (factor 2 of the final display included):

    2 ( int_{xi-3/10.92}^{1/3.29} da/(a(xi-a))
      + int_{1/10.92}^{xi-3/10.92} (1 + int_2^{10.92(xi-a)-1}
          log(b-1)/b db) da/(a(xi-a)) ).
    """
    _check_tol(tol)
    return _coeff_s1(xi, tol)[0]


def coeff_S2(xi: float, tol: float = 1e-9) -> float:
    """Half-weighted S2 coefficient: (2/xi) int_{1/10.92}^{1/3.29} da1/a1
    int_{1/3.29}^{(1-a1)/2} da2/(a2(1-a1-a2))."""
    _check_tol(tol)
    return _coeff_s2(xi, tol)[0]


def coeff_S3(xi: float, tol: float = 1e-9) -> float:
    """S3 coefficient: (4/xi) int_{1/3.29}^{1/3} da1/a1
    int_{a1}^{(1-a1)/2} da2/(a2(1-a1-a2))."""
    _check_tol(tol)
    return _coeff_s3(xi, tol)[0]


def chen_bracket(xi: float, tol: float = 1e-9) -> BracketBreakdown:
    """Assemble the positivity bracket at level xi.

    total = coeff_S - coeff_S1 - coeff_S2 - coeff_S3 with each component
    integrated to tol/4, so quad_error (the sum of component error
    bounds) is at most tol. The admissible xi window is the intersection
    of the component domains, roughly [0.4579, 0.5495].
    """
    _check_tol(tol)
    part = tol / 4.0
    term_s, err_s = _coeff_s(xi, part)
    term_s1, err_s1 = _coeff_s1(xi, part)
    term_s2, err_s2 = _coeff_s2(xi, part)
    term_s3, err_s3 = _coeff_s3(xi, part)
    return BracketBreakdown(
        xi=xi,
        term_S=term_s,
        term_S1=term_s1,
        term_S2=term_s2,
        term_S3=term_s3,
        total=term_s - term_s1 - term_s2 - term_s3,
        quad_error=err_s + err_s1 + err_s2 + err_s3,
    )


def _check_tol(tol: float) -> None:
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
