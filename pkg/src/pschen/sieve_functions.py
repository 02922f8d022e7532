"""Linear-sieve functions F(s), f(s) and the V(z) coefficient scaffold.

The upper and lower sieve functions solve the differential-difference
system (sF(s))' = f(s-1), (sf(s))' = F(s-1) with F(s) = 2 e^{C0}/s on
(0,3] and f(s) = 0 on (0,2]. The explicit integral branches below extend
them to F on (3,5] and f on (2,6]; past those points no closed formula is
implemented, so evaluation is refused rather than extrapolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import twin_singular_series
from .errors import DomainError
from .quadrature import adaptive_quad, nested_quadrature

# Euler's constant, 30 significant digits.
C0 = 0.577215664901532860606512090082
TWO_E_C0 = 2.0 * math.exp(C0)


@dataclass(frozen=True)
class SieveFnValue:
    """One evaluation of F or f: value, branch taken, quadrature error bound."""

    s: float
    kind: str
    value: float
    branch: str
    quad_error: float


def big_f(s: float, tol: float = 1e-10) -> SieveFnValue:
    """Upper sieve function F(s) on (0, 5].

    F(s) = 2e^{C0}/s on (0,3] (exact), and
    F(s) = (2e^{C0}/s)(1 + int_2^{s-1} log(t-1)/t dt) on (3,5].
    """
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if not 0 < s <= 5:
        raise DomainError(f"F(s) is implemented only for 0 < s <= 5, got s={s}")
    if s <= 3:
        return SieveFnValue(s, "F", TWO_E_C0 / s, "F_le3", 0.0)
    scale = TWO_E_C0 / s
    inner, err = adaptive_quad(
        lambda t: math.log(t - 1.0) / t, 2.0, s - 1.0, tol * 0.5 / scale
    )
    return SieveFnValue(s, "F", scale * (1.0 + inner), "F_3to5", scale * err)


def small_f(s: float, tol: float = 1e-10) -> SieveFnValue:
    """Lower sieve function f(s) on (0, 6].

    f(s) = 0 on (0,2], f(s) = 2e^{C0} log(s-1)/s on (2,4], and on (4,6]
    f(s) = (2e^{C0}/s)(log(s-1)
           + int_3^{s-1} dt1/t1 int_2^{t1-1} log(t2-1)/t2 dt2).
    """
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if not 0 < s <= 6:
        raise DomainError(f"f(s) is implemented only for 0 < s <= 6, got s={s}")
    if s <= 2:
        return SieveFnValue(s, "f", 0.0, "f_2to4", 0.0)
    if s <= 4:
        return SieveFnValue(s, "f", TWO_E_C0 * math.log(s - 1.0) / s, "f_2to4", 0.0)
    scale = TWO_E_C0 / s
    inner, err = nested_quadrature(
        lambda t1, t2: math.log(t2 - 1.0) / (t1 * t2),
        [(3.0, s - 1.0), (2.0, lambda t1: t1 - 1.0)],
        tol * 0.5 / scale,
    )
    value = scale * (math.log(s - 1.0) + inner)
    return SieveFnValue(s, "f", value, "f_4to6", scale * err)


def ddeq_residual(
    s: float, h: float = 1e-3, tol: float = 1e-10
) -> tuple[float | None, float]:
    """Central-difference residuals of the defining system at s.

    rF = |((s+h)F(s+h) - (s-h)F(s-h))/(2h) - f(s-1)| checks (sF)' = f(s-1)
    and needs 2+h < s < 5-h; rf likewise checks (sf)' = F(s-1) and needs
    2+h < s < 6-h. rF is None on [5-h, 6-h) where F(s+h) is out of range.
    Residuals are bounded by C h^2 + 4 tol/h (discretization plus
    quadrature noise amplified by the difference quotient).
    """
    if not 1e-6 <= h <= 1e-2:
        raise DomainError(f"step h must lie in [1e-6, 1e-2], got {h}")
    if not 2 + h < s < 6 - h:
        raise DomainError(f"s={s} outside (2+h, 6-h) for h={h}")

    def sF(t: float) -> float:
        return t * big_f(t, tol).value

    def sf(t: float) -> float:
        return t * small_f(t, tol).value

    r_big = None
    if s < 5 - h:
        deriv = (sF(s + h) - sF(s - h)) / (2.0 * h)
        r_big = abs(deriv - small_f(s - 1.0, tol).value)
    deriv = (sf(s + h) - sf(s - h)) / (2.0 * h)
    r_small = abs(deriv - big_f(s - 1.0, tol).value)
    return r_big, r_small


@lru_cache(maxsize=8)
def _default_singular_series(prime_bound: int) -> float:
    return twin_singular_series(prime_bound).value


def v_coefficient(
    omega_kind: str,
    z_exponent: float,
    log_x: float,
    singular_series: float | None = None,
) -> float:
    """Main term of V(z) = C(omega) e^{-C0}/log z at z = x^{z_exponent}.

    For the twin-type density omega(d) = d/phi(d) on odd squarefree d the
    sieve constant is C(omega) = 2*S with S the twin singular series, so
    the main term is 2 S e^{-C0}/(z_exponent * log_x). The correction
    factor 1 + O(1/log z) is not modeled. singular_series overrides the
    default S (the Euler product over p <= 10^6).
    """
    if omega_kind != "chen_twin":
        raise DomainError(f"unsupported omega_kind {omega_kind!r}")
    if not z_exponent * log_x > 1:
        raise DomainError(
            f"need z_exponent*log_x > 1 (log z > 1), got {z_exponent * log_x}"
        )
    if singular_series is None:
        singular_series = _default_singular_series(10**6)
    return 2.0 * singular_series * math.exp(-C0) / (z_exponent * log_x)
