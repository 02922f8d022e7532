"""Exponent pairs in exact rational arithmetic.

A pair (kappa, ell) bounds exponential sums over a family of smooth phases;
only the A-process and the trivial baseline (1/2, 1/2) are needed here.
Iterating A from the baseline gives A^n(1/2, 1/2) with the closed form
kappa_n = 1/(2^(n+2) - 2), ell_n = 1 - (n+1)/(2^(n+2) - 2), so denominators
grow like 2^n and everything must stay in Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ExponentPair:
    """One exponent pair; components are exact rationals."""

    kappa: Fraction
    ell: Fraction

    def __post_init__(self):
        object.__setattr__(self, "kappa", Fraction(self.kappa))
        object.__setattr__(self, "ell", Fraction(self.ell))
        if not (0 <= self.kappa <= _HALF <= self.ell <= 1):
            raise DomainError(
                f"exponent pair out of range: kappa={self.kappa}, ell={self.ell}"
            )
        if self.kappa > self.ell:
            raise DomainError(f"need kappa <= ell, got {self.kappa} > {self.ell}")

    def as_floats(self) -> tuple[float, float]:
        return float(self.kappa), float(self.ell)

    def __str__(self) -> str:
        return f"({self.kappa}, {self.ell})"


BASELINE = ExponentPair(_HALF, _HALF)


def a_process(pair: ExponentPair) -> ExponentPair:
    """One A-process step: (k, l) -> (k/(2k+2), (k+l+1)/(2k+2))."""
    k, l = pair.kappa, pair.ell
    d = 2 * k + 2
    return ExponentPair(k / d, (k + l + 1) / d)


def iterate_a(n: int) -> ExponentPair:
    """A^n applied to the baseline (1/2, 1/2); n = 0 returns the baseline."""
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    pair = BASELINE
    for _ in range(n):
        pair = a_process(pair)
    return pair


def eph_pair(epsilon: Fraction | float = 0) -> ExponentPair:
    """The conjectural pair (eps, 1/2 + eps); epsilon = 0 gives (0, 1/2)."""
    eps = Fraction(epsilon)
    if not 0 <= eps < Fraction(1, 4):
        raise DomainError(f"epsilon must be in [0, 1/4), got {epsilon}")
    return ExponentPair(eps, _HALF + eps)
