"""Distribution-level formulas and the admissible-level constraint solver.

The level xi is the largest exponent such that primes in the target sequence
are well distributed in arithmetic progressions to moduli up to x^xi. For a
chosen pair of exponent pairs (one driving the Type-I estimate, one the
Type-II estimate) every requirement on xi is affine, so the supremum is the
exact minimum of six rational bounds:

  psi_reduction            gamma > 1/2 + xi + eta
  typeII_cond1             gamma > k/(k-l+1) + xi + eta
  typeII_cond2             gamma > (k+2)/(k-l+3) + xi (k-l+1)/(k-l+3) + eta
  decomposition_b          b < 2/3
  decomposition_c          1 - c < c - b
  typeII_window_vs_typeI   1 - a < c/2

with a the Type-I reach, (b, c) the Type-II window, all affine in xi.
Everything is computed in Fraction; floats enter and leave at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainError
from .exponent_pairs import ExponentPair, eph_pair, iterate_a

_C_BIG = 2**38 + 17
_C_SMALL = 2**38 - 1

#: Left endpoint of the admissible gamma window for the closed-form level.
GAMMA0 = 1 - Fraction(18, _C_BIG)

CONSTRAINT_NAMES = (
    "psi_reduction",
    "typeII_cond1",
    "typeII_cond2",
    "typeII_window_vs_typeI",
    "decomposition_b",
    "decomposition_c",
)

A36 = iterate_a(36)
A3 = iterate_a(3)

PAIR_PRESETS = {
    "a36": A36,
    "a3": A3,
    "eph": eph_pair(0),
}


def theorem1_level(gamma, epsilon=0) -> float:
    """Closed-form level ((2^38+17) gamma - (2^38-1))/38 - epsilon.

    Valid for GAMMA0 <= gamma < 1. Computed in exact rational arithmetic as
    (18 - (2^38+17)(1-gamma))/38 - epsilon, which is the same quantity but
    survives float conversion of gamma near 1 without catastrophic
    cancellation in the big constants.
    """
    g = Fraction(gamma)
    eps = Fraction(epsilon)
    if eps < 0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon}")
    if not GAMMA0 <= g < 1:
        raise DomainError(
            f"gamma={gamma} outside [1 - 18/(2^38+17), 1) where the level is nonnegative"
        )
    return float((18 - _C_BIG * (1 - g)) / Fraction(38) - eps)


class LadderEntry(NamedTuple):
    label: str
    slope: Fraction
    intercept: Fraction
    gamma1_limit: Fraction


#: Historical ladder of levels xi(gamma) = slope*gamma - intercept, with the
#: gamma -> 1 limit of each closed form.
LEVEL_LADDER = (
    LadderEntry("1/6", Fraction(5, 4), Fraction(13, 12), Fraction(1, 6)),
    LadderEntry("1/4", Fraction(13, 4), Fraction(3), Fraction(1, 4)),
    LadderEntry("3/8", Fraction(129, 4), Fraction(255, 8), Fraction(3, 8)),
    LadderEntry("9/19", Fraction(_C_BIG, 38), Fraction(_C_SMALL, 38), Fraction(9, 19)),
    LadderEntry("1/2", Fraction(5, 2), Fraction(2), Fraction(1, 2)),
)


@dataclass
class LevelQuery:
    """Inputs to the level solver.

    gamma is the sequence exponent, eta a small separation parameter,
    epsilon the final slack subtracted from the supremum. The two exponent
    pairs drive the Type-I and Type-II sides independently.
    """

    gamma: Fraction
    eta: Fraction = Fraction(0)
    epsilon: Fraction = Fraction(0)
    pair_typeI: ExponentPair = field(default=A36)
    pair_typeII: ExponentPair = field(default=A3)

    def __post_init__(self):
        self.gamma = Fraction(self.gamma)
        self.eta = Fraction(self.eta)
        self.epsilon = Fraction(self.epsilon)
        if not Fraction(1, 2) < self.gamma < 1:
            raise DomainError(f"gamma must be in (1/2, 1), got {self.gamma}")
        if self.eta < 0 or self.epsilon < 0:
            raise DomainError("eta and epsilon must be >= 0")
        if self.gamma + self.eta >= 1:
            raise DomainError("need gamma + eta < 1")
        if self.epsilon >= Fraction(1, 10):
            raise DomainError("epsilon must be < 1/10")

    # Derived quantities of the range decomposition, all exact in xi.

    def window_low(self, xi) -> Fraction:
        k, l = self.pair_typeII.kappa, self.pair_typeII.ell
        return ((k + 2) * (1 - self.gamma) + (k - l + 1) * Fraction(xi)) / (1 - l) + self.eta

    def decomp_a(self, xi) -> Fraction:
        k, l = self.pair_typeI.kappa, self.pair_typeI.ell
        return (self.gamma - l) / (k - l + 1) - Fraction(xi) - self.eta

    def decomp_b(self, xi) -> Fraction:
        return self.window_low(xi)

    def decomp_c(self) -> Fraction:
        return self.gamma - self.eta


@dataclass
class LevelResult:
    xi: float
    binding_constraint: str
    feasible: bool


def typeII_feasible(q: LevelQuery, xi) -> tuple[bool, tuple[float, float]]:
    """Whether both Type-II conditions hold at xi, plus the modulus window.

    The window is returned as exponents (low, high); it is the valid range
    of M for which the bilinear estimate applies.
    """
    x = Fraction(xi)
    k, l = q.pair_typeII.kappa, q.pair_typeII.ell
    cond1 = q.gamma > k / (k - l + 1) + x + q.eta
    cond2 = q.gamma > (k + 2) / (k - l + 3) + (k - l + 1) / (k - l + 3) * x + q.eta
    window = (float(q.window_low(x)), float(q.gamma - q.eta))
    return cond1 and cond2, window


def typeI_max_exponent(q: LevelQuery, xi) -> float:
    """Largest exponent a such that the Type-I estimate covers M <= X^a."""
    return float(q.decomp_a(xi))


def decomposition_ok(a, b, c) -> bool:
    """The three strict inequalities of the range decomposition.

    Intended for 0 < a < 1 and 0 < b < c < 1; the conjunction itself is
    evaluated as given so that infeasible probe points simply return False.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    return b < Fraction(2, 3) and 1 - c < c - b and 1 - a < c / 2


def constraints_at(q: LevelQuery, xi) -> dict[str, bool]:
    """Truth value of each named constraint at the given xi."""
    x = Fraction(xi)
    k, l = q.pair_typeII.kappa, q.pair_typeII.ell
    cond1 = q.gamma > k / (k - l + 1) + x + q.eta
    cond2 = q.gamma > (k + 2) / (k - l + 3) + (k - l + 1) / (k - l + 3) * x + q.eta
    a = q.decomp_a(x)
    b = q.decomp_b(x)
    c = q.decomp_c()
    return {
        "psi_reduction": q.gamma > Fraction(1, 2) + x + q.eta,
        "typeII_cond1": cond1,
        "typeII_cond2": cond2,
        "typeII_window_vs_typeI": 1 - a < c / 2,
        "decomposition_b": b < Fraction(2, 3),
        "decomposition_c": 1 - c < c - b,
    }


def constraint_bounds(q: LevelQuery) -> dict[str, Fraction]:
    """Exact upper bound on xi imposed by each constraint (affine rearrangement)."""
    g, eta = q.gamma, q.eta
    k2, l2 = q.pair_typeII.kappa, q.pair_typeII.ell
    k1, l1 = q.pair_typeI.kappa, q.pair_typeI.ell
    r = k2 - l2 + 1

    def window_bound(top: Fraction) -> Fraction:
        # window_low(xi) < top  <=>  xi < ((top - eta)(1-l) - (k+2)(1-g)) / (k-l+1)
        return ((top - eta) * (1 - l2) - (k2 + 2) * (1 - g)) / r

    return {
        "psi_reduction": g - Fraction(1, 2) - eta,
        "typeII_cond1": g - k2 / r - eta,
        "typeII_cond2": (g - (k2 + 2) / (k2 - l2 + 3) - eta) * (k2 - l2 + 3) / r,
        "typeII_window_vs_typeI": (g - l1) / (k1 - l1 + 1) - eta - 1 + (g - eta) / 2,
        "decomposition_b": window_bound(Fraction(2, 3)),
        "decomposition_c": window_bound(2 * (g - eta) - 1),
    }


def solve_level(q: LevelQuery) -> LevelResult:
    """Supremum of admissible xi minus epsilon, with the binding constraint.

    All six constraint bounds are affine in xi, so the supremum is their
    exact rational minimum. Infeasible (nonpositive) levels return xi = 0
    with feasible = False; the binding constraint still names the bound
    that pinned the supremum.
    """
    bounds = constraint_bounds(q)
    binding = min(CONSTRAINT_NAMES, key=lambda name: bounds[name])
    sup = bounds[binding]
    # The cap xi <= (1 - eta)/2 never binds: the psi_reduction bound is
    # strictly smaller whenever gamma < 1.
    assert sup <= (1 - q.eta) / 2
    xi = sup - q.epsilon
    if xi > 0:
        return LevelResult(xi=float(xi), binding_constraint=binding, feasible=True)
    return LevelResult(xi=0.0, binding_constraint=binding, feasible=False)


def subproduct_window_check(gamma, xi, eta=0) -> bool:
    """Exponent chain placing the subproduct window below the admissible level.

    Verifies (61(1-gamma) + 5 xi)/4 <= 45/76, that 45/76 sits strictly below
    the gamma window left endpoint (with eta separation on both sides), and
    that gamma itself is inside the window. Out-of-window gamma returns
    False rather than raising.
    """
    g, x, e = Fraction(gamma), Fraction(xi), Fraction(eta)
    if e < 0:
        raise DomainError(f"eta must be >= 0, got {eta}")
    bound = Fraction(45, 76)
    return (
        (61 * (1 - g) + 5 * x) / 4 <= bound
        and bound + e < GAMMA0 - e
        and GAMMA0 <= g
    )
