"""Piatetski-Shapiro membership, prime sieving, and counting diagnostics.

Membership of m in the sequence floor(k^{1/gamma}) reduces to floor/ceil
decisions on real powers. Those decisions are never trusted to one
floating evaluation: each power is either resolved exactly through
integer nth roots (small rational exponents) or bracketed by two
MPFR evaluations with directed rounding, escalating the working
precision until floor and ceil are unambiguous. A wrong floor corrupts
every downstream count, so undecidable cases raise rather than guess.

The counting operations (pi_gamma, bv_discrepancy, chen_counts,
exp_sum_progression, count_near_diagonal) are desk-scale diagnostics:
they produce exact counts for concrete x, not asymptotic statements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, NamedTuple

import gmpy2
import numpy as np

from .arith import SpfTable, base_primes
from .errors import CostError, DomainError, PrecisionExhaustionError
from .exponent_pairs import ExponentPair

# Exponents of the two Chen thresholds z1 = x^{1/10.92}, z2 = x^{1/3.29},
# kept as exact rationals so threshold floors can be certified.
T1_EXPONENT = Fraction(25, 273)
T2_EXPONENT = Fraction(100, 329)

# m**(num/den) goes through exact integer nth roots whenever m**num fits
# in this many bits; beyond that the directed-rounding path takes over.
_EXACT_BITS_CAP = 1 << 15


@dataclass(frozen=True)
class PSContext:
    """gamma plus the precision-escalation policy for floor decisions."""

    gamma: float | Fraction
    base_precision: int = 96
    max_precision: int = 4096
    escalation_factor: int = 4

    def __post_init__(self):
        g = Fraction(self.gamma)
        if not Fraction(1, 2) < g < 1:
            raise DomainError(f"gamma must lie in (1/2, 1), got {self.gamma}")
        if self.base_precision < 64:
            raise DomainError(f"base_precision must be >= 64, got {self.base_precision}")
        if self.max_precision < self.base_precision:
            raise DomainError("max_precision must be >= base_precision")
        if self.escalation_factor < 2:
            raise DomainError("escalation_factor must be >= 2")

    @property
    def gamma_fraction(self) -> Fraction:
        return Fraction(self.gamma)


def _floor_ceil_pow(m: int, num: int, den: int, ctx: PSContext | None) -> tuple[int, int]:
    """Certified (floor, ceil) of m**(num/den) for m >= 0, num, den >= 1.

    Exact path: floor(m**(num/den)) = floor((m**num)**(1/den)), an integer
    nth root, whenever m**num is small enough to materialize. Otherwise
    two directed-rounding MPFR evaluations bracket the power; agreement of
    the bracketed floors (and ceils) certifies the result, and the
    precision escalates per ctx until it does.
    """
    if m <= 1:
        return m, m
    if m.bit_length() * num <= _EXACT_BITS_CAP:
        root, exact = gmpy2.iroot(gmpy2.mpz(m) ** num, den)
        r = int(root)
        return (r, r) if exact else (r, r + 1)
    if ctx is None:
        raise DomainError(
            f"power {m}**({num}/{den}) too large for the exact path and no "
            "precision policy supplied"
        )
    bits = ctx.base_precision
    while True:
        with gmpy2.context(precision=bits, round=gmpy2.RoundDown):
            v = gmpy2.mpfr(m) ** (gmpy2.mpfr(num) / gmpy2.mpfr(den))
            f_lo = int(gmpy2.floor(v))
            c_lo = int(gmpy2.ceil(v))
        with gmpy2.context(precision=bits, round=gmpy2.RoundUp):
            v = gmpy2.mpfr(m) ** (gmpy2.mpfr(num) / gmpy2.mpfr(den))
            f_hi = int(gmpy2.floor(v))
            c_hi = int(gmpy2.ceil(v))
        if f_lo == f_hi and c_lo == c_hi:
            return f_lo, c_lo
        if bits >= ctx.max_precision:
            raise PrecisionExhaustionError(
                f"floor({m}**({num}/{den})) still ambiguous at "
                f"{ctx.max_precision} bits"
            )
        bits = min(bits * ctx.escalation_factor, ctx.max_precision)


def _bulk_floors(ks: range, num: int, den: int, ctx: PSContext) -> list[int]:
    """floor(k**(num/den)) for every k in ks, certified.

    One RoundDown evaluation per k gives a lower bound v <= k**(num/den)
    with true - v < 2^(exp(v) + 8 - bits) (exponent ulp amplified by
    log k <= 44 plus one pow rounding). When the gap to the next integer
    exceeds that margin the floor is settled by v alone; the rare
    stragglers fall back to the two-sided path.
    """
    bits = ctx.base_precision
    if (ks.stop - 1).bit_length() * num <= _EXACT_BITS_CAP:
        return [_floor_ceil_pow(k, num, den, None)[0] for k in ks]
    floors: list[int | None] = []
    with gmpy2.context(precision=bits, round=gmpy2.RoundDown):
        e_dn = gmpy2.mpfr(num) / gmpy2.mpfr(den)
        for k in ks:
            v = gmpy2.mpfr(k) ** e_dn
            f = gmpy2.floor(v)
            margin = gmpy2.exp2(gmpy2.get_exp(v) + 8 - bits)
            # (f + 1) - v rounds down, underestimating the gap: safe side.
            if (f + 1) - v < margin:
                floors.append(None)
            else:
                floors.append(int(f))
    return [
        _floor_ceil_pow(ks[i], num, den, ctx)[0] if f is None else f
        for i, f in enumerate(floors)
    ]


@lru_cache(maxsize=1 << 16)
def _ceil_gamma_pow(m: int, ctx: PSContext) -> int:
    g = ctx.gamma_fraction
    return _floor_ceil_pow(m, g.numerator, g.denominator, ctx)[1]


def is_ps(m: int, ctx: PSContext) -> bool:
    """True iff m = floor(k^{1/gamma}) for some integer k.

    Equivalent to the interval [m^gamma, (m+1)^gamma) containing an
    integer, i.e. ceil((m+1)^gamma) - ceil(m^gamma) = 1.
    """
    if m < 1:
        raise DomainError(f"is_ps needs m >= 1, got {m}")
    return _ceil_gamma_pow(m + 1, ctx) - _ceil_gamma_pow(m, ctx) == 1


def enumerate_ps(x: int, ctx: PSContext, *, chunk: int = 4096) -> Iterator[int]:
    """Ascending stream of the PS numbers floor(k^{1/gamma}) <= x.

    Consecutive k can repeat a value while k^{1/gamma} - (k-1)^{1/gamma}
    stays below 1; repeats are emitted once.
    """
    if x < 1:
        raise DomainError(f"enumerate_ps needs x >= 1, got {x}")
    g = ctx.gamma_fraction
    last = None
    k = 1
    while True:
        ks = range(k, k + chunk)
        for m in _bulk_floors(ks, g.denominator, g.numerator, ctx):
            if m > x:
                return
            if m != last:
                last = m
                yield m
        k += chunk


class PrimeTable:
    """Primality bitset over the odd integers of a segment [lo, hi]."""

    def __init__(self, lo: int, hi: int, odd_bits: np.ndarray):
        self.lo = lo
        self.hi = hi
        self._first = lo if lo % 2 else lo + 1
        self._bits = odd_bits

    def is_prime(self, n: int) -> bool:
        if not self.lo <= n <= self.hi:
            raise DomainError(f"{n} outside sieved range [{self.lo}, {self.hi}]")
        if n == 2:
            return True
        if n % 2 == 0 or n < 2:
            return False
        return bool(self._bits[(n - self._first) // 2])

    def contains(self, ns: np.ndarray) -> np.ndarray:
        """Vectorized is_prime over an int array within [lo, hi]."""
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size and (ns.min() < self.lo or ns.max() > self.hi):
            raise DomainError("array reaches outside the sieved range")
        if self._bits.size == 0:  # degenerate all-even segment like [2, 2]
            return ns == 2
        odd = ns % 2 == 1
        idx = np.where(odd, (ns - self._first) // 2, 0)
        out = np.where(odd, self._bits[idx], ns == 2)
        return out & (ns >= 2)

    def count(self) -> int:
        two = 1 if self.lo <= 2 <= self.hi else 0
        return int(self._bits.sum()) + two

    def primes(self) -> np.ndarray:
        odds = np.flatnonzero(self._bits).astype(np.int64) * 2 + self._first
        if self.lo <= 2 <= self.hi:
            return np.concatenate(([2], odds))
        return odds


def sieve_primes(lo: int, hi: int) -> PrimeTable:
    """Segmented Eratosthenes over [lo, hi] (odd bitset; 2 special-cased)."""
    if not 2 <= lo <= hi:
        raise DomainError(f"need 2 <= lo <= hi, got [{lo}, {hi}]")
    if hi >= 1 << 63:
        raise DomainError("segment end must stay below 2^63")
    first = lo if lo % 2 else lo + 1
    n_odds = (hi - first) // 2 + 1 if first <= hi else 0
    bits = np.ones(n_odds, dtype=bool)
    for p in base_primes(math.isqrt(hi))[1:]:  # odd base primes only
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start <= hi:
            bits[(start - first) // 2 :: p] = False
    return PrimeTable(lo, hi, bits)


def pi_gamma(x: int, ctx: PSContext) -> tuple[int, float]:
    """(#PS primes <= x, the reference size x^gamma / log x)."""
    if x < 3:
        raise DomainError(f"pi_gamma needs x >= 3, got {x}")
    table = sieve_primes(2, x)
    ps = np.fromiter(enumerate_ps(x, ctx), dtype=np.int64)
    ps = ps[ps >= 2]
    count = int(table.contains(ps).sum())
    g = float(Fraction(ctx.gamma))
    return count, x**g / math.log(x)


class DiscrepancyRow(NamedTuple):
    d: int
    count: int
    expected: float
    abs_dev: float


@dataclass(frozen=True)
class DiscrepancyReport:
    x: int
    gamma: float | Fraction
    D: int
    l: int
    A: float
    rows: tuple[DiscrepancyRow, ...]
    total_abs_dev: float
    normalized: float


def _phi_small(d: int) -> int:
    result = d
    p = 2
    while p * p <= d:
        if d % p == 0:
            result -= result // p
            while d % p == 0:
                d //= p
        p += 1
    if d > 1:
        result -= result // d
    return result


def bv_discrepancy(
    x: int,
    gamma: float | Fraction,
    D: int,
    l: int,
    A: float = 1.0,
    *,
    ctx: PSContext | None = None,
) -> DiscrepancyReport:
    """Distribution of PS primes <= x across progressions mod d <= D.

    For each d <= D coprime to l the row holds the exact count of PS
    primes p = l (mod d), the uniform reference (total PS primes)/phi(d),
    and their absolute deviation. normalized = total_abs_dev log^A x /
    x^gamma rescales the total to the shape of the averaged bound; it is
    reported as a diagnostic, never asserted against.
    """
    if l == 0:
        raise DomainError("the residue l must be nonzero")
    if D < 1 or x < 100:
        raise DomainError(f"need D >= 1 and x >= 100, got D={D}, x={x}")
    ctx = _resolve_ctx(gamma, ctx)
    table = sieve_primes(2, x)
    ps = np.fromiter(enumerate_ps(x, ctx), dtype=np.int64)
    ps = ps[ps >= 2]
    ps_primes = ps[table.contains(ps)]
    total = len(ps_primes)
    rows = []
    for d in range(1, D + 1):
        if math.gcd(d, l) != 1:
            continue
        count = int((ps_primes % d == l % d).sum())
        expected = total / _phi_small(d)
        rows.append(DiscrepancyRow(d, count, expected, abs(count - expected)))
    total_abs_dev = float(sum(r.abs_dev for r in rows))
    g = float(Fraction(ctx.gamma))
    normalized = total_abs_dev * math.log(x) ** A / x**g
    return DiscrepancyReport(
        x, ctx.gamma, D, l, A, tuple(rows), total_abs_dev, normalized
    )


def _resolve_ctx(gamma: float | Fraction, ctx: PSContext | None) -> PSContext:
    if ctx is None:
        return PSContext(gamma)
    if Fraction(ctx.gamma) != Fraction(gamma):
        return replace(ctx, gamma=gamma)
    return ctx


@dataclass(frozen=True)
class ChenCounts:
    """Chen-weight tallies over A = {a <= x : a = p + 2, a PS}."""

    x: int
    gamma: float | Fraction
    S: int
    S1: int
    S2: int
    S3: int

    @property
    def weighted(self) -> float:
        return self.S - self.S1 / 2 - self.S2 / 2 - self.S3


def _chen_weights(
    fs: list[tuple[int, int]], z1: int, z2: int
) -> tuple[int, int, int]:
    """(rho1, rho2, rho3) from a sorted factorization of a."""
    rho1 = sum(1 for p, _ in fs if z1 <= p < z2)
    squarefree_triple = len(fs) == 3 and all(e == 1 for _, e in fs)
    rho2 = int(squarefree_triple and fs[0][0] < z2 <= fs[1][0])
    rho3 = int(squarefree_triple and fs[0][0] >= z2)
    return rho1, rho2, rho3


def chen_thresholds(
    x: int,
    t1_exp: Fraction = T1_EXPONENT,
    t2_exp: Fraction = T2_EXPONENT,
    *,
    ctx: PSContext | None = None,
) -> tuple[int, int]:
    """Certified (z1, z2) = (ceil(x^t1_exp), ceil(x^t2_exp)).

    An integer p satisfies p >= x^e iff p >= ceil(x^e), so every
    threshold comparison downstream is exact.
    """
    if x < 1:
        raise DomainError(f"need x >= 1, got {x}")
    z1 = _floor_ceil_pow(x, t1_exp.numerator, t1_exp.denominator, ctx)[1]
    z2 = _floor_ceil_pow(x, t2_exp.numerator, t2_exp.denominator, ctx)[1]
    return z1, z2


def chen_counts(
    x: int,
    gamma: float | Fraction,
    t1_exp: Fraction = T1_EXPONENT,
    t2_exp: Fraction = T2_EXPONENT,
    *,
    ctx: PSContext | None = None,
    table: SpfTable | None = None,
) -> ChenCounts:
    """Exact (S, S1, S2, S3) at scale x.

    S counts odd PS numbers a = p + 2 <= x (p prime) with no prime factor
    below z1 = x^{t1_exp}; S1 sums rho1(a) = #{p | a : z1 <= p < z2} over
    the same set; S2 and S3 count the a = q1 q2 q3 patterns with
    q1 < z2 <= q2 < q3 resp. z2 <= q1 < q2 < q3. Thresholds are certified
    ceilings, so p >= x^e is evaluated exactly as p >= ceil(x^e).
    """
    if x < 10**3:
        raise DomainError(f"chen_counts needs x >= 10^3, got {x}")
    ctx = _resolve_ctx(gamma, ctx)
    if table is None:
        table = SpfTable(x)
    elif table.limit < x:
        raise DomainError(f"SpfTable limit {table.limit} below x={x}")
    z1, z2 = chen_thresholds(x, t1_exp, t2_exp, ctx=ctx)
    primes = sieve_primes(2, x)
    ps_values = np.fromiter(enumerate_ps(x, ctx), dtype=np.int64)
    candidates = ps_values[(ps_values % 2 == 1) & (ps_values >= 5)]
    prime_shift = primes.contains(candidates - 2)
    s = s1 = s2 = s3 = 0
    for a in candidates[prime_shift]:
        fs = table.factor(int(a))
        if fs[0][0] < z1:
            continue
        rho1, rho2, rho3 = _chen_weights(fs, z1, z2)
        s += 1
        s1 += rho1
        s2 += rho2
        s3 += rho3
    return ChenCounts(x, ctx.gamma, s, s1, s2, s3)


def verify_weight_inequality(
    x: int, *, table: SpfTable | None = None
) -> tuple[bool, list[int]]:
    """Exhaustively check 1_{Omega<=2}(a) >= 1 - rho1/2 - rho2/2 - rho3.

    Runs over every odd squarefree a <= x with no prime factor below
    z1 = x^{1/10.92} (the population the weighted sieve acts on; gamma
    plays no role in the inequality itself). Returns (holds, violators).
    """
    if x < 10**3:
        raise DomainError(f"verify_weight_inequality needs x >= 10^3, got {x}")
    if table is None:
        table = SpfTable(x)
    elif table.limit < x:
        raise DomainError(f"SpfTable limit {table.limit} below x={x}")
    z1, z2 = chen_thresholds(x)
    witnesses = []
    for a in range(1, x + 1, 2):
        fs = table.factor(a)
        if any(e > 1 for _, e in fs):
            continue
        if fs and fs[0][0] < z1:
            continue
        rho1, rho2, rho3 = _chen_weights(fs, z1, z2)
        indicator = 1 if len(fs) <= 2 else 0
        # inequality scaled by 2 to stay in integers
        if 2 * indicator < 2 - rho1 - rho2 - 2 * rho3:
            witnesses.append(a)
    return not witnesses, witnesses


def exp_sum_progression(
    X: int,
    X1: int,
    d: int,
    l: int,
    h: int,
    gamma: float | Fraction,
    *,
    term_cap: int = 2_000_000,
) -> tuple[float, int]:
    """|sum e(h m^gamma)| over X < m <= X1, m = l (mod d), by summation.

    Returns (magnitude, number of terms). The trivial bound
    magnitude <= n_terms is asserted (with one ulp-class unit of slack).
    """
    if not 1 <= d <= X < X1 <= 2 * X:
        raise DomainError(f"need 1 <= d <= X < X1 <= 2X, got d={d}, X={X}, X1={X1}")
    if h == 0:
        raise DomainError("h must be nonzero")
    m0 = X + 1 + (l - (X + 1)) % d
    ms = np.arange(m0, X1 + 1, d, dtype=np.int64)
    if len(ms) > term_cap:
        raise CostError(f"{len(ms)} terms exceed term_cap={term_cap}")
    if len(ms) == 0:
        return 0.0, 0
    g = float(Fraction(gamma))
    phases = 2.0 * np.pi * h * np.power(ms.astype(np.float64), g)
    magnitude = float(abs(np.exp(1j * phases).sum()))
    assert magnitude <= len(ms) + 1
    return magnitude, len(ms)


def lemma_bound(
    X: int, d: int, h: int, gamma: float | Fraction, pair: ExponentPair
) -> float:
    """min(X/d, X^{1-gamma}/(d|h|) + d^{kappa-ell} |h|^kappa X^{kappa gamma - kappa + ell})."""
    if X < 1 or d < 1:
        raise DomainError(f"need X >= 1 and d >= 1, got X={X}, d={d}")
    if h == 0:
        raise DomainError("h must be nonzero")
    g = float(Fraction(gamma))
    kappa, ell = float(pair.kappa), float(pair.ell)
    second = X ** (1.0 - g) / (d * abs(h)) + d ** (kappa - ell) * abs(h) ** kappa * X ** (
        kappa * g - kappa + ell
    )
    return min(X / d, second)


def count_near_diagonal(
    J: int, N: int, alpha: float, delta: float, *, pair_cap: int = 1 << 22
) -> int:
    """#{(h1,n1,h2,n2) : |h1 n1^alpha - h2 n2^alpha| <= delta}, exactly.

    Ranges are h in (J, 2J], n in (N, 2N]; quadruples are ordered, so the
    diagonal contributes J*N and the count is at least that. Values
    h n^alpha are sorted once and each pair's neighborhood is located by
    bisection, O(JN log JN) instead of the (JN)^2 double loop.

    The bisection predicate is the same float subtraction the double loop
    evaluates, |fl(v_i - v_j)| <= delta, not a comparison against
    precomputed v_i +- delta (whose addition rounds differently within an
    ulp of the boundary), so the count matches brute force bit for bit.
    """
    if J < 1 or N < 1:
        raise DomainError(f"need J, N >= 1, got J={J}, N={N}")
    if not 0.5 < alpha < 1:
        raise DomainError(f"alpha must lie in (1/2, 1), got {alpha}")
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    if J * N > pair_cap:
        raise CostError(f"J*N = {J * N} exceeds pair_cap={pair_cap}")
    h = np.arange(J + 1, 2 * J + 1, dtype=np.float64)
    n = np.arange(N + 1, 2 * N + 1, dtype=np.float64)
    values = np.sort(np.outer(h, n**alpha).ravel())
    m = values.size

    def prefix_length(true_at) -> np.ndarray:
        # Per-element binary search for the boundary of a prefix-true
        # predicate along the sorted values; returns the count of True.
        lo = np.zeros(m, dtype=np.int64)
        hi = np.full(m, m, dtype=np.int64)
        while True:
            active = lo < hi
            if not active.any():
                return lo
            # active lanes have mid <= m-1; clamp the rest (masked out below)
            mid = np.minimum((lo + hi) // 2, m - 1)
            t = true_at(mid)
            lo = np.where(active & t, mid + 1, lo)
            hi = np.where(active & ~t, mid, hi)

    # fl(values[j] - v_i) is nondecreasing in j and fl(v_i - values[j]) is
    # nonincreasing, so both predicates below are prefix-true in j.
    upper = prefix_length(lambda mid: values[mid] - values <= delta)
    lower = prefix_length(lambda mid: values - values[mid] > delta)
    return int((upper - lower).sum())
