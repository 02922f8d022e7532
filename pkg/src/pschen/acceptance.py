"""Executable acceptance criteria.

Each criterion is a self-contained check returning (passed, detail); the
registry drives both the ``verify-all`` CLI subcommand and the acceptance
test suite. Reference constants live at module level so a negative-control
test can patch one and watch the matching criterion fail by name.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import gmpy2
import numpy as np

from .arith import heath_brown_max_residual, twin_singular_series
from .chen_bracket import chen_bracket
from .exponent_pairs import ExponentPair, a_process, eph_pair, iterate_a
from .levels import GAMMA0, LEVEL_LADDER, LevelQuery, solve_level, theorem1_level
from .ps_empirical import (
    PSContext,
    bv_discrepancy,
    chen_counts,
    count_near_diagonal,
    enumerate_ps,
    is_ps,
    sieve_primes,
    verify_weight_inequality,
)
from .sieve_functions import big_f, ddeq_residual, small_f

# Reference values the criteria compare against. Patching any of these to a
# wrong value must flip exactly the criteria that consume it (negative
# control for the harness itself).
PRIME_COUNT_1E6 = 78498
TWIN_CONSTANT_REF = 0.6601618
BRACKET_THRESHOLD = 0.000109508
XI_REFERENCE = 0.47284
LADDER_LIMITS = (
    Fraction(1, 6),
    Fraction(1, 4),
    Fraction(3, 8),
    Fraction(9, 19),
    Fraction(1, 2),
)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    runtime: float


@dataclass(frozen=True)
class Criterion:
    name: str
    quick: bool
    budget: float | None  # seconds; None = no stated runtime bound
    fn: Callable[[], tuple[bool, str]]


def _exponent_pairs() -> tuple[bool, str]:
    ok3 = iterate_a(3) == ExponentPair(Fraction(1, 30), Fraction(13, 15))
    d36 = 2**38 - 2
    ok36 = iterate_a(36) == ExponentPair(Fraction(1, d36), 1 - Fraction(37, d36))
    closed = True
    pair = ExponentPair(Fraction(1, 2), Fraction(1, 2))
    for n in range(41):
        d = 2 ** (n + 2) - 2
        want = ExponentPair(Fraction(1, d), 1 - Fraction(n + 1, d))
        closed = closed and iterate_a(n) == want == pair
        pair = a_process(pair)
    passed = ok3 and ok36 and closed
    return passed, (
        f"A^3 {'ok' if ok3 else 'MISMATCH'}; A^36 {'ok' if ok36 else 'MISMATCH'}; "
        f"closed form & chained A-process agree for n<=40: {closed}"
    )


def _level_solver() -> tuple[bool, str]:
    worst = Fraction(0)
    for i in range(1, 101):
        g = GAMMA0 + Fraction(i, 101) * (1 - GAMMA0)
        xi = solve_level(LevelQuery(gamma=g)).xi
        worst = max(worst, abs(Fraction(xi) - Fraction(theorem1_level(g))))
    ok_solver = worst <= Fraction(1, 10**10)
    eph = eph_pair(0)
    worst_eph = Fraction(0)
    for i in range(100):
        g = Fraction(900 + i, 1000)
        xi = solve_level(LevelQuery(gamma=g, pair_typeI=eph, pair_typeII=eph)).xi
        worst_eph = max(worst_eph, abs(Fraction(xi) - (Fraction(5, 2) * g - 2)))
    ok_eph = worst_eph <= Fraction(1, 10**12)
    ok_zero = abs(theorem1_level(GAMMA0)) <= 1e-12
    ok_ladder = all(
        e.slope - e.intercept == lim
        for e, lim in zip(LEVEL_LADDER, LADDER_LIMITS, strict=True)
    )
    passed = ok_solver and ok_eph and ok_zero and ok_ladder
    return passed, (
        f"solver vs closed form: worst |diff|={float(worst):.2e} over 100 gamma; "
        f"EPH vs 5g/2-2: worst {float(worst_eph):.2e}; level(gamma0)={theorem1_level(GAMMA0):.1e}; "
        f"ladder gamma->1 limits exact: {ok_ladder}"
    )


def _sieve_functions() -> tuple[bool, str]:
    tol = 1e-10
    jump3 = abs(big_f(3.0, tol).value - big_f(3.0 + 1e-12, tol).value)
    jump4 = abs(small_f(4.0, tol).value - small_f(4.0 + 1e-12, tol).value)
    f2 = small_f(2.0, tol).value
    h = 1e-3
    worst_rf_big = max(
        ddeq_residual(s, h=h)[0] for s in np.linspace(2.002, 4.998, 50)
    )
    worst_rf_small = max(
        ddeq_residual(s, h=h)[1] for s in np.linspace(2.002, 5.998, 50)
    )
    passed = (
        jump3 <= 2e-10
        and jump4 <= 2e-10
        and f2 == 0.0
        and worst_rf_big <= 1e-3
        and worst_rf_small <= 1e-3
    )
    return passed, (
        f"branch jumps: F@3 {jump3:.1e}, f@4 {jump4:.1e} (<=2e-10); f(2)={f2!r}; "
        f"max ddeq residuals on 50-pt grids: F {worst_rf_big:.1e}, f {worst_rf_small:.1e} (<=1e-3)"
    )


def _chen_bracket() -> tuple[bool, str]:
    br = chen_bracket(XI_REFERENCE, 1e-9)
    ok_total = br.total >= BRACKET_THRESHOLD - 1e-7
    gamma_star = 1 - Fraction("0.03208") / (2**38 + 17)
    xi_chain = theorem1_level(gamma_star)
    ok_chain = abs(xi_chain - XI_REFERENCE) <= 5e-6
    passed = ok_total and ok_chain
    return passed, (
        f"total={br.total:.9e} >= {BRACKET_THRESHOLD}-1e-7: {ok_total} "
        f"(quad_error={br.quad_error:.1e}); level at gamma*=1-0.03208/(2^38+17) "
        f"is {xi_chain:.6f} vs {XI_REFERENCE}: {ok_chain}"
    )


def _ps_oracle() -> tuple[bool, str]:
    x = 10**5
    sizes = []
    for gv in (0.9, 0.95, 0.99):
        ctx = PSContext(gv)
        forward = set(enumerate_ps(x, ctx))
        member = {m for m in range(1, x + 1) if is_ps(m, ctx)}
        if forward != member:
            diff = sorted(forward ^ member)[:5]
            return False, f"gamma={gv}: routes disagree, first diffs {diff}"
        sizes.append(len(forward))
    return True, (
        f"enumerate_ps == is_ps scan for m<=1e5 at gamma 0.9/0.95/0.99 "
        f"(sizes {sizes}); no precision exhaustion at default policy"
    )


def _prime_count() -> tuple[bool, str]:
    full = sieve_primes(2, 10**6)
    n = full.count()
    ok_count = n == PRIME_COUNT_1E6
    lo = sieve_primes(2, 5 * 10**5)
    hi = sieve_primes(5 * 10**5 + 1, 10**6)
    ok_part = np.array_equal(
        np.concatenate([lo.primes(), hi.primes()]), full.primes()
    )
    return ok_count and ok_part, (
        f"pi(10^6)={n} (expected {PRIME_COUNT_1E6}); "
        f"segment partition at 5*10^5 exact: {ok_part}"
    )


def _heath_brown() -> tuple[bool, str]:
    res, argn = heath_brown_max_residual(10**4)
    # 1e-9*max(1,log n) >= 1e-9, so bounding the max residual by 1e-9 is
    # (slightly) stronger than the stated per-n bound.
    passed = res <= 1e-9
    return passed, f"max residual {res:.3e} at n={argn} (<= 1e-9 for all n <= 10^4)"


def _weight_inequality() -> tuple[bool, str]:
    holds, witnesses = verify_weight_inequality(10**5)
    if holds:
        return True, "no witnesses among odd squarefree z1-rough a <= 10^5"
    return False, f"{len(witnesses)} witnesses; first {witnesses[:5]}"


def _chen_counts_oracle() -> tuple[bool, str]:
    x, gv = 10**6, 0.95
    ctx = PSContext(gv)
    got = chen_counts(x, gv, ctx=ctx)

    # Independent route: thresholds by direct integer root, membership by
    # per-element is_ps over a scan of all primes p <= x-2, factorization by
    # per-element trial division. No shared enumeration or factor tables.
    def int_ceil_pow(base: int, num: int, den: int) -> int:
        r, exact = gmpy2.iroot(gmpy2.mpz(base) ** num, den)
        return int(r) if exact else int(r) + 1

    z1 = int_ceil_pow(x, 25, 273)
    z2 = int_ceil_pow(x, 100, 329)
    s = s1 = s2 = s3 = 0
    for p in sieve_primes(2, x - 2).primes().tolist():
        a = p + 2
        if a % 2 == 0 or not is_ps(a, ctx):
            continue
        m, fs = a, []
        d = 3  # a is odd, so trial division starts at 3
        while d * d <= m:
            if m % d == 0:
                e = 0
                while m % d == 0:
                    m //= d
                    e += 1
                fs.append((d, e))
            d += 2
        if m > 1:
            fs.append((m, 1))
        if fs[0][0] < z1:
            continue
        s += 1
        s1 += sum(1 for q, _ in fs if z1 <= q < z2)
        if len(fs) == 3 and all(e == 1 for _, e in fs):
            qs = [q for q, _ in fs]
            if qs[0] < z2 <= qs[1]:
                s2 += 1
            elif z2 <= qs[0]:
                s3 += 1
    want = (s, s1, s2, s3)
    have = (got.S, got.S1, got.S2, got.S3)
    return have == want, (
        f"package {have} vs prime-scan oracle {want} at x=10^6, gamma=0.95 "
        f"(z1={z1}, z2={z2})"
    )


def _bv_oracle() -> tuple[bool, str]:
    x, gv, D, l = 10**4, 0.95, 10, 2
    ctx = PSContext(gv)
    rep = bv_discrepancy(x, gv, D, l, ctx=ctx)
    plist = [
        int(p) for p in sieve_primes(2, x).primes().tolist() if is_ps(int(p), ctx)
    ]
    total = len(plist)
    problems = []
    oracle_ds = [d for d in range(1, D + 1) if math.gcd(d, l) == 1]
    if [r.d for r in rep.rows] != oracle_ds:
        problems.append(f"row moduli {[r.d for r in rep.rows]} != {oracle_ds}")
    for row in rep.rows:
        want = sum(1 for p in plist if (p - l) % row.d == 0)
        if row.count != want:
            problems.append(f"d={row.d}: count {row.count} != oracle {want}")
    d1 = next((r for r in rep.rows if r.d == 1), None)
    if d1 is None or d1.abs_dev != 0.0:
        problems.append(f"d=1 deviation {None if d1 is None else d1.abs_dev} != 0")
    if problems:
        return False, "; ".join(problems)
    return True, (
        f"all {len(rep.rows)} rows match double-loop oracle ({total} PS primes); "
        f"d=1 deviation exactly 0"
    )


def _ndiag_oracle() -> tuple[bool, str]:
    checked = 0
    for J in (4, 8, 16):
        for N in (4, 8, 16):
            h = np.arange(J + 1, 2 * J + 1, dtype=np.float64)
            n = np.arange(N + 1, 2 * N + 1, dtype=np.float64)
            for alpha in (0.6, 0.8, 0.9):
                v = np.multiply.outer(h, n**alpha).ravel()
                gaps = np.abs(v[:, None] - v[None, :])
                vmax = J * (2 * N) ** alpha
                for delta in (0.0, 1e-3, 0.3, 2.0, vmax):
                    got = count_near_diagonal(J, N, alpha, delta)
                    want = int(np.count_nonzero(gaps <= delta))
                    if got != want:
                        return False, (
                            f"J={J} N={N} alpha={alpha} delta={delta}: "
                            f"{got} != brute {want}"
                        )
                    checked += 1
    return True, f"matches brute force on all {checked} (J,N,alpha,delta) cases"


def _twin_constant() -> tuple[bool, str]:
    r = twin_singular_series(10**8)
    dev = abs(r.value - TWIN_CONSTANT_REF)
    allowed = r.tail_bound + 1e-7
    return dev <= allowed, (
        f"value {r.value:.9f}, |value - {TWIN_CONSTANT_REF}| = {dev:.2e} "
        f"<= tail_bound + 1e-7 = {allowed:.2e}"
    )


CRITERIA: tuple[Criterion, ...] = (
    Criterion("exponent_pairs_closed_form", True, 1.0, _exponent_pairs),
    Criterion("level_solver_consistency", True, 5.0, _level_solver),
    Criterion("sieve_function_branches", True, 10.0, _sieve_functions),
    Criterion("chen_bracket_positivity", True, 60.0, _chen_bracket),
    Criterion("ps_oracle_equivalence", True, 30.0, _ps_oracle),
    Criterion("prime_count_1e6", True, None, _prime_count),
    Criterion("heath_brown_identity", False, 60.0, _heath_brown),
    Criterion("weight_inequality_1e5", False, None, _weight_inequality),
    Criterion("chen_counts_vs_prime_scan", False, 300.0, _chen_counts_oracle),
    Criterion("bv_discrepancy_oracle", True, None, _bv_oracle),
    Criterion("near_diagonal_oracle", True, None, _ndiag_oracle),
    Criterion("twin_constant_1e8", True, None, _twin_constant),
)


def run_criterion(criterion: Criterion) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, detail = criterion.fn()
    except Exception as exc:  # any raise is an honest failure, not a crash
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    runtime = time.perf_counter() - start
    if passed and criterion.budget is not None and runtime > criterion.budget:
        passed = False
        detail += f"; runtime {runtime:.1f}s exceeds {criterion.budget:.0f}s budget"
    return CriterionResult(criterion.name, passed, detail, runtime)


def verify_all(quick: bool = False) -> list[CriterionResult]:
    """Run the acceptance criteria; quick=True skips the three slow scans."""
    return [run_criterion(c) for c in CRITERIA if c.quick or not quick]
