"""Arithmetic backbone: SPF table, multiplicative functions, identity check,
singular series, sawtooth. Oracles are trial division and mpmath."""

import math

import mpmath
import numpy as np
import pytest

from pschen.arith import (
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
from pschen.errors import CostError, DomainError


def trial_factor(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_base_primes_small():
    assert base_primes(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert base_primes(1).size == 0
    assert base_primes(2).tolist() == [2]


def test_base_primes_counts():
    # pi(x) reference values
    for x, pi_x in [(100, 25), (1000, 168), (10_000, 1229)]:
        assert base_primes(x).size == pi_x


def test_spf_factor_matches_trial_division(spf10k):
    for n in range(1, 2000):
        assert spf10k.factor(n) == trial_factor(n)
    rng = np.random.default_rng(1)
    for n in rng.integers(2000, 10_001, size=200):
        n = int(n)
        assert spf10k.factor(n) == trial_factor(n)


def test_spf_value(spf10k):
    assert spf10k.spf(1) == 1
    assert spf10k.spf(97) == 97
    assert spf10k.spf(98) == 2
    assert spf10k.spf(99) == 3
    with pytest.raises(DomainError):
        spf10k.spf(0)
    with pytest.raises(DomainError):
        spf10k.spf(10_001)


def test_spf_table_bounds():
    with pytest.raises(DomainError):
        SpfTable(0)
    with pytest.raises(CostError):
        SpfTable(101, max_limit=100)


def test_divisors(spf10k):
    assert spf10k.divisors(1) == [1]
    assert spf10k.divisors(12) == [1, 2, 3, 4, 6, 12]
    assert spf10k.divisors(97) == [1, 97]
    for n in (360, 1024, 9973):
        divs = spf10k.divisors(n)
        assert divs == sorted(divs)
        assert all(n % d == 0 for d in divs)
        assert len(divs) == sum(1 for d in range(1, n + 1) if n % d == 0)


def test_save_load_roundtrip(tmp_path, spf10k):
    path = tmp_path / "spf.bin"
    spf10k.save(path)
    loaded = SpfTable.load(path)
    assert loaded.limit == spf10k.limit
    assert np.array_equal(loaded._spf, spf10k._spf)


def test_load_rejects_corruption(tmp_path, spf10k):
    path = tmp_path / "spf.bin"
    spf10k.save(path)
    raw = path.read_bytes()
    (tmp_path / "magic.bin").write_bytes(b"XXXXXXXX" + raw[8:])
    with pytest.raises(DomainError, match="magic"):
        SpfTable.load(tmp_path / "magic.bin")
    (tmp_path / "trunc.bin").write_bytes(raw[:-8])
    with pytest.raises(DomainError, match="truncated"):
        SpfTable.load(tmp_path / "trunc.bin")


def test_spf_table_cache_helper(tmp_path):
    t1 = spf_table(500, tmp_path)
    assert (tmp_path / "spf-500.bin").exists()
    t2 = spf_table(500, tmp_path)
    assert np.array_equal(t1._spf, t2._spf)
    t3 = spf_table(500, None)
    assert np.array_equal(t1._spf, t3._spf)


def test_mobius_values_and_summatory(spf10k):
    assert [mobius(n, spf10k) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    # sum_{d | n} mu(d) = [n = 1]
    for n in (1, 2, 30, 360, 9973):
        total = sum(mobius(d, spf10k) for d in spf10k.divisors(n))
        assert total == (1 if n == 1 else 0)


def test_euler_phi(spf10k):
    assert [euler_phi(n, spf10k) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    # sum_{d | n} phi(d) = n
    for n in (1, 12, 97, 360, 5040):
        assert sum(euler_phi(d, spf10k) for d in spf10k.divisors(n)) == n


def test_von_mangoldt(spf10k):
    assert von_mangoldt(1, spf10k) == 0.0
    assert von_mangoldt(6, spf10k) == 0.0
    assert von_mangoldt(7, spf10k) == pytest.approx(math.log(7))
    assert von_mangoldt(8, spf10k) == pytest.approx(math.log(2))
    # sum_{d | n} Lambda(d) = log n
    for n in (2, 12, 360, 1024, 9973):
        total = sum(von_mangoldt(d, spf10k) for d in spf10k.divisors(n))
        assert total == pytest.approx(math.log(n), abs=1e-12)


def test_big_omega_and_tau(spf10k):
    assert big_omega(1, spf10k) == 0
    assert big_omega(12, spf10k) == 3
    assert big_omega(1024, spf10k) == 10
    # tau_2 is the divisor count; tau_1 is the constant 1
    for n in (1, 2, 12, 360, 9973):
        assert tau_r(n, 2, spf10k) == len(spf10k.divisors(n))
        assert tau_r(n, 1, spf10k) == 1
    # tau_3(n) = sum over divisors of tau_2
    for n in (12, 360):
        assert tau_r(n, 3, spf10k) == sum(
            tau_r(d, 2, spf10k) for d in spf10k.divisors(n)
        )
    with pytest.raises(DomainError):
        tau_r(12, 0, spf10k)


def test_arith_fn_dispatch(spf10k):
    assert arith_fn(30, "mu", spf10k) == mobius(30, spf10k)
    assert arith_fn(8, "lambda", spf10k) == von_mangoldt(8, spf10k)
    assert arith_fn(30, "phi", spf10k) == euler_phi(30, spf10k)
    assert arith_fn(30, "omega_big", spf10k) == big_omega(30, spf10k)
    assert arith_fn(30, "tau_r", spf10k, r=3) == tau_r(30, 3, spf10k)
    with pytest.raises(DomainError):
        arith_fn(30, "sigma", spf10k)


def test_heath_brown_exact_for_sufficient_cap(spf10k):
    for n in (2, 3, 4, 30, 97, 360, 720, 2310, 9973, 9240):
        assert heath_brown_check(n, 25, spf10k) <= 1e-10
    # identity also exact with a cap above the minimum
    assert heath_brown_check(360, 360, spf10k) <= 1e-10


def test_heath_brown_cap_validation(spf10k):
    with pytest.raises(DomainError):
        heath_brown_check(1000, 9, spf10k)  # ceil(1000^(1/3)) = 10
    with pytest.raises(DomainError):
        heath_brown_check(1, 5, spf10k)
    with pytest.raises(DomainError):
        heath_brown_max_residual(1)


def test_heath_brown_scan(spf10k):
    worst, argn = heath_brown_max_residual(2000, table=spf10k)
    assert worst <= 1e-10
    assert 2 <= argn <= 2000


def test_twin_singular_series_against_mpmath():
    res = twin_singular_series(10_000)
    assert isinstance(res, SingularSeriesResult)
    assert res.prime_bound == 10_000
    with mpmath.workdps(40):
        oracle = mpmath.mpf(1)
        for p in base_primes(10_000).tolist():
            if p > 2:
                oracle *= 1 - mpmath.mpf(1) / (p - 1) ** 2
        assert abs(res.value - float(oracle)) <= 1e-13
    # tail envelope: sum_{n > B} 1/(n-1)^2 = sum_{m >= B} 1/m^2 via polygamma
    with mpmath.workdps(30):
        tail = float(mpmath.polygamma(1, 10_000))
    assert res.tail_bound == pytest.approx(tail, rel=1e-10)


def test_twin_singular_series_monotone_and_bracketing():
    r1 = twin_singular_series(10**4)
    r2 = twin_singular_series(10**5)
    r3 = twin_singular_series(10**6)
    # partial products decrease toward the constant
    assert r1.value > r2.value > r3.value
    # coarse partial product stays within its own tail of the finer one
    assert r1.value * (1 - r1.tail_bound) <= r3.value <= r1.value
    assert abs(r3.value - 0.66016181584686957) < 1e-6
    with pytest.raises(DomainError):
        twin_singular_series(2)


def test_twin_singular_series_segmentation_invariance():
    # segment size only regroups the float product; drift stays at
    # rounding scale (one ulp per regrouped factor)
    a = twin_singular_series(200_000, segment=1_000)
    b = twin_singular_series(200_000, segment=4_000_000)
    assert a.value == pytest.approx(b.value, abs=1e-12)


def test_psi_basics():
    assert psi(0.25) == pytest.approx(-0.25)
    assert psi(3.0) == -0.5
    assert psi(-0.25) == pytest.approx(0.25)
    for t in np.linspace(-3, 3, 61):
        assert -0.5 <= psi(float(t)) < 0.5


def test_psi_truncation_gap_envelope():
    for t in (0.123, 0.5, 2.718, -1.47, 0.999):
        for H in (1, 5, 50, 500):
            gap, env = psi_truncation_gap(t, H)
            assert gap <= env + 1e-12
            assert env <= 1.0 + 1e-15
    with pytest.raises(DomainError):
        psi_truncation_gap(0.5, 0)


def test_psi_truncation_gap_shrinks():
    gaps = [psi_truncation_gap(0.3, H)[0] for H in (10, 100, 1000, 10000)]
    assert gaps[-1] < gaps[0]
