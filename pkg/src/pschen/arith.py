"""Elementary arithmetic functions over a smallest-prime-factor table.

Everything here is exact integer arithmetic except the Mangoldt function
(a float log), the combinatorial identity check, and the sawtooth helpers.
The SPF table is the single shared backbone: factorization, the classical
multiplicative functions, and the identity check all read from it.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass

import numpy as np

from .errors import CostError, DomainError

CACHE_MAGIC = b"PSCHEN01"
CACHE_VERSION = 1


def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain sieve, for bootstrap use)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


class SpfTable:
    """Smallest-prime-factor table for 1..limit.

    spf(n) is the least prime dividing n; spf(1) = 1 by convention.
    Entries are uint32, so limit must stay below 2**32. Construction marks
    composites with the smallest unmarked prime, which yields the same table
    as a linear sieve. Read-only after construction; safe to share between
    threads.
    """

    def __init__(self, limit: int, *, max_limit: int = 100_000_000):
        if limit < 1:
            raise DomainError(f"SpfTable limit must be >= 1, got {limit}")
        if limit > max_limit:
            raise CostError(
                f"SpfTable limit {limit} exceeds the configured cap {max_limit}"
            )
        if limit >= 2**32:
            raise CostError("SpfTable entries are uint32; limit must be < 2**32")
        self.limit = int(limit)
        spf = np.zeros(limit + 1, dtype=np.uint32)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        # remaining zeros are 1 and the primes themselves
        idx = np.flatnonzero(spf == 0)
        spf[idx] = idx
        spf[0] = 0
        self._spf = spf

    def spf(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise DomainError(f"n={n} outside table range [1, {self.limit}]")
        return int(self._spf[n])

    def factor(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization of n as [(p, e), ...] in increasing p. factor(1) = []."""
        if not 1 <= n <= self.limit:
            raise DomainError(f"n={n} outside table range [1, {self.limit}]")
        out = []
        spf = self._spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def divisors(self, n: int) -> list[int]:
        """All positive divisors of n, sorted."""
        divs = [1]
        for p, e in self.factor(n):
            pk = 1
            more = []
            for _ in range(e):
                pk *= p
                more.extend(d * pk for d in divs)
            divs.extend(more)
        divs.sort()
        return divs

    def save(self, path: str | os.PathLike) -> None:
        """Write the table: magic, version u32 LE, limit u64 LE, raw LE u32 entries."""
        with open(path, "wb") as fh:
            fh.write(CACHE_MAGIC)
            fh.write(struct.pack("<I", CACHE_VERSION))
            fh.write(struct.pack("<Q", self.limit))
            fh.write(self._spf.astype("<u4", copy=False).tobytes())

    @classmethod
    def load(cls, path: str | os.PathLike) -> "SpfTable":
        with open(path, "rb") as fh:
            magic = fh.read(8)
            if magic != CACHE_MAGIC:
                raise DomainError(f"bad cache magic {magic!r} in {path}")
            (version,) = struct.unpack("<I", fh.read(4))
            if version != CACHE_VERSION:
                raise DomainError(f"unsupported cache version {version} in {path}")
            (limit,) = struct.unpack("<Q", fh.read(8))
            data = fh.read()
        expected = (limit + 1) * 4
        if len(data) != expected:
            raise DomainError(
                f"cache {path} truncated: {len(data)} bytes, expected {expected}"
            )
        table = cls.__new__(cls)
        table.limit = int(limit)
        table._spf = np.frombuffer(data, dtype="<u4").astype(np.uint32)
        return table


def spf_table(limit: int, cache_dir: str | os.PathLike | None = None) -> SpfTable:
    """Load an SPF table from cache_dir if present, else build (and cache) it."""
    if cache_dir is None:
        return SpfTable(limit)
    path = os.path.join(cache_dir, f"spf-{limit}.bin")
    if os.path.exists(path):
        return SpfTable.load(path)
    table = SpfTable(limit)
    os.makedirs(cache_dir, exist_ok=True)
    table.save(path)
    return table


def factor(n: int, t: SpfTable) -> list[tuple[int, int]]:
    return t.factor(n)


def mobius(n: int, t: SpfTable) -> int:
    fac = t.factor(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def von_mangoldt(n: int, t: SpfTable) -> float:
    """log p if n is a prime power p^e, else 0. von_mangoldt(1) = 0."""
    fac = t.factor(n)
    if len(fac) == 1:
        return math.log(fac[0][0])
    return 0.0


def euler_phi(n: int, t: SpfTable) -> int:
    out = 1
    for p, e in t.factor(n):
        out *= p ** (e - 1) * (p - 1)
    return out


def big_omega(n: int, t: SpfTable) -> int:
    """Number of prime factors counted with multiplicity; 0 for n = 1."""
    return sum(e for _, e in t.factor(n))


def tau_r(n: int, r: int, t: SpfTable) -> int:
    """Number of ordered r-tuples of positive integers with product n."""
    if r < 1:
        raise DomainError(f"tau_r needs r >= 1, got {r}")
    out = 1
    for _, e in t.factor(n):
        out *= math.comb(e + r - 1, r - 1)
    return out


def arith_fn(n: int, kind: str, t: SpfTable, r: int = 2):
    """Dispatch by name: mu, lambda, phi, omega_big, tau_r."""
    if kind == "mu":
        return mobius(n, t)
    if kind == "lambda":
        return von_mangoldt(n, t)
    if kind == "phi":
        return euler_phi(n, t)
    if kind == "omega_big":
        return big_omega(n, t)
    if kind == "tau_r":
        return tau_r(n, r, t)
    raise DomainError(f"unknown arithmetic function kind {kind!r}")


def _cube_root_ceil(n: int) -> int:
    c = round(n ** (1 / 3))
    while c**3 < n:
        c += 1
    while c >= 1 and (c - 1) ** 3 >= n:
        c -= 1
    return c


class _HBEvaluator:
    """Combinatorial-identity sums with memoized suffix convolutions.

    The sum for block count j runs over ordered tuples (k_1..k_2j) with
    product n, the first j factors mu-weighted and capped, the last factor
    log-weighted. Suffix sums depend only on (remaining product, free slots),
    so they are cached across n; that turns the exhaustive scan quadratic-ish
    work into roughly sum-of-divisor-counts work.
    """

    def __init__(self, table: SpfTable, cap: int):
        self.table = table
        self.cap = cap
        self._div: dict[int, list[int]] = {}
        self._mu: dict[int, int] = {}
        self._free: dict[tuple[int, int], float] = {}
        self._mu_part: dict[tuple[int, int, int], float] = {}

    def _divisors(self, m: int) -> list[int]:
        divs = self._div.get(m)
        if divs is None:
            divs = self.table.divisors(m)
            self._div[m] = divs
        return divs

    def _mobius(self, m: int) -> int:
        v = self._mu.get(m)
        if v is None:
            v = mobius(m, self.table)
            self._mu[m] = v
        return v

    def _free_sum(self, m: int, slots: int) -> float:
        # sum over ordered (slots+1)-tuples of divisors with product m,
        # log of the last factor
        if slots == 0:
            return math.log(m) if m > 1 else 0.0
        key = (m, slots)
        v = self._free.get(key)
        if v is None:
            v = sum(self._free_sum(m // d, slots - 1) for d in self._divisors(m))
            self._free[key] = v
        return v

    def _mu_sum(self, m: int, slots: int, j: int) -> float:
        if slots == 0:
            return self._free_sum(m, j - 1)
        key = (m, slots, j)
        v = self._mu_part.get(key)
        if v is None:
            v = 0.0
            for d in self._divisors(m):
                if d > self.cap:
                    break
                mu_d = self._mobius(d)
                if mu_d:
                    v += mu_d * self._mu_sum(m // d, slots - 1, j)
            self._mu_part[key] = v
        return v

    def identity_sum(self, n: int) -> float:
        total = 0.0
        for j in (1, 2, 3):
            sign = 1.0 if j % 2 else -1.0
            total += math.comb(3, j) * sign * self._mu_sum(n, j, j)
        return total

    def residual(self, n: int) -> float:
        return abs(von_mangoldt(n, self.table) - self.identity_sum(n))


def heath_brown_check(n: int, cube_root_cap: int, table: SpfTable | None = None) -> float:
    """Residual of the three-block combinatorial identity for the Mangoldt function.

    Computes |lambda(n) - sum_j C(3,j)(-1)^(j-1) sum mu(k_1)..mu(k_j) log k_2j|
    over ordered factorizations k_1..k_2j = n with k_1..k_j <= cube_root_cap.
    Exact (up to float rounding) whenever cube_root_cap >= ceil(n^(1/3)).
    """
    if n < 2:
        raise DomainError(f"identity check needs n >= 2, got {n}")
    need = _cube_root_ceil(n)
    if cube_root_cap < need:
        raise DomainError(
            f"cap {cube_root_cap} below ceil(n^(1/3)) = {need}; identity not exact"
        )
    if table is None:
        table = SpfTable(n)
    return _HBEvaluator(table, cube_root_cap).residual(n)


def heath_brown_max_residual(
    n_max: int, cube_root_cap: int | None = None, table: SpfTable | None = None
) -> tuple[float, int]:
    """(max residual, argmax n) of the identity check over 2 <= n <= n_max."""
    if n_max < 2:
        raise DomainError(f"need n_max >= 2, got {n_max}")
    if cube_root_cap is None:
        cube_root_cap = _cube_root_ceil(n_max)
    if cube_root_cap < _cube_root_ceil(n_max):
        raise DomainError("cap below ceil(n_max^(1/3)); identity not exact for all n")
    if table is None:
        table = SpfTable(n_max)
    ev = _HBEvaluator(table, cube_root_cap)
    worst, worst_n = -1.0, 2
    for n in range(2, n_max + 1):
        r = ev.residual(n)
        if r > worst:
            worst, worst_n = r, n
    return worst, worst_n


@dataclass
class SingularSeriesResult:
    value: float
    prime_bound: int
    tail_bound: float


def _trigamma(x: int) -> float:
    # sum_{m >= x} 1/m^2 via upshift + asymptotic series; good to ~1e-14 rel.
    s = 0.0
    while x < 25:
        s += 1.0 / (x * x)
        x += 1
    inv = 1.0 / x
    inv2 = inv * inv
    s += inv * (1 + inv / 2 + inv2 / 6 - inv2 * inv2 / 30 + inv2 * inv2 * inv2 / 42)
    return s


def twin_singular_series(prime_bound: int, *, segment: int = 4_000_000) -> SingularSeriesResult:
    """Partial twin singular-series product prod_{2<p<=B} (1 - 1/(p-1)^2).

    tail_bound is sum_{n>B} 1/(n-1)^2, a rigorous over-count of the omitted
    factors: value * (1 - tail_bound) <= full product <= value.
    """
    if prime_bound < 3:
        raise DomainError(f"prime_bound must be >= 3, got {prime_bound}")
    B = int(prime_bound)
    base = base_primes(math.isqrt(B))
    odd_base = [int(p) for p in base if p > 2]
    value = 1.0
    for lo in range(3, B + 1, segment):
        hi = min(lo + segment - 1, B)
        start = lo if lo % 2 == 1 else lo + 1
        if start > hi:
            continue
        odds = np.ones((hi - start) // 2 + 1, dtype=bool)
        for p in odd_base:
            if p * p > hi:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            if first % 2 == 0:
                first += p
            if first > hi:
                continue
            odds[(first - start) // 2 :: p] = False
        vals = start + 2.0 * np.flatnonzero(odds)
        if len(vals):
            value *= float(np.prod(1.0 - 1.0 / (vals - 1.0) ** 2))
    return SingularSeriesResult(value=value, prime_bound=B, tail_bound=_trigamma(B))


def psi(t: float) -> float:
    """Sawtooth t - floor(t) - 1/2; equals -1/2 at integers."""
    return t - math.floor(t) - 0.5


def psi_truncation_gap(t: float, H: int) -> tuple[float, float]:
    """Gap between psi(t) and its truncated Fourier expansion, with envelope.

    Returns (gap, E) where gap = |psi(t) + sum_{h<=H} sin(2 pi h t)/(pi h)|
    and E = min(1, 1/(H * ||t||)), ||t|| the distance to the nearest integer.
    """
    if H < 1:
        raise DomainError(f"need H >= 1, got {H}")
    partial = sum(math.sin(2 * math.pi * h * t) / (math.pi * h) for h in range(1, H + 1))
    gap = abs(psi(t) + partial)
    frac = t - math.floor(t)
    norm = min(frac, 1.0 - frac)
    envelope = 1.0 if norm == 0.0 else min(1.0, 1.0 / (H * norm))
    return gap, envelope
