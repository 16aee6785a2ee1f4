"""Sieves and arithmetic functions underpinning every other module.

The workhorse is a smallest-prime-factor table: once built, factorizing any
n <= limit walks the table in O(log n) steps, which is what makes generating
and testing millions of candidates affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, RangeError

# Table ceiling: 4 bytes per entry, so 10^8 costs ~400 MB and 10^9 ~4 GB.
# uint32 storage caps usable limits below 2^32; we stop at 2^31 - 1.
MAX_SIEVE_LIMIT = 2**31 - 1


@dataclass(frozen=True)
class SieveTable:
    """Smallest-prime-factor table for [2, limit], plus the prime list.

    smallest_prime_factor[n] is the least prime dividing n (entries 0 and 1
    are unused and hold 0). Immutable after construction; safe to share
    read-only across threads.
    """

    limit: int
    smallest_prime_factor: np.ndarray  # uint32, length limit + 1
    primes: np.ndarray  # int64, ascending

    def __post_init__(self):
        self.smallest_prime_factor.setflags(write=False)
        self.primes.setflags(write=False)

    def prime_count(self, x: int) -> int:
        """pi(x): number of primes <= x, for x <= limit."""
        if x > self.limit:
            raise RangeError(f"x={x} exceeds sieve limit {self.limit}")
        return int(np.searchsorted(self.primes, x, side="right"))


@dataclass(frozen=True)
class FactorChain:
    """Sorted prime factorization with prefix products.

    primes = (p_1, ..., p_k) with p_1 <= ... <= p_k and
    prefix_products[j] = p_1 * ... * p_j for j < k (prefix_products[0] = 1),
    so primes[j] pairs with the product of everything before it.
    n = 1 is the empty chain.
    """

    primes: tuple[int, ...]
    prefix_products: tuple[int, ...]

    @classmethod
    def from_primes(cls, primes: tuple[int, ...]) -> "FactorChain":
        prefixes = []
        acc = 1
        for p in primes:
            prefixes.append(acc)
            acc *= p
        return cls(primes=primes, prefix_products=tuple(prefixes))

    @property
    def n(self) -> int:
        acc = 1
        for p in self.primes:
            acc *= p
        return acc

    def __len__(self) -> int:
        return len(self.primes)


@dataclass(frozen=True)
class ArithmeticProfile:
    """Mobius, totient, divisor sum and Omega of a single integer."""

    n: int
    mobius: int
    euler_phi: int
    sigma: int
    big_omega: int


def build_sieve(limit: int) -> SieveTable:
    """Build the smallest-prime-factor table over [2, limit].

    Vectorized Eratosthenes-style fill: for each prime p <= sqrt(limit),
    stamp p onto the still-unmarked multiples of p from p^2 on. Survivors
    are prime. Deterministic; O(limit log log limit) element writes.
    """
    if limit < 2 or limit > MAX_SIEVE_LIMIT:
        raise ConfigurationError(
            f"sieve limit must be in [2, {MAX_SIEVE_LIMIT}], got {limit}"
        )
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    # remaining zeros at n >= 2 are primes: spf[p] = p
    unmarked = np.nonzero(spf[2:] == 0)[0] + 2
    spf[unmarked] = unmarked
    values = np.arange(2, limit + 1, dtype=np.uint32)
    primes = (np.nonzero(spf[2:] == values)[0] + 2).astype(np.int64)
    return SieveTable(limit=limit, smallest_prime_factor=spf, primes=primes)


def factorize(n: int, sieve: SieveTable) -> FactorChain:
    """Prime factorization of n as a sorted chain; n = 1 gives the empty chain."""
    if n < 1 or n > sieve.limit:
        raise RangeError(f"n={n} outside [1, {sieve.limit}]")
    spf = sieve.smallest_prime_factor
    primes = []
    m = n
    while m > 1:
        p = int(spf[m])
        primes.append(p)
        m //= p
    return FactorChain.from_primes(tuple(primes))


def largest_prime_factor(n: int, sieve: SieveTable) -> int:
    """P(n): largest prime factor, with P(1) = 1."""
    if n < 1 or n > sieve.limit:
        raise RangeError(f"n={n} outside [1, {sieve.limit}]")
    spf = sieve.smallest_prime_factor
    largest = 1
    m = n
    while m > 1:
        p = int(spf[m])
        largest = p
        m //= p
    return largest


def arithmetic_profile(n: int, sieve: SieveTable) -> ArithmeticProfile:
    """Compute mu(n), phi(n), sigma(n) and Omega(n) from the factorization."""
    chain = factorize(n, sieve)
    mobius = 1
    phi = 1
    sigma = 1
    i = 0
    ps = chain.primes
    while i < len(ps):
        p = ps[i]
        e = 1
        while i + e < len(ps) and ps[i + e] == p:
            e += 1
        i += e
        if e > 1:
            mobius = 0
        else:
            mobius = -mobius
        phi *= p ** (e - 1) * (p - 1)
        sigma *= (p ** (e + 1) - 1) // (p - 1)
    return ArithmeticProfile(
        n=n, mobius=mobius, euler_phi=phi, sigma=sigma, big_omega=len(ps)
    )


@lru_cache(maxsize=8)
def _prime_list(bound: int) -> tuple[int, ...]:
    """Small standalone prime sieve, cached; used where no SieveTable is at hand."""
    if bound < 2:
        return ()
    flags = np.ones(bound + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return tuple(int(p) for p in np.nonzero(flags)[0])


def smooth_count(x: int, y: int) -> int:
    """Psi(x, y): exact count of y-smooth integers <= x (1 counts as smooth).

    Counts by depth-first search over products of primes <= y rather than by
    sieving [1, x], so memory stays O(pi(y)) and x up to 10^9 is feasible
    whenever the count itself is moderate. Runtime is O(Psi(x, y)).
    """
    if x < 1 or y < 1:
        raise RangeError(f"smooth_count needs x, y >= 1, got x={x}, y={y}")
    if y >= x:
        return x
    primes = _prime_list(y)

    def count(idx: int, rem: int) -> int:
        total = 1
        for i in range(idx, len(primes)):
            p = primes[i]
            if p > rem:
                break
            total += count(i, rem // p)
        return total

    return count(0, x)


@lru_cache(maxsize=4)
def _prime_array(bound: int) -> np.ndarray:
    return np.asarray(_prime_list(bound), dtype=np.int64)


def prime_count_residue(x: int, a: int, q: int, sieve: SieveTable | None = None) -> int:
    """pi(x, a, q): number of primes p <= x with p = a (mod q).

    pi(x, 0, 1) is the plain prime count. Uses the supplied sieve's prime
    list when it covers x, otherwise builds (and caches) one.
    """
    if x < 2:
        raise RangeError(f"x must be >= 2, got {x}")
    if q < 1 or not 0 <= a < q:
        raise RangeError(f"need q >= 1 and 0 <= a < q, got a={a}, q={q}")
    if sieve is not None and sieve.limit >= x:
        primes = sieve.primes
    else:
        primes = _prime_array(x)
    upto = primes[: np.searchsorted(primes, x, side="right")]
    if q == 1:
        return int(upto.size)
    return int(np.count_nonzero(upto % q == a))
