"""
Prime Engine
Segmented sieves for primes, factorizations and Euler's totient over integer windows
"""
import math
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, field_validator, model_validator

from primebias.config import config
from primebias.core.errors import CapacityError, DomainError, EmptyRangeError
from primebias.utils.logger import get_logger

logger = get_logger(__name__)

# Largest window (in integers) a single phi/prime window may span
WINDOW_CAPACITY = 2 ** 24

# p_n for n < 6, where n(ln n + ln ln n) is not yet an upper bound
_SMALL_NTH_PRIMES = (2, 3, 5, 7, 11)


class SieveConfig(BaseModel):
    """Sieve extent and window width"""

    limit: int
    segment_length: int = config.SEGMENT_LENGTH

    @model_validator(mode='after')
    def _check_extent(self):
        if self.limit < 2:
            raise ValueError(f"limit must be >= 2, got {self.limit}")
        if self.segment_length < 64:
            raise ValueError(f"segment_length must be >= 64, got {self.segment_length}")
        if self.segment_length > self.limit:
            raise ValueError(
                f"segment_length {self.segment_length} exceeds limit {self.limit}"
            )
        return self

    @classmethod
    def covering(cls, limit: int, segment_length: Optional[int] = None) -> 'SieveConfig':
        """Config whose windows cover [2, limit]; tiny limits are padded up to one minimal window."""
        check_capacity(limit)
        padded = max(limit, 64)
        length = segment_length or config.SEGMENT_LENGTH
        return cls(limit=padded, segment_length=max(64, min(length, padded)))

    def segments(self, lo: int = 2) -> Iterator[Tuple[int, int]]:
        return segments(lo, self.limit + 1, self.segment_length)


class Factorization(BaseModel):
    """Prime factorization n = prod(prime ** exponent)"""

    n: int
    factors: List[Tuple[int, int]]

    @model_validator(mode='after')
    def _check_product(self):
        product = 1
        previous = 1
        for prime, exponent in self.factors:
            if prime <= previous or exponent < 1:
                raise ValueError(f"malformed factor ({prime}, {exponent})")
            previous = prime
            product *= prime ** exponent
        if product != self.n:
            raise ValueError(f"factors multiply to {product}, not {self.n}")
        return self

    @property
    def primes(self) -> List[int]:
        return [prime for prime, _ in self.factors]

    @property
    def largest_prime(self) -> int:
        return self.factors[-1][0] if self.factors else 1


class PhiWindow:
    """
    Euler totient over the integer window [lo, hi).

    values[i] == phi(lo + i), exact in int64.
    """

    def __init__(self, lo: int, hi: int, values: np.ndarray):
        self.lo = lo
        self.hi = hi
        self.values = values

    def __len__(self) -> int:
        return self.hi - self.lo

    def __getitem__(self, n: int) -> int:
        if not self.lo <= n < self.hi:
            raise IndexError(f"{n} outside window [{self.lo}, {self.hi})")
        return int(self.values[n - self.lo])

    def prime_mask(self) -> np.ndarray:
        """n is prime iff phi(n) == n - 1 (n >= 2)"""
        n = np.arange(self.lo, self.hi, dtype=np.int64)
        return (self.values == n - 1) & (n >= 2)


class PrimeWindow:
    """Primality bits over the integer window [lo, hi)"""

    def __init__(self, lo: int, hi: int, is_prime: np.ndarray):
        self.lo = lo
        self.hi = hi
        self.is_prime = is_prime

    def __len__(self) -> int:
        return self.hi - self.lo

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.is_prime).astype(np.int64) + self.lo


def check_capacity(limit: int) -> None:
    if limit > config.MAX_LIMIT:
        raise CapacityError(f"limit {limit} exceeds configured maximum {config.MAX_LIMIT}")


def segments(lo: int, hi: int, length: int) -> Iterator[Tuple[int, int]]:
    """Split [lo, hi) into consecutive windows of at most `length` integers."""
    start = lo
    while start < hi:
        end = min(start + length, hi)
        yield start, end
        start = end


def _simple_sieve(n: int) -> np.ndarray:
    """All primes <= n (n small enough for one boolean array)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@lru_cache(maxsize=8)
def _base_primes_pow2(bits: int) -> np.ndarray:
    return _simple_sieve(1 << bits)


def base_primes(bound: int) -> np.ndarray:
    """Primes <= bound, served from a cached sieve sized to the next power of two."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    table = _base_primes_pow2(max(bound, 2).bit_length())
    return table[:np.searchsorted(table, bound, side='right')]


def _check_window(lo: int, hi: int) -> None:
    if lo < 1 or hi <= lo:
        raise DomainError(f"window [{lo}, {hi}) must satisfy 1 <= lo < hi")
    if hi - lo > WINDOW_CAPACITY:
        raise CapacityError(f"window width {hi - lo} exceeds capacity {WINDOW_CAPACITY}")
    check_capacity(hi - 1)


def _first_multiple(lo: int, q: int) -> int:
    return -(-lo // q) * q


def _strip_prime(rest: np.ndarray, lo: int, hi: int, q: int) -> None:
    """Divide every entry of rest (indexed from lo) by its full power of q."""
    power = q
    while power < hi:
        first = _first_multiple(lo, power)
        if first >= hi:
            break
        rest[first - lo::power] //= q
        power *= q


def prime_window(lo: int, hi: int) -> PrimeWindow:
    """Segmented Eratosthenes over [lo, hi)."""
    _check_window(lo, hi)
    is_prime = np.ones(hi - lo, dtype=bool)
    if lo < 2:
        is_prime[:2 - lo] = False
    for q in base_primes(math.isqrt(hi - 1)).tolist():
        start = max(q * q, _first_multiple(lo, q))
        if start < hi:
            is_prime[start - lo::q] = False
    return PrimeWindow(lo, hi, is_prime)


def phi_window(lo: int, hi: int) -> PhiWindow:
    """
    Exact Euler totient for every n in [lo, hi).

    Each sieving prime q <= sqrt(hi - 1) maps phi to phi / q * (q - 1) on its
    multiples, dividing before multiplying so intermediates never exceed n.
    A cofactor left after stripping every small prime is a single prime > sqrt(hi - 1).
    """
    _check_window(lo, hi)
    phi = np.arange(lo, hi, dtype=np.int64)
    rest = phi.copy()
    for q in base_primes(math.isqrt(hi - 1)).tolist():
        first = _first_multiple(lo, q)
        if first >= hi:
            continue
        view = phi[first - lo::q]
        view //= q
        view *= q - 1
        _strip_prime(rest, lo, hi, q)
    big = rest > 1
    phi[big] = phi[big] // rest[big] * (rest[big] - 1)
    return PhiWindow(lo, hi, phi)


def omega_window(lo: int, hi: int) -> np.ndarray:
    """Number of distinct prime divisors of each n in [lo, hi)."""
    _check_window(lo, hi)
    omega = np.zeros(hi - lo, dtype=np.int64)
    rest = np.arange(lo, hi, dtype=np.int64)
    for q in base_primes(math.isqrt(hi - 1)).tolist():
        first = _first_multiple(lo, q)
        if first >= hi:
            continue
        omega[first - lo::q] += 1
        _strip_prime(rest, lo, hi, q)
    omega += rest > 1
    return omega


def smooth_mask(lo: int, hi: int, bound: int) -> np.ndarray:
    """True where every prime factor of n is <= bound."""
    _check_window(lo, hi)
    rest = np.arange(lo, hi, dtype=np.int64)
    for q in base_primes(min(bound, hi - 1)).tolist():
        _strip_prime(rest, lo, hi, q)
    return rest == 1


def primes_up_to(limit: int, segment_length: Optional[int] = None) -> np.ndarray:
    """Every prime <= limit, ascending."""
    if limit < 2:
        raise EmptyRangeError(f"no primes below 2 (limit={limit})")
    check_capacity(limit)
    length = segment_length or config.SEGMENT_LENGTH
    if limit <= length:
        return base_primes(limit).copy()
    chunks = [prime_window(lo, hi).primes() for lo, hi in segments(2, limit + 1, length)]
    return np.concatenate(chunks)


def nth_prime_upper_bound(n: int) -> int:
    """
    Proven upper bound on the n-th prime.

    p_n < n(ln n + ln ln n) for n >= 6; smaller n come from a table.
    """
    if n < 1:
        raise EmptyRangeError("n must be >= 1")
    if n < 6:
        return _SMALL_NTH_PRIMES[n - 1]
    return math.ceil(n * (math.log(n) + math.log(math.log(n))))


def first_n_primes(n: int) -> np.ndarray:
    """The first n primes, from one sieve to a proven bound on p_n."""
    bound = nth_prime_upper_bound(n)
    primes = primes_up_to(bound)
    return primes[:n]


def nth_prime(n: int, segment_length: Optional[int] = None) -> int:
    """The n-th prime, counted window by window so memory stays at one segment."""
    bound = nth_prime_upper_bound(n)
    check_capacity(bound)
    length = segment_length or config.SEGMENT_LENGTH
    seen = 0
    for lo, hi in segments(2, bound + 1, length):
        window = prime_window(lo, hi)
        count = int(window.is_prime.sum())
        if seen + count >= n:
            return int(window.primes()[n - seen - 1])
        seen += count
    raise AssertionError(f"n-th prime bound {bound} too small for n={n}")


def factorize(n: int) -> Factorization:
    """Complete factorization by trial division over cached base primes."""
    if n < 1:
        raise DomainError(f"cannot factorize {n}")
    check_capacity(n)
    factors = []
    rest = n
    for p in base_primes(math.isqrt(n)).tolist():
        if p * p > rest:
            break
        if rest % p == 0:
            exponent = 0
            while rest % p == 0:
                rest //= p
                exponent += 1
            factors.append((p, exponent))
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(n=n, factors=factors)


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n).factors == [(n, 1)]


def phi(n: int) -> int:
    """Euler totient, n / prod(q) * prod(q - 1) in exact integers."""
    if n < 1:
        raise DomainError(f"phi is undefined at {n}")
    result = n
    for prime in factorize(n).primes:
        result = result // prime * (prime - 1)
    return result
