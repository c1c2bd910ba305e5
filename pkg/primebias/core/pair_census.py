"""
Pair Census
Enumerates prime pairs p, p+k window by window and tallies the exact signs of
T(p) = phi(p-1) - phi(p+k-1) and S(p) = phi(p-1)/(p-1) - phi(p+k-1)/(p+k-1).
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from primebias.core.bias_constants import check_even_k, chi3, n_f
from primebias.core.errors import ConstraintError, DomainError
from primebias.core.prime_engine import (
    SieveConfig,
    is_prime,
    nth_prime,
    omega_window,
    phi_window,
    smooth_mask,
)
from primebias.utils.logger import get_logger

logger = get_logger(__name__)

CSV_HEADER = ('k', 'mode', 'bound', 'pair_count', 't_neg', 't_zero', 't_pos',
              's_neg', 's_zero', 's_pos', 'st_agree')

# Cross products phi(a) * b stay inside int64 while every integer is below this
_INT64_PRODUCT_LIMIT = 3_037_000_499


class ScopeMode(str, Enum):
    UP_TO_X = 'up_to_x'
    FIRST_N_PRIMES = 'first_n_primes'


class CensusScope(BaseModel):
    """Which p are counted: p <= x, or p among the first N primes"""

    mode: ScopeMode
    bound: int

    @model_validator(mode='after')
    def _check_bound(self):
        if self.mode is ScopeMode.UP_TO_X and self.bound < 3:
            raise ValueError(f"UP_TO_X scope needs x >= 3, got {self.bound}")
        if self.mode is ScopeMode.FIRST_N_PRIMES and self.bound < 1:
            raise ValueError(f"FIRST_N_PRIMES scope needs N >= 1, got {self.bound}")
        return self

    @classmethod
    def up_to(cls, x: int) -> 'CensusScope':
        return cls(mode=ScopeMode.UP_TO_X, bound=x)

    @classmethod
    def first_primes(cls, n: int) -> 'CensusScope':
        return cls(mode=ScopeMode.FIRST_N_PRIMES, bound=n)

    def max_prime(self) -> int:
        """Largest p in scope (x itself, or the N-th prime)"""
        if self.mode is ScopeMode.UP_TO_X:
            return self.bound
        return nth_prime(self.bound)


class CensusResult(BaseModel):
    """Sign tallies of T(p) and S(p) over the pairs in scope; adding results merges disjoint windows."""

    k: int
    scope: CensusScope
    pair_count: int = 0
    t_neg: int = 0
    t_zero: int = 0
    t_pos: int = 0
    s_neg: int = 0
    s_zero: int = 0
    s_pos: int = 0
    st_agree: int = 0

    @model_validator(mode='after')
    def _check_counts(self):
        counts = (self.pair_count, self.t_neg, self.t_zero, self.t_pos,
                  self.s_neg, self.s_zero, self.s_pos, self.st_agree)
        if min(counts) < 0:
            raise ValueError("counts must be nonnegative")
        if self.t_neg + self.t_zero + self.t_pos != self.pair_count:
            raise ValueError("T sign classes do not sum to pair_count")
        if self.s_neg + self.s_zero + self.s_pos != self.pair_count:
            raise ValueError("S sign classes do not sum to pair_count")
        if self.st_agree > self.pair_count:
            raise ValueError("st_agree exceeds pair_count")
        return self

    def __add__(self, other: 'CensusResult') -> 'CensusResult':
        if (self.k, self.scope) != (other.k, other.scope):
            raise DomainError("can only merge census results for the same k and scope")
        return CensusResult(
            k=self.k,
            scope=self.scope,
            pair_count=self.pair_count + other.pair_count,
            t_neg=self.t_neg + other.t_neg,
            t_zero=self.t_zero + other.t_zero,
            t_pos=self.t_pos + other.t_pos,
            s_neg=self.s_neg + other.s_neg,
            s_zero=self.s_zero + other.s_zero,
            s_pos=self.s_pos + other.s_pos,
            st_agree=self.st_agree + other.st_agree,
        )

    def csv_row(self) -> Tuple:
        return (self.k, self.scope.mode.value, self.scope.bound, self.pair_count,
                self.t_neg, self.t_zero, self.t_pos, self.s_neg, self.s_zero, self.s_pos,
                self.st_agree)


class ConstraintSpec(BaseModel):
    """Divisibility constraints: every q divides p-1+tau_k, r divides p-1+(k-tau_k)"""

    q_divisors: Set[int] = set()
    r_divisor: Optional[int] = None
    tau_k: int = 0

    @model_validator(mode='after')
    def _check_primes(self):
        for q in self.q_divisors:
            if q < 5 or not is_prime(q):
                raise ValueError(f"q divisor {q} must be a prime >= 5")
        if self.r_divisor is not None:
            if self.r_divisor < 5 or not is_prime(self.r_divisor):
                raise ValueError(f"r divisor {self.r_divisor} must be a prime >= 5")
            if self.r_divisor in self.q_divisors:
                raise ValueError(f"r divisor {self.r_divisor} is also a q divisor")
        return self

    @classmethod
    def for_sign(cls, k: int, q_divisors: Sequence[int], r_divisor: Optional[int] = None,
                 sign: Optional[int] = None) -> 'ConstraintSpec':
        """tau_k = k(1 + s)/2 for s = chi3(k), or the explicit sign when 3 | k"""
        s = sign if sign is not None else chi3(k)
        if s not in (-1, 1):
            raise DomainError(f"k={k} needs an explicit sign of +1 or -1")
        return cls(q_divisors=set(q_divisors), r_divisor=r_divisor, tau_k=k * (1 + s) // 2)

    def check_against(self, k: int) -> None:
        """Divisibility hypotheses for this orientation of tau_k"""
        if self.tau_k not in (0, k):
            raise DomainError(f"tau_k must be 0 or k={k}, got {self.tau_k}")
        q_forbidden = k * (k + 1) if self.tau_k == 0 else k * (k - 1)
        r_forbidden = k * (k - 1) if self.tau_k == 0 else k * (k + 1)
        for q in sorted(self.q_divisors):
            if q_forbidden % q == 0:
                raise ConstraintError(q, f"divides {q_forbidden}")
        if self.r_divisor is not None and r_forbidden % self.r_divisor == 0:
            raise ConstraintError(self.r_divisor, f"divides {r_forbidden}")


class SmoothPairReport(BaseModel):
    """Pairs whose p-1 and p+k-1 are both k-smooth, and those among them with S(p) = 0"""

    k: int
    search_limit: int
    candidates: List[int]
    s_zero: List[int]


@dataclass(frozen=True)
class PairBlock:
    """The pairs p, p+k found in one window with phi(p-1) and phi(p+k-1)"""

    k: int
    p: np.ndarray
    phi_low: np.ndarray
    phi_high: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return self.phi_low - self.phi_high

    def s_sign(self) -> np.ndarray:
        """sign of phi(p-1)(p+k-1) - phi(p+k-1)(p-1), exact"""
        low_n = self.p - 1
        high_n = self.p + self.k - 1
        if len(self.p) and int(high_n[-1]) >= _INT64_PRODUCT_LIMIT:
            diff = (self.phi_low.astype(object) * high_n.astype(object)
                    - self.phi_high.astype(object) * low_n.astype(object))
            return np.array([(d > 0) - (d < 0) for d in diff], dtype=np.int64)
        return np.sign(self.phi_low * high_n - self.phi_high * low_n)

    def subset(self, mask: np.ndarray) -> 'PairBlock':
        return PairBlock(self.k, self.p[mask], self.phi_low[mask], self.phi_high[mask])


def _pair_blocks(lo: int, hi: int, k_list: Sequence[int], with_omega: bool = False):
    """
    Pairs with p in [lo, hi), lo >= 2.

    One phi window over [lo-1, hi+max(k)) serves every k: it supplies phi(p-1),
    phi(p+k-1) and primality of p and p+k (phi(n) == n-1).
    """
    base = lo - 1
    top = hi + max(k_list)
    window = phi_window(base, top)
    prime = window.prime_mask()
    omega = omega_window(base, top) if with_omega else None
    p = np.arange(lo, hi, dtype=np.int64)
    offset = p - base
    p_prime = prime[offset]
    for k in k_list:
        mask = p_prime & prime[offset + k]
        at = offset[mask]
        block = PairBlock(k, p[mask], window.values[at - 1], window.values[at + k - 1])
        if with_omega:
            yield block, omega[at - 1], omega[at + k - 1]
        else:
            yield block


def _windows(scope: CensusScope, segment_length: Optional[int] = None):
    p_max = scope.max_prime()
    sieve = SieveConfig.covering(p_max, segment_length)
    for lo, hi in sieve.segments(2):
        yield lo, min(hi, p_max + 1)


def _iter_blocks(k_list: Sequence[int], scope: CensusScope, with_omega: bool = False,
                 segment_length: Optional[int] = None):
    for k in k_list:
        check_even_k(k)
    for lo, hi in _windows(scope, segment_length):
        if lo >= hi:
            break
        logger.debug(f"Census window [{lo:,}, {hi:,})")
        yield from _pair_blocks(lo, hi, k_list, with_omega)


def enumerate_pairs(k: int, scope: CensusScope) -> Iterator[int]:
    """Ascending stream of the p in scope with p and p+k both prime."""
    for block in _iter_blocks([k], scope):
        yield from block.p.tolist()


def _tally(k: int, scope: CensusScope, block: PairBlock) -> CensusResult:
    t_sign = np.sign(block.t)
    s_sign = block.s_sign()
    return CensusResult(
        k=k,
        scope=scope,
        pair_count=len(block.p),
        t_neg=int((t_sign < 0).sum()),
        t_zero=int((t_sign == 0).sum()),
        t_pos=int((t_sign > 0).sum()),
        s_neg=int((s_sign < 0).sum()),
        s_zero=int((s_sign == 0).sum()),
        s_pos=int((s_sign > 0).sum()),
        st_agree=int((s_sign * t_sign > 0).sum()),
    )


def _census_window(task) -> List[CensusResult]:
    lo, hi, k_list, scope = task
    return [_tally(block.k, scope, block) for block in _pair_blocks(lo, hi, k_list)]


def census_many(k_list: Sequence[int], scope: CensusScope, threads: int = 1,
                segment_length: Optional[int] = None) -> List[CensusResult]:
    """
    Census for several k over shared phi windows.

    Window partials are merged in window order, so the result does not depend on
    the worker count or on the window width.
    """
    k_list = list(k_list)
    for k in k_list:
        check_even_k(k)
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    tasks = [(lo, hi, tuple(k_list), scope)
             for lo, hi in _windows(scope, segment_length) if lo < hi]
    logger.info(f"Census of k={k_list} over {len(tasks)} windows ({threads} worker(s))")

    if threads == 1:
        partials = map(_census_window, tasks)
        totals = _merge(k_list, scope, partials)
    else:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            totals = _merge(k_list, scope, executor.map(_census_window, tasks))
    return totals


def _merge(k_list, scope, partials) -> List[CensusResult]:
    totals = [CensusResult(k=k, scope=scope) for k in k_list]
    for window_results in partials:
        totals = [total + part for total, part in zip(totals, window_results)]
    return totals


def census(k: int, scope: CensusScope, threads: int = 1) -> CensusResult:
    """Exact sign census of T(p) and S(p) over the pairs in scope."""
    return census_many([k], scope, threads)[0]


def _constraint_mask(block: PairBlock, cons: ConstraintSpec) -> np.ndarray:
    near = block.p - 1 + cons.tau_k
    far = block.p - 1 + (block.k - cons.tau_k)
    mask = np.ones(len(block.p), dtype=bool)
    for q in cons.q_divisors:
        mask &= near % q == 0
    if cons.r_divisor is not None:
        mask &= far % cons.r_divisor == 0
    return mask


def constrained_census(k: int, scope: CensusScope, cons: ConstraintSpec) -> CensusResult:
    """Census restricted to pairs meeting the divisibility constraints."""
    check_even_k(k)
    cons.check_against(k)
    total = CensusResult(k=k, scope=scope)
    for block in _iter_blocks([k], scope):
        total = total + _tally(k, scope, block.subset(_constraint_mask(block, cons)))
    return total


def predicted_constrained_fraction(k: int, cons: ConstraintSpec) -> float:
    """Bateman-Horn share of pairs meeting cons: prod (q-2)^-1, times 1/(r - N_f(r)) when r is set."""
    cons.check_against(k)
    fraction = 1.0
    for q in cons.q_divisors:
        fraction /= q - 2
    if cons.r_divisor is not None:
        fraction /= cons.r_divisor - n_f(cons.r_divisor, k)
    return fraction


def divisibility_census(k: int, scope: CensusScope, ell: int) -> Tuple[int, int]:
    """(pairs with 2^ell | T(p), all pairs); T(p) = 0 counts as divisible."""
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    modulus = 2 ** ell
    divisible = total = 0
    for block in _iter_blocks([k], scope):
        divisible += int((block.t % modulus == 0).sum())
        total += len(block.p)
    return divisible, total


def omega_census(k: int, scope: CensusScope, ell: int) -> Tuple[int, int]:
    """(pairs with omega(p-1) and omega(p+k-1) both >= ell+1, all pairs)"""
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    hits = total = 0
    for block, omega_low, omega_high in _iter_blocks([k], scope, with_omega=True):
        hits += int(((omega_low > ell) & (omega_high > ell)).sum())
        total += len(block.p)
    return hits, total


def mod3_violations(k: int, scope: CensusScope) -> int:
    """Pairs p >= 5 where 3 fails to divide p-1+(k-tau_k); zero whenever 3 ∤ k."""
    check_even_k(k)
    character = chi3(k)
    if character == 0:
        raise DomainError(f"mod-3 check needs 3 ∤ k, got k={k}")
    tau = k * (1 + character) // 2
    violations = 0
    for block in _iter_blocks([k], scope):
        p = block.p[block.p >= 5]
        violations += int(((p - 1 + (k - tau)) % 3 != 0).sum())
    return violations


def smooth_pair_search(k: int, search_limit: int) -> SmoothPairReport:
    """
    Pairs p <= search_limit with p-1 and p+k-1 both k-smooth.

    Only these p can have S(p) = 0, and the report lists which of them do.
    """
    check_even_k(k)
    if search_limit < 1:
        raise DomainError(f"search_limit must be positive, got {search_limit}")
    if search_limit < 3:
        return SmoothPairReport(k=k, search_limit=search_limit, candidates=[], s_zero=[])
    candidates: List[int] = []
    zeros: List[int] = []
    scope = CensusScope.up_to(search_limit)
    for lo, hi in _windows(scope):
        if lo >= hi:
            break
        smooth = smooth_mask(lo - 1, hi + k, k)
        for block in _pair_blocks(lo, hi, [k]):
            at = block.p - lo
            both = smooth[at] & smooth[at + k]
            hits = block.subset(both)
            candidates.extend(hits.p.tolist())
            zeros.extend(hits.p[hits.s_sign() == 0].tolist())
    logger.info(f"k={k}: {len(candidates)} smooth pair(s) up to {search_limit:,}, {len(zeros)} with S(p)=0")
    return SmoothPairReport(k=k, search_limit=search_limit, candidates=candidates, s_zero=zeros)


def predicted_count(k: int, x: float, c_k: float) -> float:
    """Bateman-Horn first-order prediction C_k x / (log x)^2"""
    check_even_k(k)
    if x < 3:
        raise DomainError(f"x must be >= 3, got {x}")
    if c_k <= 0:
        raise DomainError(f"C_k must be positive, got {c_k}")
    return c_k * x / math.log(x) ** 2
