"""
Bias Constants
Bateman-Horn constants C_k, the auxiliary prime sets Q, Q+ and Q-, the L and R
quantities, and the conditional lower densities they certify.

Every truncated series or product is returned as a SeriesValue carrying a rigorous
bound on the omitted tail, and published lower bounds use the upper end of R's
enclosure so they remain valid lower bounds.
"""
import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

import mpmath
import numpy as np
from mpmath import mp
from pydantic import BaseModel, ConfigDict, field_serializer, model_validator

from primebias.config import config
from primebias.core.errors import DomainError
from primebias.core.prime_engine import factorize, is_prime, primes_up_to
from primebias.utils.formatting import decimal_string
from primebias.utils.logger import get_logger

logger = get_logger(__name__)

MIN_CUTOFF = 10 ** 3

# Primes below this are summed term by term in mpmath; the rest in float64 via fsum.
HEAD_LIMIT = 2 ** 14

# Relative rounding allowance per float64 tail term (log1p, one divide, fsum)
_FLOAT_TERM_ERROR = 4 * np.finfo(np.float64).eps


class SignMode(str, Enum):
    CHI3 = 'chi3'
    PLUS = 'plus'
    MINUS = 'minus'


class SeriesValue(BaseModel):
    """
    A truncated prime-indexed sum or product.

    kind == 'sum': the true value lies in [value, value + tail_bound].
    kind == 'product': the true value lies within value * (1 +/- tail_bound).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: mpmath.mpf
    tail_bound: mpmath.mpf
    cutoff: int
    kind: str = 'sum'

    @model_validator(mode='after')
    def _check_tail(self):
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")
        if self.kind not in ('sum', 'product'):
            raise ValueError(f"unknown series kind {self.kind!r}")
        return self

    @field_serializer('value', 'tail_bound')
    def _as_decimal(self, x):
        return decimal_string(x)

    @property
    def upper(self) -> mpmath.mpf:
        if self.kind == 'sum':
            return self.value + self.tail_bound
        return self.value * (1 + self.tail_bound)

    @property
    def lower(self) -> mpmath.mpf:
        if self.kind == 'sum':
            return self.value
        return self.value * (1 - self.tail_bound)


def check_even_k(k: int) -> None:
    if k < 2 or k % 2:
        raise DomainError(f"k must be a positive even integer, got {k}")


def chi3(k: int) -> int:
    """Nontrivial Dirichlet character modulo 3"""
    if k < 1:
        raise DomainError(f"chi3 needs k >= 1, got {k}")
    return (0, 1, -1)[k % 3]


def n_f(r: int, k: int) -> int:
    """Number of roots of t(t + k) modulo the prime r"""
    check_even_k(k)
    if not is_prime(r):
        raise DomainError(f"{r} is not prime")
    return 1 if k % r == 0 else 2


def _n_f_unchecked(r: int, k: int) -> int:
    return 1 if k % r == 0 else 2


def _prime_divisors(n: int) -> List[int]:
    return factorize(abs(n)).primes if n else []


def _avoid_number(k: int, mode: SignMode) -> int:
    """Q members may not divide this number."""
    if mode is SignMode.CHI3:
        return k * (k - chi3(k))
    if mode is SignMode.PLUS:
        return k * (k - 1)
    return k * (k + 1)


def _excluded_number(k: int, mode: SignMode) -> int:
    """R omits every prime dividing this number."""
    if mode is SignMode.CHI3:
        return k + chi3(k)
    if mode is SignMode.PLUS:
        return k + 1
    return k - 1


def _check_mode(k: int, mode: SignMode) -> None:
    check_even_k(k)
    if mode is SignMode.CHI3 and k % 3 == 0:
        raise DomainError(f"CHI3 mode needs 3 ∤ k, got k={k}")
    if mode is not SignMode.CHI3 and k % 3:
        raise DomainError(f"{mode.value.upper()} mode needs 3 | k, got k={k}")


class QSet(BaseModel):
    """The minimal auxiliary prime set Q (or Q+/Q-) for one k"""

    k: int
    sign_mode: SignMode
    primes: List[int]

    @model_validator(mode='after')
    def _check_members(self):
        _check_mode(self.k, self.sign_mode)
        avoid = _avoid_number(self.k, self.sign_mode)
        if self.primes != sorted(set(self.primes)):
            raise ValueError("Q must be strictly increasing")
        for q in self.primes:
            if q < 5 or avoid % q == 0:
                raise ValueError(f"{q} is not an admissible Q prime for k={self.k}")
        return self

    @property
    def m(self) -> int:
        return len(self.primes)


@lru_cache(maxsize=4)
def _series_primes(cutoff: int) -> np.ndarray:
    logger.info(f"Sieving series primes up to {cutoff:,}")
    return primes_up_to(cutoff)


def _split_head(primes: np.ndarray, lowest: int) -> Tuple[List[int], np.ndarray]:
    start = np.searchsorted(primes, lowest)
    split = np.searchsorted(primes, HEAD_LIMIT)
    split = max(split, start)
    return primes[start:split].tolist(), primes[split:]


def _log_ratio(r: int) -> mpmath.mpf:
    """log(1 + 1/(r - 1)) = log(r / (r - 1))"""
    return mp.log(mp.mpf(r) / (r - 1))


def _r_term(r: int, k: int) -> mpmath.mpf:
    return _log_ratio(r) / (r - _n_f_unchecked(r, k))


@lru_cache(maxsize=8)
def _r_base_sum(cutoff: int) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """
    Sum over primes 5 <= r <= cutoff of log(1 + 1/(r-1)) / (r - 2).

    Returns (value, rounding allowance of the float64 part).
    """
    with mp.workprec(config.PRECISION_BITS):
        head, tail = _split_head(_series_primes(cutoff), 5)
        head_sum = mp.fsum(_log_ratio(r) / (r - 2) for r in head)
        r = tail.astype(np.float64)
        terms = np.log1p(1.0 / (r - 1.0)) / (r - 2.0)
        tail_sum = math.fsum(terms)
        allowance = mp.mpf(tail_sum) * _FLOAT_TERM_ERROR + mp.mpf(np.finfo(np.float64).eps) * tail_sum
        return +(head_sum + mp.mpf(tail_sum)), allowance


def r_series(k: int, excluded: Iterable[int], cutoff: int) -> SeriesValue:
    """
    Sum over primes 5 <= r <= cutoff, r not in `excluded`, of
    log(1 + 1/(r-1)) / (r - N_f(r)).

    Built from the shared k-independent sum with exact corrections for the
    finitely many primes dividing k and the excluded primes.
    """
    if cutoff < MIN_CUTOFF:
        raise DomainError(f"cutoff must be >= {MIN_CUTOFF}, got {cutoff}")
    base, allowance = _r_base_sum(cutoff)
    with mp.workprec(config.PRECISION_BITS):
        value = base
        for r in _prime_divisors(k):
            if 5 <= r <= cutoff:
                value += _log_ratio(r) * (mp.mpf(1) / (r - 1) - mp.mpf(1) / (r - 2))
        for r in sorted(set(excluded)):
            if 5 <= r <= cutoff:
                value -= _r_term(r, k)
        tail = mp.mpf(1) / (cutoff - 1) + allowance
        return SeriesValue(value=+value, tail_bound=tail, cutoff=cutoff)


def r_series_direct(k: int, excluded: Iterable[int], cutoff: int) -> SeriesValue:
    """Term-by-term recomputation of r_series, used as a cross-check."""
    if cutoff < MIN_CUTOFF:
        raise DomainError(f"cutoff must be >= {MIN_CUTOFF}, got {cutoff}")
    skip = set(excluded)
    with mp.workprec(config.PRECISION_BITS):
        head, tail = _split_head(_series_primes(cutoff), 5)
        value = mp.fsum(_r_term(r, k) for r in head if r not in skip)
        keep = ~np.isin(tail, np.fromiter(skip, dtype=np.int64, count=len(skip)))
        r = tail[keep]
        divisor = np.where(k % r == 0, r - 1, r - 2).astype(np.float64)
        terms = np.log1p(1.0 / (r.astype(np.float64) - 1.0)) / divisor
        tail_sum = math.fsum(terms)
        allowance = mp.mpf(tail_sum) * _FLOAT_TERM_ERROR * 2
        return SeriesValue(
            value=+(value + mp.mpf(tail_sum)),
            tail_bound=mp.mpf(1) / (cutoff - 1) + allowance,
            cutoff=cutoff,
        )


@lru_cache(maxsize=4)
def euler_product_c2(cutoff: int) -> SeriesValue:
    """
    C_2 = 2 * prod_{3 <= p <= cutoff} (1 - 1/(p-1)^2).

    |log(1 - 1/(p-1)^2)| <= 1/(p(p-2)) and the sum of that over odd n > cutoff
    telescopes to at most 1/(2(cutoff-1)), the reported relative tail.
    """
    if cutoff < MIN_CUTOFF:
        raise DomainError(f"cutoff must be >= {MIN_CUTOFF}, got {cutoff}")
    with mp.workprec(config.PRECISION_BITS):
        head, tail = _split_head(_series_primes(cutoff), 3)
        head_log = mp.fsum(mp.log1p(-1 / mp.mpf(p - 1) ** 2) for p in head)
        p = tail.astype(np.float64)
        tail_log = math.fsum(np.log1p(-1.0 / (p - 1.0) ** 2))
        allowance = abs(mp.mpf(tail_log)) * _FLOAT_TERM_ERROR
        value = 2 * mp.exp(head_log + mp.mpf(tail_log))
        tail_bound = mp.mpf(1) / (2 * (cutoff - 1)) + allowance
        logger.info(f"C_2 product over primes <= {cutoff:,}: {decimal_string(value)}")
        return SeriesValue(value=+value, tail_bound=tail_bound, cutoff=cutoff, kind='product')


def c_k(k: int, cutoff: Optional[int] = None) -> SeriesValue:
    """Bateman-Horn constant for (t, t + k): C_2 * prod_{p | k, p odd} (p-1)/(p-2)."""
    check_even_k(k)
    c2 = euler_product_c2(cutoff or config.CUTOFF_EULER)
    factor = Fraction(1)
    for p in _prime_divisors(k):
        if p > 2:
            factor *= Fraction(p - 1, p - 2)
    with mp.workprec(config.PRECISION_BITS):
        value = c2.value * factor.numerator / factor.denominator
    return SeriesValue(value=value, tail_bound=c2.tail_bound, cutoff=c2.cutoff, kind='product')


def _l_product(primes: Iterable[int], mode: SignMode) -> Fraction:
    product = Fraction(2, 3) if mode is SignMode.CHI3 else Fraction(1)
    for q in primes:
        product *= Fraction(q, q - 1)
    return product


def _log_fraction(x: Fraction) -> mpmath.mpf:
    with mp.workprec(config.PRECISION_BITS):
        return mp.log(mp.mpf(x.numerator) / x.denominator)


def l_k(q: QSet) -> mpmath.mpf:
    """log of (2/3 in CHI3 mode) * prod (1 + 1/(q-1)), one log of an exact rational"""
    return _log_fraction(_l_product(q.primes, q.sign_mode))


def _candidates(avoid: int) -> Iterable[int]:
    bound = 1024
    start = 5
    while True:
        for q in primes_up_to(bound).tolist():
            if q >= start and avoid % q:
                yield q
        start = bound + 1
        bound *= 2


def q_set(k: int, sign_mode: SignMode = SignMode.CHI3, cutoff: Optional[int] = None) -> QSet:
    """
    Smallest prefix of the admissible primes with L > R.

    R is compared through its upper enclosure; each newly admitted q is
    subtracted from R exactly rather than re-summing the series.
    """
    _check_mode(k, sign_mode)
    cutoff = cutoff or config.CUTOFF_R
    avoid = _avoid_number(k, sign_mode)
    excluded = set(_prime_divisors(_excluded_number(k, sign_mode)))
    series = r_series(k, excluded, cutoff)
    remaining = series.value
    chosen: List[int] = []
    with mp.workprec(config.PRECISION_BITS):
        for q in _candidates(avoid):
            chosen.append(q)
            if q not in excluded and q <= cutoff:
                remaining -= _r_term(q, k)
            l_value = _log_fraction(_l_product(chosen, sign_mode))
            if l_value > remaining + series.tail_bound:
                break
    if config.DEBUG:
        direct = r_series_direct(k, excluded | set(chosen), cutoff)
        if abs(direct.value - remaining) > mp.mpf(2) ** -60:
            logger.warning(f"R bookkeeping drift for k={k}: {direct.value} vs {remaining}")
    logger.debug(f"Q for k={k} ({sign_mode.value}): {chosen}")
    return QSet(k=k, sign_mode=sign_mode, primes=chosen)


def r_k(k: int, q: QSet, cutoff: Optional[int] = None) -> SeriesValue:
    """R_k (CHI3) or R_k^+/- (PLUS/MINUS): the series with Q and the mode's divisors removed"""
    if q.k != k:
        raise DomainError(f"QSet was built for k={q.k}, not k={k}")
    _check_mode(k, q.sign_mode)
    excluded = set(_prime_divisors(_excluded_number(k, q.sign_mode))) | set(q.primes)
    return r_series(k, excluded, cutoff or config.CUTOFF_R)


def r_k_prime(k: int, cutoff: Optional[int] = None) -> SeriesValue:
    """R_k': the series over r >= 5 with r ∤ (k - chi3(k))"""
    check_even_k(k)
    if k % 3 == 0:
        raise DomainError(f"R_k' is only defined for 3 ∤ k, got k={k}")
    excluded = _prime_divisors(k - chi3(k))
    return r_series(k, excluded, cutoff or config.CUTOFF_R)


def density_bound(q: QSet, l_value: mpmath.mpf, r_value: SeriesValue) -> mpmath.mpf:
    """prod (q-2)^-1 * (1 - R/L), with R at the top of its enclosure"""
    with mp.workprec(config.PRECISION_BITS):
        weight = mp.mpf(1)
        for prime in q.primes:
            weight /= prime - 2
        return weight * (1 - r_value.upper / l_value)


class BiasReport(BaseModel):
    """
    Conditional lower densities for one k.

    3 ∤ k fills the q_set/l_k/r_k/r_k_prime/bound_biased/bound_reversed branch,
    3 | k fills the +/- branch.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int
    chi3: int
    c_k: SeriesValue

    q_set: Optional[QSet] = None
    l_k: Optional[mpmath.mpf] = None
    r_k: Optional[SeriesValue] = None
    r_k_prime: Optional[SeriesValue] = None
    bound_biased: Optional[mpmath.mpf] = None
    bound_reversed: Optional[mpmath.mpf] = None
    biased_sign: Optional[int] = None
    reversed_sign: Optional[int] = None

    q_minus: Optional[QSet] = None
    q_plus: Optional[QSet] = None
    l_minus: Optional[mpmath.mpf] = None
    l_plus: Optional[mpmath.mpf] = None
    r_minus: Optional[SeriesValue] = None
    r_plus: Optional[SeriesValue] = None
    bound_neg: Optional[mpmath.mpf] = None
    bound_pos: Optional[mpmath.mpf] = None

    @model_validator(mode='after')
    def _check_branch(self):
        skewed = self.q_set is not None
        balanced = self.q_minus is not None
        if skewed == balanced:
            raise ValueError("exactly one of the chi3 or +/- branches must be filled")
        if skewed != (self.chi3 != 0):
            raise ValueError(f"chi3={self.chi3} routed to the wrong branch")
        return self

    @field_serializer(
        'l_k', 'bound_biased', 'bound_reversed', 'l_minus', 'l_plus', 'bound_neg', 'bound_pos'
    )
    def _as_decimal(self, x):
        return None if x is None else decimal_string(x)


def bias_bounds(k: int, cutoff: Optional[int] = None, euler_cutoff: Optional[int] = None) -> BiasReport:
    """Full report for one k: biased and reversed bounds when 3 ∤ k, the +/- pair when 3 | k."""
    check_even_k(k)
    cutoff = cutoff or config.CUTOFF_R
    character = chi3(k)
    constant = c_k(k, euler_cutoff)
    if character:
        q = q_set(k, SignMode.CHI3, cutoff)
        l_value = l_k(q)
        r_value = r_k(k, q, cutoff)
        r_prime = r_k_prime(k, cutoff)
        with mp.workprec(config.PRECISION_BITS):
            reversed_bound = 1 - r_prime.upper / mp.log(mp.mpf(3) / 2)
        return BiasReport(
            k=k,
            chi3=character,
            c_k=constant,
            q_set=q,
            l_k=l_value,
            r_k=r_value,
            r_k_prime=r_prime,
            bound_biased=density_bound(q, l_value, r_value),
            bound_reversed=reversed_bound,
            biased_sign=character,
            reversed_sign=-character,
        )

    q_minus = q_set(k, SignMode.MINUS, cutoff)
    q_plus = q_set(k, SignMode.PLUS, cutoff)
    l_minus, l_plus = l_k(q_minus), l_k(q_plus)
    r_minus, r_plus = r_k(k, q_minus, cutoff), r_k(k, q_plus, cutoff)
    return BiasReport(
        k=k,
        chi3=0,
        c_k=constant,
        q_minus=q_minus,
        q_plus=q_plus,
        l_minus=l_minus,
        l_plus=l_plus,
        r_minus=r_minus,
        r_plus=r_plus,
        bound_neg=density_bound(q_minus, l_minus, r_minus),
        bound_pos=density_bound(q_plus, l_plus, r_plus),
    )
