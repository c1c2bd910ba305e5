"""
Acceptance suite
Regression checks against the published tables plus property checks on the census.
Each check returns a CheckResult; run_checks() collects them for the VERIFY command.
"""
from decimal import Decimal
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel

from primebias.config import config
from primebias.core import oracle
from primebias.core.bias_constants import bias_bounds, c_k, chi3
from primebias.core.pair_census import (
    CensusScope,
    census,
    census_many,
    divisibility_census,
)
from primebias.utils.formatting import round_places, round_significant
from primebias.utils.logger import get_logger

logger = get_logger(__name__)

# C_k to six significant digits, even k from 2 to 120
REFERENCE_C = {
    2: '1.32032', 4: '1.32032', 6: '2.64065', 8: '1.32032', 10: '1.76043', 12: '2.64065',
    14: '1.58439', 16: '1.32032', 18: '2.64065', 20: '1.76043', 22: '1.46703', 24: '2.64065',
    26: '1.44035', 28: '1.58439', 30: '3.52086', 32: '1.32032', 34: '1.40835', 36: '2.64065',
    38: '1.39799', 40: '1.76043', 42: '3.16878', 44: '1.46703', 46: '1.3832', 48: '2.64065',
    50: '1.76043', 52: '1.44035', 54: '2.64065', 56: '1.58439', 58: '1.36922', 60: '3.52086',
    62: '1.36585', 64: '1.32032', 66: '2.93405', 68: '1.40835', 70: '2.11252', 72: '2.64065',
    74: '1.35805', 76: '1.39799', 78: '2.88071', 80: '1.76043', 82: '1.35418', 84: '3.16878',
    86: '1.35253', 88: '1.46703', 90: '3.52086', 92: '1.3832', 94: '1.34966', 96: '2.64065',
    98: '1.58439', 100: '1.76043', 102: '2.81669', 104: '1.44035', 106: '1.34621',
    108: '2.64065', 110: '1.95604', 112: '1.58439', 114: '2.79598', 116: '1.36922',
    118: '1.34349', 120: '3.52086',
}

# k -> (Q, L, R, bound_biased, R', bound_reversed) for 3 ∤ k
REFERENCE_SKEWED = {
    2: ([5, 7, 11], 0.067139, 0.025497, 0.004594, 0.141298, 0.651516),
    8: ([5, 7, 11], 0.067139, 0.025497, 0.004594, 0.141298, 0.651516),
    14: ([11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53],
         0.113089, 0.103683, 1.56e-18, 0.061779, 0.847635),
    32: ([5, 7, 13], 0.051872, 0.027680, 0.002826, 0.130708, 0.677634),
    104: ([11, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79],
          0.122425, 0.114018, 1.71e-28, 0.035480, 0.912495),
    4: ([5, 7, 11], 0.067139, 0.025497, 0.004594, 0.141298, 0.651516),
    10: ([7, 11, 13, 17, 19, 23], 0.083182, 0.064667, 8.39e-8, 0.122703, 0.697378),
    70: ([11, 13, 17, 19, 29, 31, 37, 41, 43, 47, 53, 59, 61],
         0.102261, 0.086419, 1.81e-20, 0.115448, 0.715271),
    106: ([11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 59],
          0.111135, 0.108798, 3.52e-19, 0.036080, 0.911017),
}

# k -> (Q-, L-, R-, bound_neg, Q+, L+, R+, bound_pos) for 3 | k
REFERENCE_BALANCED = {
    6: ([5], 0.223144, 0.066917, 0.233372, [7], 0.154151, 0.110468, 0.056675),
    12: ([5], 0.223144, 0.056327, 0.249192, [5], 0.223144, 0.059640, 0.244242),
    36: ([5], 0.223144, 0.036087, 0.279427, [11, 13], 0.175353, 0.122649, 0.003035),
    90: ([11, 17], 0.155935, 0.107941, 0.002279, [7], 0.154151, 0.084596, 0.090242),
}

# Full-scale census rows over the first 20 million primes: k -> (t_neg, pair_count)
REFERENCE_FULL_CENSUS = {14: (3, 1_703_216), 70: (2_270_424, 2_270_424)}

TABLE_TOLERANCE = 1e-5
REVERSED_FLOOR = 0.6515


class CheckResult(BaseModel):
    criterion: int
    name: str
    passed: bool
    detail: str = ''

    def summary_line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.criterion:>2} {self.name}: {self.detail}"


def _close(value, reference: float) -> bool:
    return abs(float(round_places(value, 6)) - reference) <= TABLE_TOLERANCE


def _same_leading_digits(value, reference: float, digits: int = 2) -> bool:
    return value > 0 and round_significant(value, digits) == round_significant(reference, digits)


def check_constants(euler_cutoff: Optional[int] = None) -> CheckResult:
    misses = [k for k, printed in REFERENCE_C.items()
              if round_significant(c_k(k, euler_cutoff).value, 6) != Decimal(printed)]
    return CheckResult(criterion=1, name='Bateman-Horn constants', passed=not misses,
                       detail=f"{len(REFERENCE_C) - len(misses)}/{len(REFERENCE_C)} match"
                              + (f", mismatched k={misses}" if misses else ''))


def check_skewed(cutoff: Optional[int] = None) -> CheckResult:
    misses = []
    for k, (q, l_ref, r_ref, biased_ref, prime_ref, reversed_ref) in REFERENCE_SKEWED.items():
        report = bias_bounds(k, cutoff)
        ok = (report.q_set.primes == q
              and _close(report.l_k, l_ref)
              and _close(report.r_k.value, r_ref)
              and _close(report.r_k_prime.value, prime_ref)
              and _close(report.bound_reversed, reversed_ref)
              and _same_leading_digits(report.bound_biased, biased_ref))
        if not ok:
            misses.append(k)
    return CheckResult(criterion=2, name='Q sets and series, 3 ∤ k', passed=not misses,
                       detail=f"k={sorted(REFERENCE_SKEWED)}" + (f", mismatched k={misses}" if misses else ''))


def check_balanced(cutoff: Optional[int] = None) -> CheckResult:
    misses = []
    for k, (qm, lm, rm, bm, qp, lp, rp, bp) in REFERENCE_BALANCED.items():
        report = bias_bounds(k, cutoff)
        ok = (report.q_minus.primes == qm and report.q_plus.primes == qp
              and all(_close(v, ref) for v, ref in (
                  (report.l_minus, lm), (report.r_minus.value, rm), (report.bound_neg, bm),
                  (report.l_plus, lp), (report.r_plus.value, rp), (report.bound_pos, bp))))
        if not ok:
            misses.append(k)
    return CheckResult(criterion=3, name='Q+/Q- and bounds, 3 | k', passed=not misses,
                       detail=f"k={sorted(REFERENCE_BALANCED)}" + (f", mismatched k={misses}" if misses else ''))


def check_universal_bounds(cutoff: Optional[int] = None, k_max: int = 200) -> CheckResult:
    failures = []
    weakest = None
    for k in range(2, k_max + 1, 2):
        report = bias_bounds(k, cutoff)
        if chi3(k):
            if not (report.bound_biased > 0 and report.bound_reversed > REVERSED_FLOOR):
                failures.append(k)
            weakest = report.bound_reversed if weakest is None else min(weakest, report.bound_reversed)
        elif not (report.bound_neg > 0 and report.bound_pos > 0):
            failures.append(k)
    return CheckResult(criterion=4, name='Positive lower bounds', passed=not failures,
                       detail=f"smallest reversed bound {float(weakest):.6f}"
                              + (f", failing k={failures}" if failures else ''))


def check_oracle(x: int = 10 ** 4, k_list: Tuple[int, ...] = (2, 4, 6)) -> CheckResult:
    misses = []
    for k in k_list:
        result = census(k, CensusScope.up_to(x))
        expected = oracle.census_counts(k, x)
        if result.model_dump(exclude={'k', 'scope'}) != expected:
            misses.append(k)
    small = census(2, CensusScope.up_to(100))
    worked = (small.pair_count, small.t_neg, small.t_zero, small.t_pos) == (8, 1, 3, 4)
    return CheckResult(criterion=5, name='Census against brute force', passed=not misses and worked,
                       detail=f"x={x:,}, k={list(k_list)}" + (f", mismatched k={misses}" if misses else ''))


def check_sign_direction(n_primes: int = 10 ** 5) -> CheckResult:
    scope = CensusScope.first_primes(n_primes)
    wrong = []
    for result in census_many([2, 8, 4, 10], scope):
        majority = 1 if result.t_pos > result.t_neg else -1
        if majority != -chi3(result.k):
            wrong.append(result.k)
    return CheckResult(criterion=6, name='Majority sign of T is -chi3(k)', passed=not wrong,
                       detail=f"N={n_primes:,}" + (f", wrong direction for k={wrong}" if wrong else ''))


def check_comparison(n_primes: int = 10 ** 5, floor: float = 0.95) -> CheckResult:
    results = census_many([2, 4, 6], CensusScope.first_primes(n_primes))
    ratios = {r.k: r.st_agree / r.pair_count for r in results}
    return CheckResult(criterion=7, name='S and T agree in sign', passed=min(ratios.values()) >= floor,
                       detail=', '.join(f"k={k}: {v:.4f}" for k, v in ratios.items()))


# 8 divides T(p) slowly: 0.7998 of the twin pairs among the first 10^5 primes
DIVISIBILITY_FLOORS = {1: 0.9, 2: 0.9, 3: 0.75}


def check_divisibility(n_primes: int = 10 ** 5, floors: Optional[Dict[int, float]] = None) -> CheckResult:
    floors = floors or DIVISIBILITY_FLOORS
    scope = CensusScope.first_primes(n_primes)
    ratios = {}
    for ell in sorted(floors):
        divisible, total = divisibility_census(2, scope, ell)
        ratios[ell] = divisible / total
    passed = all(ratios[ell] >= floor for ell, floor in floors.items())
    return CheckResult(criterion=8, name='2^ell divides T(p)', passed=passed,
                       detail=', '.join(f"ell={ell}: {v:.4f} (floor {floors[ell]})" for ell, v in ratios.items()))


def check_full_census(threads: int = 1) -> CheckResult:
    scope = CensusScope.first_primes(config.TABLE1_FULL)
    results = census_many(sorted(REFERENCE_FULL_CENSUS), scope, threads=threads)
    got = {r.k: (r.t_neg, r.pair_count) for r in results}
    return CheckResult(criterion=9, name='Full-scale census rows', passed=got == REFERENCE_FULL_CENSUS,
                       detail=', '.join(f"k={k}: t_neg={t}, pairs={n}" for k, (t, n) in got.items()))


def check_determinism(n_primes: int = 10 ** 5, threads: int = 4) -> CheckResult:
    scope = CensusScope.first_primes(n_primes)
    k_list = [2, 4, 6]
    baseline = [r.csv_row() for r in census_many(k_list, scope)]
    runs = {
        f'threads={threads}': [r.csv_row() for r in census_many(k_list, scope, threads=threads)],
        'segment=4096': [r.csv_row() for r in census_many(k_list, scope, segment_length=4096)],
    }
    differing = [name for name, rows in runs.items() if rows != baseline]
    return CheckResult(criterion=10, name='Census independent of workers and windows',
                       passed=not differing,
                       detail='identical rows' if not differing else f"differs for {differing}")


def run_checks(cutoff: Optional[int] = None, euler_cutoff: Optional[int] = None,
               full: bool = False, threads: int = 1) -> List[CheckResult]:
    suite: Dict[str, Callable[[], CheckResult]] = {
        'constants': lambda: check_constants(euler_cutoff),
        'skewed': lambda: check_skewed(cutoff),
        'balanced': lambda: check_balanced(cutoff),
        'universal': lambda: check_universal_bounds(cutoff),
        'oracle': check_oracle,
        'direction': check_sign_direction,
        'comparison': check_comparison,
        'divisibility': check_divisibility,
        'determinism': lambda: check_determinism(threads=max(threads, 4)),
    }
    if full:
        suite['full_census'] = lambda: check_full_census(threads)
    results = []
    for name, check in suite.items():
        logger.info(f"Running check {name}")
        result = check()
        logger.info(result.summary_line())
        results.append(result)
    return sorted(results, key=lambda r: r.criterion)
