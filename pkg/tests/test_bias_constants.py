from decimal import Decimal

import mpmath
import pytest
from pydantic import ValidationError

from primebias.core.bias_constants import (
    QSet,
    SignMode,
    bias_bounds,
    c_k,
    chi3,
    euler_product_c2,
    l_k,
    n_f,
    q_set,
    r_k,
    r_k_prime,
    r_series,
    r_series_direct,
)
from primebias.core.errors import DomainError
from primebias.utils.formatting import round_significant

from tests.conftest import EULER_CUTOFF, R_CUTOFF


def near(value, expected, tol=1e-5):
    return abs(float(value) - expected) <= tol


@pytest.mark.parametrize('k,expected', [(2, -1), (6, 0), (4, 1), (1, 1)])
def test_chi3(k, expected):
    assert chi3(k) == expected


@pytest.mark.parametrize('r,k,expected', [(2, 2, 1), (5, 2, 2), (7, 14, 1)])
def test_n_f(r, k, expected):
    assert n_f(r, k) == expected


def test_n_f_rejects_composite():
    with pytest.raises(DomainError):
        n_f(9, 2)


class TestConstants:
    @pytest.mark.parametrize('k,printed', [(2, '1.32032'), (30, '3.52086'), (98, '1.58439'), (46, '1.3832')])
    def test_table_values(self, k, printed):
        assert round_significant(c_k(k, EULER_CUTOFF).value, 6) == Decimal(printed)

    def test_depends_only_on_prime_support(self):
        twos = {c_k(k, EULER_CUTOFF).value for k in (2, 4, 8, 16, 32, 64)}
        sixes = {c_k(k, EULER_CUTOFF).value for k in (6, 12, 18, 24)}
        assert len(twos) == 1
        assert len(sixes) == 1

    def test_twin_prime_constant(self):
        c2 = euler_product_c2(EULER_CUTOFF)
        assert c2.kind == 'product'
        assert near(c2.value / 2, 0.660162, 1e-6)
        assert c2.tail_bound < mpmath.mpf('1e-7')
        assert c2.lower < c2.value < c2.upper

    def test_rejects_odd_k(self):
        with pytest.raises(DomainError):
            c_k(3, EULER_CUTOFF)

    def test_rejects_small_cutoff(self):
        with pytest.raises(DomainError):
            euler_product_c2(100)


class TestQSet:
    @pytest.mark.parametrize('k,mode,expected', [
        (2, SignMode.CHI3, [5, 7, 11]),
        (32, SignMode.CHI3, [5, 7, 13]),
        (6, SignMode.MINUS, [5]),
        (6, SignMode.PLUS, [7]),
        (70, SignMode.CHI3, [11, 13, 17, 19, 29, 31, 37, 41, 43, 47, 53, 59, 61]),
        (90, SignMode.MINUS, [11, 17]),
        (90, SignMode.PLUS, [7]),
    ])
    def test_table_sets(self, k, mode, expected):
        assert q_set(k, mode, R_CUTOFF).primes == expected

    @pytest.mark.parametrize('k,mode', [(6, SignMode.CHI3), (2, SignMode.PLUS), (4, SignMode.MINUS)])
    def test_mode_mismatch(self, k, mode):
        with pytest.raises(DomainError):
            q_set(k, mode, R_CUTOFF)

    @pytest.mark.parametrize('k', [2, 10, 14, 36, 70, 104])
    def test_minimal(self, k):
        mode = SignMode.CHI3 if chi3(k) else SignMode.MINUS
        q = q_set(k, mode, R_CUTOFF)
        assert l_k(q) > r_k(k, q, R_CUTOFF).upper
        if q.m >= 2:
            shorter = QSet(k=k, sign_mode=mode, primes=q.primes[:-1])
            assert l_k(shorter) <= r_k(k, shorter, R_CUTOFF).upper

    def test_rejects_inadmissible_prime(self):
        # 11 divides 32 - chi3(32) = 33
        with pytest.raises(ValidationError):
            QSet(k=32, sign_mode=SignMode.CHI3, primes=[5, 7, 11])


class TestSeries:
    def test_l_values(self):
        assert near(l_k(QSet(k=2, sign_mode=SignMode.CHI3, primes=[5, 7, 11])), 0.067139, 1e-6)
        assert near(l_k(QSet(k=6, sign_mode=SignMode.MINUS, primes=[5])), 0.223144, 1e-6)
        assert near(l_k(QSet(k=6, sign_mode=SignMode.PLUS, primes=[7])), 0.154151, 1e-6)

    @pytest.mark.parametrize('k,mode,expected', [
        (2, SignMode.CHI3, 0.025497),
        (14, SignMode.CHI3, 0.103683),
        (6, SignMode.MINUS, 0.066917),
        (6, SignMode.PLUS, 0.110468),
    ])
    def test_r_values(self, k, mode, expected):
        q = q_set(k, mode, R_CUTOFF)
        assert near(r_k(k, q, R_CUTOFF).value, expected)

    @pytest.mark.parametrize('k,expected', [(2, 0.141298), (14, 0.061779)])
    def test_r_prime_values(self, k, expected):
        assert near(r_k_prime(k, R_CUTOFF).value, expected)

    @pytest.mark.parametrize('k', [2, 4, 10, 14, 22, 100])
    def test_r_prime_below_unrestricted_sum(self, k):
        assert r_k_prime(k, R_CUTOFF).value < 0.1412982

    def test_r_prime_rejects_multiple_of_three(self):
        with pytest.raises(DomainError):
            r_k_prime(6, R_CUTOFF)

    def test_enclosure_tightens(self):
        coarse = r_series(14, [7], 10 ** 4)
        fine = r_series(14, [7], R_CUTOFF)
        assert coarse.value <= fine.value <= coarse.upper

    @pytest.mark.parametrize('k,excluded', [(2, []), (14, [5, 11, 13]), (70, [23, 11])])
    def test_corrections_match_direct_sum(self, k, excluded):
        quick = r_series(k, excluded, 10 ** 5)
        direct = r_series_direct(k, excluded, 10 ** 5)
        assert abs(quick.value - direct.value) < mpmath.mpf('1e-12')

    def test_serializes_as_decimal_strings(self):
        dumped = r_k_prime(2, R_CUTOFF).model_dump(mode='json')
        assert dumped['value'].startswith('0.141298')
        assert dumped['cutoff'] == R_CUTOFF


class TestBiasBounds:
    def test_twins(self):
        report = bias_bounds(2, R_CUTOFF, EULER_CUTOFF)
        assert report.chi3 == -1
        assert report.biased_sign == -1
        assert report.reversed_sign == 1
        assert near(report.bound_biased, 0.004594)
        assert near(report.bound_reversed, 0.651516)
        assert report.q_minus is None

    def test_multiple_of_three(self):
        report = bias_bounds(6, R_CUTOFF, EULER_CUTOFF)
        assert report.q_set is None
        assert near(report.bound_neg, 0.233372)
        assert near(report.bound_pos, 0.056675)

    @pytest.mark.parametrize('k,printed', [(70, 1.81e-20), (14, 1.56e-18)])
    def test_tiny_bounds(self, k, printed):
        report = bias_bounds(k, R_CUTOFF, EULER_CUTOFF)
        assert round_significant(report.bound_biased, 2) == round_significant(printed, 2)

    def test_json_branch(self):
        dumped = bias_bounds(4, R_CUTOFF, EULER_CUTOFF).model_dump(mode='json', exclude_none=True)
        assert dumped['q_set']['primes'] == [5, 7, 11]
        assert 'q_plus' not in dumped
        assert dumped['bound_reversed'].startswith('0.6515')
