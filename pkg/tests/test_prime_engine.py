import pytest
from pydantic import ValidationError

from primebias.config import config
from primebias.core import oracle
from primebias.core.errors import CapacityError, DomainError, EmptyRangeError
from primebias.core.prime_engine import (
    WINDOW_CAPACITY,
    Factorization,
    SieveConfig,
    factorize,
    first_n_primes,
    nth_prime,
    nth_prime_upper_bound,
    omega_window,
    phi,
    phi_window,
    prime_window,
    primes_up_to,
    smooth_mask,
)


class TestSieveConfig:
    def test_accepts_valid_extent(self):
        cfg = SieveConfig(limit=1000, segment_length=100)
        assert list(cfg.segments())[0] == (2, 102)
        assert list(cfg.segments())[-1][1] == 1001

    @pytest.mark.parametrize('limit,length', [(1, 64), (1000, 32), (100, 128)])
    def test_rejects_invalid_extent(self, limit, length):
        with pytest.raises(ValidationError):
            SieveConfig(limit=limit, segment_length=length)

    def test_covering_pads_tiny_limits(self):
        cfg = SieveConfig.covering(10)
        assert cfg.limit == 64
        assert cfg.segment_length == 64


class TestPhiWindow:
    def test_matches_gcd_count(self):
        window = phi_window(1, 600)
        assert [window[n] for n in range(1, 600)] == [oracle.phi(n) for n in range(1, 600)]

    def test_small_values(self):
        window = phi_window(1, 13)
        assert window[1] == 1
        assert window[12] == 4
        assert window[7] == 6

    def test_prime_mask(self):
        window = phi_window(1, 1000)
        found = [n for n in range(1, 1000) if window.prime_mask()[n - 1]]
        assert found == [n for n in range(1, 1000) if oracle.is_prime(n)]

    def test_offset_window_with_large_cofactors(self):
        lo = 10 ** 12
        window = phi_window(lo, lo + 200)
        assert all(window[n] == phi(n) for n in range(lo, lo + 200))

    def test_index_outside_window(self):
        with pytest.raises(IndexError):
            phi_window(10, 20)[20]

    def test_window_too_wide(self):
        with pytest.raises(CapacityError):
            phi_window(1, WINDOW_CAPACITY + 2)

    def test_empty_window(self):
        with pytest.raises(DomainError):
            phi_window(5, 5)


class TestPrimes:
    def test_segmented_matches_trial_division(self):
        primes = primes_up_to(10_000, segment_length=128)
        assert primes.tolist() == [n for n in range(10_001) if oracle.is_prime(n)]
        assert len(primes) == 1229

    def test_prime_window_interior(self):
        assert prime_window(90, 110).primes().tolist() == [97, 101, 103, 107, 109]

    def test_limit_below_two(self):
        with pytest.raises(EmptyRangeError):
            primes_up_to(1)

    def test_limit_above_capacity(self):
        with pytest.raises(CapacityError):
            primes_up_to(config.MAX_LIMIT + 1)

    @pytest.mark.parametrize('n,expected', [(1, 2), (5, 11), (6, 13), (1000, 7919), (10_000, 104_729), (100_000, 1_299_709)])
    def test_nth_prime(self, n, expected):
        assert nth_prime(n) == expected
        assert nth_prime(n, segment_length=4096) == expected

    @pytest.mark.parametrize('n', [1, 2, 5, 6, 7, 100, 10_000])
    def test_upper_bound_holds(self, n):
        assert nth_prime_upper_bound(n) >= nth_prime(n)

    def test_first_n_primes(self):
        assert first_n_primes(10).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        assert len(first_n_primes(10_000)) == 10_000

    def test_nth_prime_zero(self):
        with pytest.raises(EmptyRangeError):
            nth_prime(0)


class TestFactorization:
    def test_factorize(self):
        assert factorize(360).factors == [(2, 3), (3, 2), (5, 1)]
        assert factorize(1).factors == []
        assert factorize(97).factors == [(97, 1)]
        assert factorize(2 * 1_000_003).largest_prime == 1_000_003

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            factorize(0)

    def test_product_invariant(self):
        with pytest.raises(ValidationError):
            Factorization(n=12, factors=[(2, 1), (3, 1)])

    def test_phi(self):
        assert phi(1) == 1
        assert phi(36) == 12
        with pytest.raises(DomainError):
            phi(0)


def test_omega_window():
    omega = omega_window(1, 500)
    assert omega.tolist() == [len(oracle.prime_divisors(n)) for n in range(1, 500)]


def test_smooth_mask():
    mask = smooth_mask(1, 300, 5)
    expected = [oracle.prime_divisors(n) <= {2, 3, 5} for n in range(1, 300)]
    assert mask.tolist() == expected


@pytest.mark.parametrize('limit,expected', [(10, [2, 3, 5, 7]), (2, [2])])
def test_primes_up_to_small(limit, expected):
    assert primes_up_to(limit).tolist() == expected


def test_prime_count_to_a_million():
    assert len(primes_up_to(10 ** 6)) == 78498
    assert len(primes_up_to(10 ** 6, segment_length=10 ** 5)) == 78498


def test_first_n_primes_zero():
    with pytest.raises(EmptyRangeError):
        first_n_primes(0)


@pytest.mark.parametrize('n,factors', [
    (12, [(2, 2), (3, 1)]),
    (720720, [(2, 4), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)]),
])
def test_factorize_examples(n, factors):
    assert factorize(n).factors == factors


@pytest.mark.parametrize('n,expected', [(1, 1), (10, 4), (129600, 34560)])
def test_phi_examples(n, expected):
    assert phi(n) == expected


def test_phi_window_examples():
    assert phi_window(1, 11).values.tolist() == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    assert phi_window(2, 3).values.tolist() == [1]
    window = phi_window(10 ** 6, 10 ** 6 + 8)
    assert [window[n] for n in range(10 ** 6, 10 ** 6 + 8)] == [phi(n) for n in range(10 ** 6, 10 ** 6 + 8)]


def test_phi_window_matches_factorization_to_1e5():
    window = phi_window(1, 10 ** 5 + 1)
    assert all(window[n] == phi(n) for n in range(1, 10 ** 5 + 1))


def test_phi_window_partition():
    whole = phi_window(500, 5000).values.tolist()
    assert phi_window(500, 1234).values.tolist() + phi_window(1234, 5000).values.tolist() == whole


@pytest.mark.parametrize('m,n', [(9, 10), (7, 64), (25, 27), (101, 9900), (1001, 4096)])
def test_phi_multiplicative(m, n):
    assert phi(m) * phi(n) == phi(m * n)
