import pytest

from primebias.core import verification
from primebias.core.verification import CheckResult

from tests.conftest import EULER_CUTOFF, R_CUTOFF


def test_summary_line():
    line = CheckResult(criterion=7, name='S and T agree in sign', passed=True, detail='k=2: 0.99').summary_line()
    assert line == '[PASS]  7 S and T agree in sign: k=2: 0.99'


def test_oracle_check_small():
    assert verification.check_oracle(x=2000).passed


def test_constants_check(desk_cutoffs):
    result = verification.check_constants(EULER_CUTOFF)
    assert result.passed, result.detail


def test_balanced_check(desk_cutoffs):
    result = verification.check_balanced(R_CUTOFF)
    assert result.passed, result.detail


def test_property_checks_at_desk_scale():
    for result in (verification.check_sign_direction(),
                   verification.check_comparison(),
                   verification.check_divisibility()):
        assert result.passed, result.summary_line()


def test_divisibility_reports_every_ell():
    result = verification.check_divisibility()
    assert 'ell=3: 0.7998' in result.detail


def test_divisibility_fails_below_floor():
    result = verification.check_divisibility(n_primes=5000, floors={3: 0.99})
    assert not result.passed
    assert result.detail.startswith('ell=3:')


def test_determinism_check():
    assert verification.check_determinism(n_primes=5000, threads=2).passed


@pytest.mark.slow
def test_full_suite():
    results = verification.run_checks()
    assert [r.criterion for r in results] == [1, 2, 3, 4, 5, 6, 7, 8, 10]
    assert all(r.passed for r in results), [r.summary_line() for r in results if not r.passed]


@pytest.mark.slow
def test_full_scale_census():
    assert verification.check_full_census(threads=4).passed
