from decimal import Decimal

import mpmath
import pytest

from primebias.utils.formatting import (
    decimal_string,
    round_places,
    round_significant,
    scientific,
    table_number,
)


def test_decimal_string_nine_digits():
    assert decimal_string(mpmath.log(mpmath.mpf(77) / 72)).startswith('0.067139')
    assert decimal_string(mpmath.mpf('1.81e-20')) == '1.81e-20'


def test_round_significant_half_even():
    assert round_significant('1.325', 3) == Decimal('1.32')
    assert round_significant('1.335', 3) == Decimal('1.34')
    assert round_significant(0, 3) == 0


def test_round_places():
    assert round_places(Decimal('0.2331225'), 6) == Decimal('0.233122')
    assert round_places(Decimal('0.2331235'), 6) == Decimal('0.233124')
    # the nearest double to 0.2331225 lies just above the tie
    assert round_places(mpmath.mpf('0.2331225'), 6) == Decimal('0.233123')
    assert str(round_places(mpmath.mpf('0.651516'), 6)) == '0.651516'


@pytest.mark.parametrize('value,text', [
    (Decimal('8.39E-8'), '8.39e-08'),
    (Decimal('1.81E-20'), '1.81e-20'),
    (Decimal('1.00E-4'), '1.00e-04'),
    (Decimal('-2.50E+3'), '-2.50e+03'),
])
def test_scientific_two_digit_exponent(value, text):
    assert scientific(value, 3) == text


@pytest.mark.parametrize('value,text', [
    ('0.0045944', '0.004594'),
    ('0.233372', '0.233372'),
    ('1.5612e-18', '1.56e-18'),
    ('8.3861e-8', '8.39e-08'),
    (0, '0.000000'),
])
def test_table_number(value, text):
    assert table_number(mpmath.mpf(value)) == text
