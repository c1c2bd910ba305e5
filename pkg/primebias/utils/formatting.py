"""Locale-independent number formatting"""
from decimal import ROUND_HALF_EVEN, Decimal

import mpmath

REPORT_DIGITS = 9


def decimal_string(x, digits: int = REPORT_DIGITS) -> str:
    """x as a decimal string with `digits` significant digits"""
    return mpmath.nstr(mpmath.mpf(x), digits, min_fixed=-4, max_fixed=12)


def _as_decimal(x, digits: int) -> Decimal:
    # Decimal, int and str inputs are already exact
    if isinstance(x, (Decimal, int, str)):
        return Decimal(x)
    return Decimal(mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False, min_fixed=-40, max_fixed=40))


def round_significant(x, digits: int) -> Decimal:
    """Round half-even to `digits` significant digits"""
    value = _as_decimal(x, digits + 10)
    if value == 0:
        return value
    exponent = value.adjusted() - digits + 1
    return value.quantize(Decimal(1).scaleb(exponent), rounding=ROUND_HALF_EVEN)


def round_places(x, places: int) -> Decimal:
    """Round half-even to `places` digits after the decimal point"""
    return _as_decimal(x, 30).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)


def scientific(value: Decimal, digits: int) -> str:
    """`value` in C-style e-notation with a two-digit exponent, e.g. 8.39e-08"""
    exponent = value.adjusted()
    mantissa = value.scaleb(-exponent)
    sign = '-' if exponent < 0 else '+'
    return f"{mantissa:.{digits - 1}f}e{sign}{abs(exponent):02d}"


def table_number(x) -> str:
    """Table cell: six decimals, or three significant digits in scientific form below 1e-3"""
    if x != 0 and abs(mpmath.mpf(x)) < mpmath.mpf('0.001'):
        return scientific(round_significant(x, 3), 3)
    return f"{round_places(x, 6):f}"
