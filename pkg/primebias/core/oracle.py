"""Brute-force reference implementations: trial-division primality, gcd-counting totient"""
from fractions import Fraction
from math import gcd


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def phi(n: int) -> int:
    return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def pairs(k: int, x: int):
    return [p for p in range(2, x + 1) if is_prime(p) and is_prime(p + k)]


def sign(v) -> int:
    return (v > 0) - (v < 0)


def census_counts(k: int, x: int) -> dict:
    counts = dict(pair_count=0, t_neg=0, t_zero=0, t_pos=0,
                  s_neg=0, s_zero=0, s_pos=0, st_agree=0)
    for p in pairs(k, x):
        low, high = phi(p - 1), phi(p + k - 1)
        t = sign(low - high)
        s = sign(Fraction(low, p - 1) - Fraction(high, p + k - 1))
        counts['pair_count'] += 1
        counts[('t_neg', 't_zero', 't_pos')[t + 1]] += 1
        counts[('s_neg', 's_zero', 's_pos')[s + 1]] += 1
        counts['st_agree'] += s * t > 0
    return counts


def prime_divisors(n: int):
    found = set()
    d = 2
    while d * d <= n:
        if n % d == 0:
            found.add(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        found.add(n)
    return found
