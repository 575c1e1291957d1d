"""Integer helpers: directed roots of rationals, primality, small sieves.

Everything here is exact; floats never appear.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0 (k >= 1)."""
    if n < 0:
        raise DomainError("iroot of negative")
    if k == 1 or n in (0, 1):
        return n
    if k == 2:
        return math.isqrt(n)
    # Newton on integers; start above the root.
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    return x


def is_perfect_power(n: int, k: int) -> tuple[bool, int]:
    r = iroot(n, k)
    return (r**k == n, r)


def sqrt_frac_floor(x: Fraction) -> Fraction:
    """Largest integer multiple of 1/den bounding sqrt(x) from below is not
    needed; this returns floor(sqrt(x)) as an integer-valued Fraction."""
    if x < 0:
        raise DomainError("sqrt of negative")
    # floor(sqrt(a/b)) = isqrt(a*b) // b
    a, b = x.numerator, x.denominator
    return Fraction(math.isqrt(a * b) // b)


def sqrt_frac_bounds(x: Fraction, scale: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(x) <= hi with hi - lo <= 2/scale; exact when x is
    a perfect rational square."""
    if x < 0:
        raise DomainError("sqrt of negative")
    if x == 0:
        return Fraction(0), Fraction(0)
    a, b = x.numerator, x.denominator
    # sqrt(a/b) = sqrt(a*b)/b; bound sqrt(a*b) at resolution 1/scale.
    t = a * b * scale * scale
    r = math.isqrt(t)
    if r * r == t:
        v = Fraction(r, b * scale)
        return v, v
    return Fraction(r, b * scale), Fraction(r + 1, b * scale)


def nth_root_frac_bounds(x: Fraction, k: int, scale: int) -> tuple[Fraction, Fraction]:
    """Rational bounds on x**(1/k) for x >= 0, width <= 2/scale; exact for
    perfect k-th powers."""
    if x < 0:
        raise DomainError("root of negative")
    if k < 1:
        raise DomainError("root order")
    if x == 0:
        return Fraction(0), Fraction(0)
    a, b = x.numerator, x.denominator
    # x^(1/k) = (a b^{k-1})^(1/k) / b
    t = a * b ** (k - 1) * scale**k
    r = iroot(t, k)
    if r**k == t:
        v = Fraction(r, b * scale)
        return v, v
    return Fraction(r, b * scale), Fraction(r + 1, b * scale)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic for n < 3.3e24 (fixed Miller-Rabin base set), which
    covers every desk-scale input by a wide margin."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]
