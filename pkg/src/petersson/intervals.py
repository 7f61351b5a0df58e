"""Rational interval arithmetic for the sign and window decisions.

Everything that has to be *decided* (box membership, totally-positive
tests, the open weight window) is decided on intervals with exact
Fraction endpoints.  Square roots of rationals are enclosed by integer
Newton iteration, pi by a Machin-type series with an explicit alternating
tail bound, so no floating point enters any decision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def isqrt_floor(n: int) -> int:
    return math.isqrt(n)


def iroot_floor(n: int, x: int) -> int:
    """floor(x ** (1/n)) for nonnegative integer x, integer Newton."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return 0
    if n == 1:
        return x
    if n == 2:
        return math.isqrt(x)
    r = 1 << (x.bit_length() // n + 1)
    while True:
        t = ((n - 1) * r + x // r ** (n - 1)) // n
        if t >= r:
            break
        r = t
    while r ** n > x:
        r -= 1
    return r


def sqrt_lower(q: Fraction, bits: int) -> Fraction:
    """Rational lower bound on sqrt(q), q >= 0, within 2^-bits relative."""
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    scale = 1 << bits
    # floor(sqrt(num/den) * scale) = floor(sqrt(num * den * scale^2) / den)
    return Fraction(math.isqrt(num * den * scale * scale), den * scale)


def sqrt_upper(q: Fraction, bits: int) -> Fraction:
    lo = sqrt_lower(q, bits)
    hi = lo + Fraction(1, (1 << bits) * q.denominator)
    # Tighten: ensure hi^2 >= q (the +1 ulp always suffices for floor sqrt).
    while hi * hi < q:
        hi += Fraction(1, 1 << bits)
    return hi


class RatInterval:
    """Closed interval [lo, hi] with Fraction endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @classmethod
    def exact(cls, q) -> "RatInterval":
        return cls(q, q)

    def __repr__(self):
        return f"RatInterval({self.lo}, {self.hi})"

    def __add__(self, other):
        other = _coerce(other)
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(cands), max(cands))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval straddles zero")
        inv = RatInterval(1 / other.hi, 1 / other.lo)
        return self * inv

    def sqrt(self, bits: int = 120) -> "RatInterval":
        if self.lo < 0:
            raise ValueError("sqrt of interval with negative part")
        return RatInterval(sqrt_lower(self.lo, bits), sqrt_upper(self.hi, bits))

    def width(self) -> Fraction:
        return self.hi - self.lo

    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        q = Fraction(q)
        return self.lo <= q <= self.hi

    def strictly_less_than(self, other) -> bool:
        return self.hi < _coerce(other).lo

    def strictly_greater_than(self, other) -> bool:
        return self.lo > _coerce(other).hi

    def __float__(self):
        return float(self.mid())


def _coerce(x) -> RatInterval:
    if isinstance(x, RatInterval):
        return x
    return RatInterval.exact(Fraction(x))


def _machin_atan_inv(x: int, terms: int) -> RatInterval:
    """Enclosure of arctan(1/x) by the alternating Taylor series."""
    s = Fraction(0)
    sign = 1
    for k in range(terms):
        s += Fraction(sign, (2 * k + 1) * x ** (2 * k + 1))
        sign = -sign
    tail = Fraction(1, (2 * terms + 1) * x ** (2 * terms + 1))
    # Alternating with decreasing terms: truth lies within [s - tail, s + tail].
    return RatInterval(s - tail, s + tail)


@lru_cache(maxsize=None)
def pi_interval(bits: int = 400) -> RatInterval:
    """Enclosure of pi via Machin: pi = 16 atan(1/5) - 4 atan(1/239)."""
    # 5^(2k+1) controls the error; pick enough terms for the requested bits.
    t5 = bits // 4 + 8
    t239 = bits // 15 + 6
    a5 = _machin_atan_inv(5, t5)
    a239 = _machin_atan_inv(239, t239)
    return a5 * 16 - a239 * 4


def cbrt_interval(n: int, bits: int = 120) -> RatInterval:
    """Enclosure of n ** (1/3) for a nonnegative integer n."""
    if n < 0:
        raise ValueError("negative radicand")
    scale = 1 << bits
    lo = iroot_floor(3, n * scale ** 3)
    return RatInterval(Fraction(lo, scale), Fraction(lo + 1, scale))
