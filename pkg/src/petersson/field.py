"""Exact arithmetic in Q and real quadratic fields Q(sqrt(d)).

Elements are stored on the integral basis {1, w} with w = sqrt(d) for
d = 2,3 mod 4 and w = (1+sqrt(d))/2 for d = 1 mod 4, so integrality is a
coordinate test and trace/norm are exact rationals.  Real embeddings are
returned as rational enclosures; every sign decision (totally positive,
box membership, unit reduction) is made by exact comparison against
sqrt(d), never by floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .intervals import RatInterval, sqrt_lower, sqrt_upper


class FieldError(ValueError):
    pass


def _is_squarefree(d: int) -> bool:
    if d % 4 == 0:
        return False
    p = 3
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 2
    return True


@dataclass(frozen=True)
class FieldElement:
    """a + b*w over the integral basis of the owning field."""

    a: Fraction
    b: Fraction
    field: "TotallyRealField"

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.field.r == 1 and self.b != 0:
            raise FieldError("rational field element with nonzero w part")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.a + other.a, self.b + other.b, self.field)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.a, -self.b, self.field)

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return self.field.coerce(other) + (-self)

    def __mul__(self, other):
        other = self.field.coerce(other)
        t, q = self.field.w_trace, self.field.w_norm_neg
        a, b, c, d = self.a, self.b, other.a, other.b
        # (a + bw)(c + dw) with w^2 = t*w + q
        return FieldElement(a * c + b * d * q, a * d + b * c + b * d * t, self.field)

    __rmul__ = __mul__

    def conj(self) -> "FieldElement":
        if self.field.r == 1:
            return self
        t = self.field.w_trace
        return FieldElement(self.a + self.b * t, -self.b, self.field)

    def signed_norm(self) -> Fraction:
        """N'(x): the product of the embeddings, sign included."""
        if self.field.r == 1:
            return self.a
        t, q = self.field.w_trace, self.field.w_norm_neg
        return self.a * self.a + t * self.a * self.b - q * self.b * self.b

    def trace(self) -> Fraction:
        if self.field.r == 1:
            return self.a
        return 2 * self.a + self.field.w_trace * self.b

    def norm(self) -> Fraction:
        """Nm(x) = |N'(x)| as used for ideals."""
        return abs(self.signed_norm())

    def __truediv__(self, other):
        other = self.field.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero field element")
        if self.field.r == 1:
            return FieldElement(self.a / other.a, 0, self.field)
        n = other.signed_norm()
        num = self * other.conj()
        return FieldElement(num.a / n, num.b / n, self.field)

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.field.one() / self ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        try:
            other = self.field.coerce(other)
        except (FieldError, TypeError, ValueError):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.field.key == other.field.key

    def __hash__(self):
        return hash((self.a, self.b, self.field.key))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_rational(self) -> bool:
        return self.b == 0

    # -- embeddings and signs -----------------------------------------------

    def embedding_sign(self, j: int) -> int:
        """Exact sign of sigma_j(x); j is 1-based."""
        return self.field.sign_of(self.a, self.b, j)

    def is_totally_positive(self) -> bool:
        return all(self.embedding_sign(j) > 0 for j in range(1, self.field.r + 1))

    def embed(self, j: int, rel_bits: int = 60) -> RatInterval:
        return self.field.embed(self, j, rel_bits)

    def embed_float(self, j: int) -> float:
        return float(self.embed(j, rel_bits=60).mid())

    def __repr__(self):
        if self.field.r == 1 or self.b == 0:
            return f"{self.a}"
        return f"{self.a}+{self.b}*w" if self.b > 0 else f"{self.a}{self.b}*w"


@dataclass(frozen=True)
class UnitData:
    units: tuple          # representatives of O^x / (O^x)^2
    totally_positive: tuple   # the subset in F^+


class TotallyRealField:
    """Q (r=1) or Q(sqrt(d)) (r=2) with its unit and different data."""

    def __init__(self, r: int, d: Optional[int] = None):
        if r not in (1, 2):
            raise FieldError("degree must be 1 or 2")
        if r == 1:
            if d is not None and d != 1:
                raise FieldError("rational field takes no radicand")
            self.r, self.d = 1, None
            self.w_trace, self.w_norm_neg = 0, 0
            self.disc = 1
        else:
            if d is None or d < 2 or not _is_squarefree(d):
                raise FieldError(f"radicand must be squarefree >= 2, got {d}")
            self.r, self.d = 2, d
            if d % 4 == 1:
                # w = (1 + sqrt d)/2, w^2 = w + (d-1)/4
                self.w_trace, self.w_norm_neg = 1, (d - 1) // 4
                self.disc = d
            else:
                # w = sqrt d, w^2 = d
                self.w_trace, self.w_norm_neg = 0, d
                self.disc = 4 * d
        self.key = (self.r, self.d)
        self.eps: Optional[FieldElement] = None
        self.eps_norm: Optional[int] = None
        self.d_gen: FieldElement = self.one()
        self.d_gen_totally_positive = True
        if self.r == 2:
            self.eps = self._fundamental_unit()
            self.eps_norm = int(self.eps.signed_norm())
            self.d_gen, self.d_gen_totally_positive = self._different_generator()

    # -- constructors ---------------------------------------------------------

    def element(self, a, b=0) -> FieldElement:
        return FieldElement(Fraction(a), Fraction(b), self)

    def one(self) -> FieldElement:
        return self.element(1)

    def zero(self) -> FieldElement:
        return self.element(0)

    def w(self) -> FieldElement:
        if self.r == 1:
            raise FieldError("rational field has no w")
        return self.element(0, 1)

    def sqrt_d_element(self) -> FieldElement:
        """The element sqrt(d) itself (2w - 1 when d = 1 mod 4)."""
        if self.r == 1:
            raise FieldError("rational field has no sqrt(d)")
        if self.d % 4 == 1:
            return self.element(-1, 2)
        return self.element(0, 1)

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field.key != self.key:
                raise FieldError("element from a different field")
            return x
        if isinstance(x, (int, Fraction)):
            return self.element(x)
        raise FieldError(f"cannot coerce {x!r}")

    def __repr__(self):
        return "Q" if self.r == 1 else f"Q(sqrt({self.d}))"

    def __eq__(self, other):
        return isinstance(other, TotallyRealField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    # -- exact sign machinery -------------------------------------------------

    def sign_of(self, a: Fraction, b: Fraction, j: int) -> int:
        """Exact sign of a + b*sigma_j(w) by rational comparison with sqrt d."""
        if not 1 <= j <= self.r:
            raise FieldError(f"embedding index {j} out of range")
        if self.r == 1 or b == 0:
            return (a > 0) - (a < 0)
        # sigma_j(w) = (t +/- sqrt d)/s with s = 1 or 2
        if self.d % 4 == 1:
            # a + b(1 +/- sqrt d)/2 = (2a + b +/- b sqrt d)/2
            A, B = 2 * a + b, b
        else:
            A, B = a, b
        if j == 2:
            B = -B
        # sign of A + B sqrt(d)
        if B == 0:
            return (A > 0) - (A < 0)
        if A == 0:
            return 1 if B > 0 else -1
        if A > 0 and B > 0:
            return 1
        if A < 0 and B < 0:
            return -1
        # opposite signs: compare A^2 with B^2 d
        lhs, rhs = A * A, B * B * self.d
        if lhs == rhs:
            return 0  # impossible for squarefree d >= 2 with rational A,B != 0
        if A > 0:
            return 1 if lhs > rhs else -1
        return -1 if lhs > rhs else 1

    def sqrt_d_interval(self, bits: int = 120) -> RatInterval:
        if self.r == 1:
            raise FieldError("rational field has no sqrt(d)")
        return _cached_sqrt_interval(self.d, bits)

    def embed(self, x: FieldElement, j: int, rel_bits: int = 60) -> RatInterval:
        """Enclosure of sigma_j(x) with relative width <= 2^-rel_bits."""
        x = self.coerce(x)
        if not 1 <= j <= self.r:
            raise FieldError(f"embedding index {j} out of range")
        if self.r == 1 or x.b == 0:
            return RatInterval.exact(x.a)
        bits = rel_bits + 40
        for _ in range(12):
            s = self.sqrt_d_interval(bits)
            if j == 2:
                s = -s
            if self.d % 4 == 1:
                val = (RatInterval.exact(2 * x.a + x.b) + s * x.b) * Fraction(1, 2)
            else:
                val = RatInterval.exact(x.a) + s * x.b
            if val.lo > 0 or val.hi < 0:
                scale = min(abs(val.lo), abs(val.hi))
                if val.width() <= scale * Fraction(1, 1 << rel_bits):
                    return val
            bits *= 2
        raise FieldError("embedding enclosure did not converge")  # pragma: no cover

    # -- units ----------------------------------------------------------------

    def _fundamental_unit(self) -> FieldElement:
        """Smallest unit > 1 from the continued fraction of w."""
        d = self.d
        if d % 4 == 1:
            P, Q = 1, 2
        else:
            P, Q = 0, 1
        sq = math.isqrt(d)
        a = (P + sq) // Q
        p_prev, p = 1, a
        q_prev, q = 0, 1
        t = self.w_trace
        for _ in range(100000):
            # unit candidate u = p - q*conj(w) = (p - q t) + q w
            x, y = p - q * t, q
            nrm = x * x + t * x * y - self.w_norm_neg * y * y
            if abs(nrm) == 1 and (x, y) != (1, 0):
                return self.element(x, y)
            P = a * Q - P
            Q = (d - P * P) // Q
            a = (P + sq) // Q
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
        raise FieldError(f"fundamental unit search did not terminate for d={d}")

    def continued_fraction_convergents(self, count: int):
        """First convergents (p, q) of w; used by the completeness check."""
        d = self.d
        if d % 4 == 1:
            P, Q = 1, 2
        else:
            P, Q = 0, 1
        sq = math.isqrt(d)
        a = (P + sq) // Q
        p_prev, p = 1, a
        q_prev, q = 0, 1
        out = [(p, q)]
        for _ in range(count - 1):
            P = a * Q - P
            Q = (d - P * P) // Q
            a = (P + sq) // Q
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            out.append((p, q))
        return out

    def _different_generator(self):
        """Canonical generator of the different ideal, totally positive
        whenever the field admits one (Nm(eps) = -1)."""
        naive = self.sqrt_d_element()
        if self.d % 4 != 1:
            naive = naive * 2
        g = self.unit_reduce(naive, prefer_totally_positive=True)
        return g, g.is_totally_positive()

    def unit_reduce(self, g: FieldElement, prefer_totally_positive: bool = True) -> FieldElement:
        """Deterministic associate of g: totally positive when possible,
        embedding ratio sigma_1/sigma_2 (in absolute value) in [1, eps^4)."""
        g = self.coerce(g)
        if g.is_zero():
            return g
        if self.r == 1:
            return self.element(abs(g.a))
        eps = self.eps
        if prefer_totally_positive and g.signed_norm() < 0 and self.eps_norm == -1:
            g = g * eps
        # make sigma_1 > 0
        if g.embedding_sign(1) < 0:
            g = -g
        eps2 = eps * eps
        # reduce |sigma_1/sigma_2| into [1, sigma_1(eps^2)/|sigma_2(eps^2)|)
        def ratio_ge_one(x: FieldElement) -> bool:
            # |sigma_1(x)| >= |sigma_2(x)|, with sigma_1(x) > 0:
            # same-sign embeddings compare via b, opposite via trace
            if x.embedding_sign(2) > 0:
                return self.sign_of(x.a, x.b, 1) >= 0 and x.b >= 0
            return x.trace() >= 0

        for _ in range(10000):
            if not ratio_ge_one(g):
                g = g * eps2
            elif ratio_ge_one(g / eps2):
                g = g / eps2
            else:
                return g
        raise FieldError("unit reduction did not terminate")  # pragma: no cover

    def unit_class_representatives(self) -> UnitData:
        if self.r == 1:
            one = self.one()
            return UnitData((one, -one), (one,))
        eps = self.eps
        units = (self.one(), -self.one(), eps, -eps)
        plus = tuple(u for u in units if u.is_totally_positive())
        return UnitData(units, plus)

    # -- different / inverse different ----------------------------------------

    def in_inverse_different(self, x: FieldElement) -> bool:
        return (self.coerce(x) * self.d_gen).is_integral()

    def in_inverse_different_by_trace(self, x: FieldElement) -> bool:
        """Independent test: Tr(x * g) integral for g in the integral basis."""
        x = self.coerce(x)
        gens = [self.one()] + ([self.w()] if self.r == 2 else [])
        return all((x * g).trace().denominator == 1 for g in gens)


@lru_cache(maxsize=None)
def _cached_sqrt_interval(d: int, bits: int) -> RatInterval:
    q = Fraction(d)
    return RatInterval(sqrt_lower(q, bits), sqrt_upper(q, bits))


@lru_cache(maxsize=None)
def make_field(r: int, d: Optional[int] = None) -> TotallyRealField:
    """Construct Q (r=1) or Q(sqrt(d)) (r=2, d squarefree >= 2)."""
    return TotallyRealField(r, d)


def rationals() -> TotallyRealField:
    return make_field(1)


def real_quadratic(d: int) -> TotallyRealField:
    return make_field(2, d)
