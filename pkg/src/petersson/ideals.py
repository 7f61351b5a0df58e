"""Principal ideals in class-number-one fields.

Ideals are carried by canonical generators (unit-reduced, totally
positive when the field admits it), primes are found by splitting
rational primes with the Kronecker symbol, and residue systems come from
a 2x2 Hermite normal form of the ideal lattice.  This is all the ideal
theory the trace formula needs at narrow class number one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .field import FieldElement, FieldError, TotallyRealField


class UnsupportedFieldError(ValueError):
    pass


class NoTotallyPositiveGeneratorError(ValueError):
    pass


class ResourceBudgetError(RuntimeError):
    """Raised when an enumeration would exceed its configured budget."""


# -- rational helpers ---------------------------------------------------------

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker(a, -n)
    t = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            t = -t
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def factorize(n: int) -> Dict[int, int]:
    """Trial-division factorization, adequate for desk-scale norms."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor zero")
    out: Dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n:
        if n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        else:
            f += wheel[i]
            i = (i + 1) % 8
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree_int(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    return all(e == 1 for e in factorize(n).values())


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


# -- principal ideals ----------------------------------------------------------

@dataclass(frozen=True)
class PrincipalIdeal:
    """Fractional principal ideal with a canonical generator."""

    generator: FieldElement
    norm: Fraction

    @classmethod
    def from_generator(cls, g: FieldElement) -> "PrincipalIdeal":
        if g.is_zero():
            raise ValueError("zero ideal not supported")
        canon = g.field.unit_reduce(g)
        return cls(canon, canon.norm())

    @classmethod
    def from_int(cls, field: TotallyRealField, n: int) -> "PrincipalIdeal":
        return cls.from_generator(field.element(n))

    @property
    def field(self) -> TotallyRealField:
        return self.generator.field

    def is_integral(self) -> bool:
        return self.generator.is_integral()

    def is_unit_ideal(self) -> bool:
        return self.norm == 1

    def __mul__(self, other: "PrincipalIdeal") -> "PrincipalIdeal":
        return PrincipalIdeal.from_generator(self.generator * other.generator)

    def __pow__(self, e: int) -> "PrincipalIdeal":
        return PrincipalIdeal.from_generator(self.generator ** e)

    def inverse(self) -> "PrincipalIdeal":
        return PrincipalIdeal.from_generator(self.generator.field.one() / self.generator)

    def divides(self, other: "PrincipalIdeal") -> bool:
        return (other.generator / self.generator).is_integral()

    def contains_element(self, x: FieldElement) -> bool:
        return (x / self.generator).is_integral()

    def __eq__(self, other):
        if not isinstance(other, PrincipalIdeal):
            return NotImplemented
        return self.generator == other.generator

    def __hash__(self):
        return hash(self.generator)

    def __repr__(self):
        return f"({self.generator!r})"


@dataclass(frozen=True)
class ClassSolution:
    t: int
    b_list: tuple
    eta_list: tuple


# -- prime splitting ------------------------------------------------------------

@dataclass(frozen=True)
class PrimeIdeal:
    ideal: PrincipalIdeal
    p: int            # rational prime below
    e: int            # ramification index
    f: int            # residue degree

    @property
    def norm(self) -> int:
        return self.p ** self.f


def _solve_norm_equation(field: TotallyRealField, target: int) -> Optional[FieldElement]:
    """Find x + y*w with |N'(x + y*w)| == target by bounded search.

    A principal ideal of norm `target` has a unit-reduced generator g with
    |sigma_j(g)| <= sqrt(target) * eps, so y is bounded explicitly.
    """
    t, q = field.w_trace, field.w_norm_neg
    eps1 = float(field.eps.embed(1, rel_bits=30).mid())
    bound = math.sqrt(target) * eps1
    wspread = math.sqrt(field.d) if field.d % 4 != 1 else math.sqrt(field.d)
    ymax = int(2 * bound / wspread) + 2
    for y in range(0, ymax + 1):
        # x^2 + t x y - q y^2 = +/- target
        for sign in (1, -1):
            c = -q * y * y - sign * target
            disc = t * t * y * y - 4 * c
            if disc < 0:
                continue
            s = math.isqrt(disc)
            if s * s != disc:
                continue
            for numer in (-t * y + s, -t * y - s):
                if numer % 2 == 0:
                    x = numer // 2
                    cand = field.element(x, y)
                    if cand.norm() == target and not cand.is_zero():
                        return cand
    return None


def split_rational_prime(field: TotallyRealField, p: int) -> List[PrimeIdeal]:
    """Prime ideals of O above p, via the Kronecker symbol on the discriminant."""
    if field.r == 1:
        return [PrimeIdeal(PrincipalIdeal.from_int(field, p), p, 1, 1)]
    sym = kronecker(field.disc, p)
    if sym == -1:
        return [PrimeIdeal(PrincipalIdeal.from_int(field, p), p, 1, 2)]
    g = _solve_norm_equation(field, p)
    if g is None:
        raise UnsupportedFieldError(
            f"prime {p} above a nonprincipal ideal; class number > 1?")
    pi = PrincipalIdeal.from_generator(g)
    if sym == 0:
        return [PrimeIdeal(pi, p, 2, 1)]
    pi_bar = PrincipalIdeal.from_generator(g.conj())
    return [PrimeIdeal(pi, p, 1, 1), PrimeIdeal(pi_bar, p, 1, 1)]


def element_valuation(x: FieldElement, prime: PrimeIdeal) -> int:
    """v_p(x) for a nonzero element, by exact division by the generator."""
    if x.is_zero():
        raise ValueError("valuation of zero")
    field = x.field
    v = 0
    g = prime.ideal.generator
    # clear denominators first: v(x) = v(x * den) - v(den)
    den = _lcm(x.a.denominator, x.b.denominator)
    num = x * den
    v_den = 0
    if den > 1:
        f = factorize(den)
        for q, e in f.items():
            for pr in split_rational_prime(field, q):
                if pr.ideal == prime.ideal:
                    v_den += e * pr.e
    while True:
        nxt = num / g
        if not nxt.is_integral():
            break
        num = nxt
        v += 1
    return v - v_den


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def ideal_factorization(ideal_gen: FieldElement) -> List[Tuple[PrimeIdeal, int]]:
    """Factor the fractional ideal (x) into prime ideals with exponents."""
    x = ideal_gen
    if x.is_zero():
        raise ValueError("cannot factor the zero ideal")
    field = x.field
    den = _lcm(x.a.denominator, x.b.denominator)
    support = set(factorize(den)) | set(factorize((x * den).norm().numerator))
    out = []
    for p in sorted(support):
        for pr in split_rational_prime(field, p):
            v = element_valuation(x, pr)
            if v != 0:
                out.append((pr, v))
    return out


def coprime(a: PrincipalIdeal, b: PrincipalIdeal) -> bool:
    """True iff the integral ideals a, b share no prime."""
    if math.gcd(int(a.norm), int(b.norm)) == 1:
        return True
    fa = {pr.ideal for pr, _ in ideal_factorization(a.generator)}
    fb = {pr.ideal for pr, _ in ideal_factorization(b.generator)}
    return not (fa & fb)


# -- class number ----------------------------------------------------------------

def minkowski_bound(field: TotallyRealField) -> float:
    if field.r == 1:
        return 1.0
    return math.sqrt(field.disc) / 2.0


def verify_class_number_one(field: TotallyRealField) -> bool:
    """Every prime of norm below the Minkowski bound is principal."""
    if field.r == 1:
        return True
    bound = minkowski_bound(field)
    p = 2
    while p <= bound:
        if kronecker(field.disc, p) != -1:
            if _solve_norm_equation(field, p) is None:
                return False
        p += 1 if p == 2 else 2
    return True


def is_narrow_class_number_one(field: TotallyRealField) -> bool:
    if field.r == 1:
        return True
    if not verify_class_number_one(field):
        raise UnsupportedFieldError("class number exceeds one")
    return field.eps_norm == -1


def solve_class_equation(field: TotallyRealField, n: PrincipalIdeal) -> ClassSolution:
    """[b]^2 [n] = 1 at class number one: t = 1, b_1 = O, eta_1 generates n.

    eta_1 is the canonical totally positive generator; its absence means
    the narrow class number exceeds one.
    """
    if not verify_class_number_one(field):
        raise UnsupportedFieldError("class number exceeds one")
    eta = field.unit_reduce(n.generator, prefer_totally_positive=True)
    if not eta.is_totally_positive():
        raise NoTotallyPositiveGeneratorError(
            f"{n!r} has no totally positive generator (narrow class number > 1)")
    one = PrincipalIdeal.from_generator(field.one())
    return ClassSolution(1, (one,), (eta,))


def psi_of_level(level: PrincipalIdeal) -> int:
    """psi(N) = Nm(N) * prod_{p | N} (1 + 1/Nm(p))."""
    if not level.is_integral():
        raise ValueError("level must be integral")
    value = Fraction(int(level.norm))
    for pr, _ in ideal_factorization(level.generator):
        value *= Fraction(pr.norm + 1, pr.norm)
    assert value.denominator == 1
    return int(value)


# -- main-term indicator -----------------------------------------------------------

def main_term_indicator(m1: FieldElement, m2: FieldElement,
                        n: PrincipalIdeal) -> int:
    """Diagonal indicator of the trace formula.

    Equals 1 iff there is an integral ideal c with c^2 = (m1/m2) * n,
    c | n and c | m1*d (d the different); this is the delta-collapse of
    T_n T_{m1 d} paired against T_{m2 d}, and reduces to delta(m1, m2)
    at n = O.
    """
    field = m1.field
    if m2.is_zero() or m1.is_zero():
        return 0
    ratio = m1 / m2
    j = ratio * n.generator          # generates (m1/m2) * n
    fac = ideal_factorization(j)
    for pr, v in fac:
        if v % 2 != 0:
            return 0
        h = v // 2
        if h < 0:
            return 0
        if h > element_valuation(n.generator, pr):
            return 0
        if h > element_valuation(m1 * field.d_gen, pr):
            return 0
    return 1


# -- residue rings ------------------------------------------------------------------

class ResidueRing:
    """O / cO for a nonzero integral c, as Z^2 modulo an HNF lattice.

    Residues are integer pairs (x, y) meaning x + y*w, with
    0 <= x < A and 0 <= y < D, A*D = Nm(c).
    """

    def __init__(self, field: TotallyRealField, c: FieldElement):
        c = field.coerce(c)
        if c.is_zero() or not c.is_integral():
            raise ValueError("modulus must be a nonzero integral element")
        self.field = field
        self.c = c
        self.size = int(c.norm())
        t, q = field.w_trace, field.w_norm_neg
        self.t, self.q = t, q
        if field.r == 1:
            self.A, self.D = abs(int(c.a)), 1
            self.B = 0
            self._gen2 = (0, 1)
        else:
            ca, cb = int(c.a), int(c.b)
            # lattice columns: c = (ca, cb), c*w = (cb*q, ca + cb*t)
            v1 = (ca, cb)
            v2 = (cb * q, ca + cb * t)
            self.A, self.B, self.D, self._gen2 = _hnf_2x2(v1, v2)
            assert self.A * self.D == self.size

    def reduce(self, x: int, y: int) -> Tuple[int, int]:
        if self.field.r == 1:
            return (x % self.A, 0)
        gx, gy = self._gen2          # lattice vector with y-component D
        k = y // self.D
        x -= k * gx
        y -= k * gy
        return (x % self.A, y)

    def elements(self):
        for y in range(self.D):
            for x in range(self.A):
                yield (x, y)

    def mul(self, s: Tuple[int, int], u: Tuple[int, int]) -> Tuple[int, int]:
        a, b = s
        c, d = u
        return self.reduce(a * c + b * d * self.q, a * d + b * c + b * d * self.t)

    def conj(self, s: Tuple[int, int]) -> Tuple[int, int]:
        if self.field.r == 1:
            return s
        a, b = s
        return self.reduce(a + b * self.t, -b)

    def signed_norm_int(self, s: Tuple[int, int]) -> int:
        a, b = s
        if self.field.r == 1:
            return a
        return a * a + self.t * a * b - self.q * b * b

    def to_element(self, s: Tuple[int, int]) -> FieldElement:
        return self.field.element(s[0], s[1])

    def reduce_element(self, x: FieldElement) -> Tuple[int, int]:
        if not x.is_integral():
            raise ValueError("not an integral element")
        return self.reduce(int(x.a), int(x.b))

    def try_inverse(self, s: Tuple[int, int]) -> Optional[Tuple[int, int]]:
        """Inverse via the norm trick; None when gcd(N'(s), Nm(c)) > 1.

        (A None return does not prove non-invertibility at split primes;
        callers fall back to scanning.)
        """
        if self.field.r == 1:
            a = s[0]
            if math.gcd(a, self.size) != 1:
                return None
            return (pow(a, -1, self.size), 0)
        nrm = self.signed_norm_int(s)
        if math.gcd(nrm, self.size) != 1:
            return None
        u = pow(nrm % self.size, -1, self.size)
        sc = self.conj(s)
        return self.reduce(sc[0] * u, sc[1] * u)

    def solve_product(self, s1: Tuple[int, int], n: Tuple[int, int]):
        """All s2 with s1*s2 = n in the ring (scan fallback)."""
        inv = self.try_inverse(s1)
        if inv is not None:
            return [self.mul(inv, n)]
        return [s2 for s2 in self.elements() if self.mul(s1, s2) == n]


def _hnf_2x2(v1: Tuple[int, int], v2: Tuple[int, int]):
    """HNF [[A, B], [0, D]] of the lattice spanned by v1, v2 (columns).

    Returns (A, B, D, gen2) where gen2 is an actual lattice vector with
    second coordinate D.
    """
    (a1, b1), (a2, b2) = v1, v2
    det = abs(a1 * b2 - a2 * b1)
    if det == 0:
        raise ValueError("degenerate lattice")
    g, s, t = _xgcd(b1, b2)
    D = g
    gen2 = (s * a1 + t * a2, D)
    A = det // D
    B = gen2[0] % A
    return A, B, D, gen2


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
