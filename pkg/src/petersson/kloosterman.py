"""Exact Kloosterman sums S(m1, m2; n; c) with trivial central character.

The sum runs over residue pairs s1*s2 = n in O/cO and accumulates the
additive character theta_f((m1 s1 + m2 s2)/c) = e(Tr(.)) as an exact
element of Z[zeta_Q].  Local factors at a prime power p^e divide by the
full idele component: the unit part c/pi^e is absorbed by multiplying
m1, m2 with an inverse of it to high p-adic precision, which leaves the
character value unchanged place by place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .cyclotomic import CyclotomicInteger
from .field import FieldElement, TotallyRealField
from .ideals import (PrimeIdeal, PrincipalIdeal, ResidueRing,
                     ResourceBudgetError, element_valuation,
                     ideal_factorization)

DEFAULT_PAIR_BUDGET = 10 ** 7


@dataclass
class KloostermanValue:
    cyclotomic: CyclotomicInteger
    num_terms: int

    @property
    def order(self) -> int:
        return self.cyclotomic.order

    @property
    def approx(self) -> complex:
        return self.cyclotomic.approx()

    @property
    def approx_error(self) -> float:
        return self.cyclotomic.approx_error_bound()

    def is_zero(self) -> bool:
        return self.cyclotomic.is_zero()

    def abs_upper(self) -> float:
        return abs(self.approx) + self.approx_error

    def __repr__(self):
        z = self.approx
        return f"KloostermanValue({z.real:.6g}{z.imag:+.6g}i, Q={self.order})"


def theta_angle(x: FieldElement) -> Fraction:
    """Finite-part character angle: Tr(x) mod 1, exactly."""
    t = x.trace()
    return t - math.floor(t)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _character_data(m1: FieldElement, m2: FieldElement, divider: FieldElement):
    """Angle of a pair as an integer combination mod Q.

    Tr((m1 s1 + m2 s2)/divider) is linear in the coordinates of s1, s2;
    Q is the lcm of the coefficient denominators.
    """
    field = divider.field
    coeffs = []
    for m in (m1, m2):
        base = m / divider
        coeffs.append(base.trace())
        if field.r == 2:
            coeffs.append((base * field.w()).trace())
        else:
            coeffs.append(Fraction(0))
    Q = 1
    for fr in coeffs:
        Q = _lcm(Q, fr.denominator)
    ints = [int(fr * Q) % Q for fr in coeffs]
    return Q, ints


def kloosterman_sum(m1: FieldElement, m2: FieldElement, n: FieldElement,
                    c: FieldElement, divider: Optional[FieldElement] = None,
                    budget: int = DEFAULT_PAIR_BUDGET) -> KloostermanValue:
    """Sum over s1*s2 = n in O/cO of e(Tr((m1 s1 + m2 s2)/divider)).

    divider defaults to c (the global sum).  Enumeration is one pass over
    s1 with the unique solution s2 = s1^{-1} n where the norm trick
    applies, falling back to a scan otherwise; work is charged against
    the pair budget.
    """
    field = c.field
    if divider is None:
        divider = c
    ring = ResidueRing(field, c)
    Q, (T10, T11, T20, T21) = _character_data(m1, m2, divider)
    n_res = ring.reduce_element(field.coerce(n))
    counts: dict[int, int] = {}
    work = 0
    terms = 0
    for s1 in ring.elements():
        work += 1
        inv = ring.try_inverse(s1)
        if inv is not None:
            solutions = [ring.mul(inv, n_res)]
        else:
            work += ring.size
            if work > budget:
                raise ResourceBudgetError(
                    f"kloosterman enumeration exceeded budget ({budget} pairs)")
            solutions = [s2 for s2 in ring.elements() if ring.mul(s1, s2) == n_res]
        x1, y1 = s1
        base = x1 * T10 + y1 * T11
        for x2, y2 in solutions:
            a = (base + x2 * T20 + y2 * T21) % Q
            counts[a] = counts.get(a, 0) + 1
            terms += 1
    if work > budget:
        raise ResourceBudgetError(
            f"kloosterman enumeration exceeded budget ({budget} pairs)")
    return KloostermanValue(CyclotomicInteger(Q, counts), terms)


def _validate_inverse_different(field: TotallyRealField, m: FieldElement, name: str):
    if not field.in_inverse_different(m):
        raise ValueError(f"{name} must lie in the inverse different")


def global_kloosterman(m1: FieldElement, m2: FieldElement, n: FieldElement,
                       c: FieldElement,
                       budget: int = DEFAULT_PAIR_BUDGET) -> KloostermanValue:
    """The global sum S(m1, m2; n; c) for trivial omega."""
    field = c.field
    if c.is_zero():
        raise ValueError("modulus c must be nonzero")
    _validate_inverse_different(field, m1, "m1")
    _validate_inverse_different(field, m2, "m2")
    n = field.coerce(n)
    if not n.is_integral():
        raise ValueError("n must be integral")
    return kloosterman_sum(m1, m2, n, c, budget=budget)


def _prime_power_inverse(rho: FieldElement, prime: PrimeIdeal, k: int,
                         budget: int) -> FieldElement:
    """Inverse of rho modulo p^k (rho a unit at p)."""
    field = rho.field
    pik = prime.ideal.generator ** k
    ring = ResidueRing(field, pik)
    r = ring.reduce_element(rho)
    inv = ring.try_inverse(r)
    if inv is None:
        if ring.size > budget:
            raise ResourceBudgetError("inverse scan exceeds budget")
        for cand in ring.elements():
            if ring.mul(r, cand) == ring.reduce(1, 0):
                inv = cand
                break
    if inv is None:
        raise ValueError("element not invertible at the given prime")
    return ring.to_element(inv)


def local_kloosterman(m1: FieldElement, m2: FieldElement, n: FieldElement,
                      prime: PrimeIdeal, e: int,
                      c_full: Optional[FieldElement] = None,
                      budget: int = DEFAULT_PAIR_BUDGET) -> KloostermanValue:
    """Local factor at a prime, modulus p^e, dividing by the full c.

    With c_full = u * pi^e * (coprime part), the character divides by
    c_full; that equals dividing by pi^e after replacing m_i by
    m_i * rho^* with rho^* an inverse of c_full/pi^e to precision
    p^(e + v_p(different) + 1).
    """
    field = prime.ideal.field
    if e == 0:
        return KloostermanValue(CyclotomicInteger.one(), 1)
    pi_e = prime.ideal.generator ** e
    if c_full is not None:
        rho = c_full / pi_e
        if not rho.is_integral() or element_valuation(rho, prime) != 0:
            raise ValueError("c_full does not have exact p-part p^e")
        if rho != field.one():
            if rho.norm() == 1:
                rho_star = field.one() / rho  # global unit: exact inverse
            else:
                k = e + element_valuation(field.d_gen, prime) + 1
                rho_star = _prime_power_inverse(rho, prime, k, budget)
            m1 = m1 * rho_star
            m2 = m2 * rho_star
    return kloosterman_sum(m1, m2, n, pi_e, divider=pi_e, budget=budget)


def check_product_identity(m1: FieldElement, m2: FieldElement, n: FieldElement,
                           c: FieldElement,
                           budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """Global sum equals the product of local sums, exactly in Z[zeta]."""
    g = global_kloosterman(m1, m2, n, c, budget=budget)
    prod = CyclotomicInteger.one()
    for prime, e in ideal_factorization(c):
        if e < 0:
            raise ValueError("c must be integral")
        loc = local_kloosterman(m1, m2, n, prime, e, c_full=c, budget=budget)
        prod = prod * loc.cyclotomic
    return (g.cyclotomic - prod).is_zero()


def check_weil_type_bound(m1: FieldElement, m2: FieldElement, n: FieldElement,
                          c: FieldElement, tol: float = 1e-9,
                          budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """|S(m1,m2;n;c)| <= Nm(n) Nm(c), allowing numerical tolerance."""
    val = global_kloosterman(m1, m2, n, c, budget=budget)
    bound = float(c.field.coerce(n).norm() * c.norm())
    return abs(val.approx) <= bound + val.approx_error + tol * (1 + bound)


def nonvanishing_lemma_check(m1: FieldElement, m2: FieldElement, s_tilde: int,
                             budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """Exact nonvanishing of S(m1, m2; 1; s~) for squarefree levels.

    Certified by the cyclotomic zero test; expected True whenever |s~| is
    squarefree and the character is trivial.
    """
    from .ideals import is_squarefree_int
    if not is_squarefree_int(s_tilde):
        raise ValueError("level generator must be squarefree")
    field = m1.field
    c = field.element(abs(s_tilde))
    val = global_kloosterman(m1, m2, field.one(), c, budget=budget)
    return not val.is_zero()
