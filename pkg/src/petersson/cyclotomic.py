"""Exact arithmetic in Z[zeta_Q] with a certified zero test.

Values are integer combinations of Q-th roots of unity, stored by
exponent.  The zero test rewrites into the tensor basis of the
cyclotomic integers (exponents below phi(p^e) in each prime-power
component), using zeta^{(p-1)p^(e-1)+v} = -sum_j zeta^{v+j p^(e-1)};
a nonvanishing certificate is then a nonzero basis coefficient, which
no floating-point evaluation could provide.
"""

from __future__ import annotations

import cmath
import math
from typing import Dict, Tuple

from .ideals import factorize


class CyclotomicInteger:
    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Dict[int, int] | None = None):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        self.coeffs: Dict[int, int] = {}
        if coeffs:
            for a, c in coeffs.items():
                if c:
                    self.coeffs[a % order] = self.coeffs.get(a % order, 0) + c
            self.coeffs = {a: c for a, c in self.coeffs.items() if c}

    @classmethod
    def zero(cls, order: int = 1) -> "CyclotomicInteger":
        return cls(order)

    @classmethod
    def one(cls, order: int = 1) -> "CyclotomicInteger":
        return cls(order, {0: 1})

    @classmethod
    def root_of_unity(cls, order: int, exponent: int) -> "CyclotomicInteger":
        return cls(order, {exponent % order: 1})

    # -- ring structure -------------------------------------------------------

    def raise_order(self, new_order: int) -> "CyclotomicInteger":
        if new_order % self.order:
            raise ValueError("new order must be a multiple")
        k = new_order // self.order
        return CyclotomicInteger(new_order, {a * k: c for a, c in self.coeffs.items()})

    def _common(self, other: "CyclotomicInteger"):
        L = self.order * other.order // math.gcd(self.order, other.order)
        return self.raise_order(L), other.raise_order(L)

    def __add__(self, other: "CyclotomicInteger") -> "CyclotomicInteger":
        a, b = self._common(other)
        out = dict(a.coeffs)
        for e, c in b.coeffs.items():
            out[e] = out.get(e, 0) + c
        return CyclotomicInteger(a.order, out)

    def __neg__(self) -> "CyclotomicInteger":
        return CyclotomicInteger(self.order, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other: "CyclotomicInteger") -> "CyclotomicInteger":
        return self + (-other)

    def __mul__(self, other) -> "CyclotomicInteger":
        if isinstance(other, int):
            return CyclotomicInteger(self.order,
                                     {a: c * other for a, c in self.coeffs.items()})
        a, b = self._common(other)
        out: Dict[int, int] = {}
        for e1, c1 in a.coeffs.items():
            for e2, c2 in b.coeffs.items():
                e = (e1 + e2) % a.order
                out[e] = out.get(e, 0) + c1 * c2
        return CyclotomicInteger(a.order, out)

    __rmul__ = __mul__

    # -- zero test -------------------------------------------------------------

    def reduced_coeffs(self) -> Dict[Tuple[int, ...], int]:
        """Coefficients on the tensor basis of Z[zeta_Q]."""
        Q = self.order
        fac = sorted(factorize(Q).items()) if Q > 1 else []
        powers = [p ** e for p, e in fac]
        phis = [q - q // p for (p, _), q in zip(fac, powers)]
        mults = [Q // q for q in powers]
        invs = [pow(m, -1, q) for m, q in zip(mults, powers)]

        def components(a: int) -> Tuple[int, ...]:
            return tuple((a * inv) % q for inv, q in zip(invs, powers))

        work: Dict[Tuple[int, ...], int] = {}
        for a, c in self.coeffs.items():
            key = components(a)
            work[key] = work.get(key, 0) + c

        # One pass per prime component: expanding component i yields keys
        # already reduced at i and leaves the other components untouched.
        for i, ((p, _e), q, phi) in enumerate(zip(fac, powers, phis)):
            step = q // p
            new: Dict[Tuple[int, ...], int] = {}
            for key, c in work.items():
                s = key[i]
                if s < phi:
                    new[key] = new.get(key, 0) + c
                else:
                    # zeta_q^s = -sum_{j=0}^{p-2} zeta_q^{(s-phi) + j p^(e-1)}
                    v = s - phi
                    for j in range(p - 1):
                        nk = key[:i] + (v + j * step,) + key[i + 1:]
                        new[nk] = new.get(nk, 0) - c
            work = new
        return {k: c for k, c in work.items() if c}

    def is_zero(self) -> bool:
        if not self.coeffs:
            return True
        return not self.reduced_coeffs()

    def __eq__(self, other):
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("unhashable (use reduced coefficients)")

    # -- numeric view ------------------------------------------------------------

    def approx(self) -> complex:
        return sum((c * cmath.exp(2j * cmath.pi * a / self.order)
                    for a, c in self.coeffs.items()), complex(0))

    def approx_error_bound(self) -> float:
        total = sum(abs(c) for c in self.coeffs.values())
        return 1e-13 * total + 1e-300

    def one_norm(self) -> int:
        return sum(abs(c) for c in self.coeffs.values())

    def __repr__(self):
        if not self.coeffs:
            return "Cyc(0)"
        parts = "+".join(f"{c}*z{self.order}^{a}" for a, c in sorted(self.coeffs.items()))
        return f"Cyc({parts})"
