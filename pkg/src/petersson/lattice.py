"""The ideal lattice sigma(bN) in R^r: shortest vectors and box sets.

Squared lengths are exact rationals (||sigma(s)||^2 = Tr(s^2)), so the
shortest-vector radius and every box membership |sigma_j(s)| <= bound
are decided exactly; floating point only pre-screens the enumeration
window, with a safety margin, before the exact filter runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .field import FieldElement, TotallyRealField
from .ideals import PrincipalIdeal, ResourceBudgetError
from .intervals import RatInterval

DEFAULT_POINT_BUDGET = 2 * 10 ** 6


@dataclass(frozen=True)
class BoxSet:
    """delta, delta~ = delta/(2 sqrt r), the box set A and the minimizers.

    A holds the s with every |sigma_j(s)| <= 2*delta~ (one of {s,-s},
    chosen with sigma_1(s) > 0); minimizers holds all s attaining
    ||sigma(s)|| = delta.  The two coincide for levels generated by
    rational integers but differ in general.
    """

    ideal: PrincipalIdeal
    delta_sq: Fraction
    box: Tuple[FieldElement, ...]
    minimizers: Tuple[FieldElement, ...]

    @property
    def delta(self) -> float:
        return math.sqrt(float(self.delta_sq))

    @property
    def delta_tilde(self) -> float:
        r = self.ideal.field.r
        return self.delta / (2 * math.sqrt(r))

    def delta_interval(self, bits: int = 120) -> RatInterval:
        return RatInterval.exact(self.delta_sq).sqrt(bits)


def norm_square_sum(s: FieldElement) -> Fraction:
    """||sigma(s)||^2 = Tr(s^2), an exact rational."""
    return (s * s).trace()


def _canonical_mod_pm(s: FieldElement) -> FieldElement:
    return s if s.embedding_sign(1) > 0 else -s


def _sigma_sq_leq(s: FieldElement, j: int, bound_sq: Fraction) -> bool:
    """Exact test sigma_j(s)^2 <= bound_sq."""
    s2 = s * s
    return s.field.sign_of(s2.a - bound_sq, s2.b, j) <= 0


def lattice_points_in_box(ideal: PrincipalIdeal,
                          bounds_sq: Sequence[Fraction],
                          budget: int = DEFAULT_POINT_BUDGET) -> List[FieldElement]:
    """All s in the ideal mod +-, s != 0, with sigma_j(s)^2 <= bounds_sq[j].

    Float pre-screen with a one-lattice-step margin, exact filter after.
    """
    field = ideal.field
    g = ideal.generator
    bounds_sq = [Fraction(b) for b in bounds_sq]
    if any(b < 0 for b in bounds_sq):
        return []
    if field.r == 1:
        r0 = math.sqrt(float(bounds_sq[0])) / abs(float(g.a)) + 1
        if r0 > budget:
            raise ResourceBudgetError("box enumeration exceeds point budget")
        out = []
        for x in range(1, int(r0) + 1):
            s = g * x
            if _sigma_sq_leq(s, 1, bounds_sq[0]):
                out.append(_canonical_mod_pm(s))
        return _sorted_points(out)

    w1 = field.w().embed_float(1)
    w2 = field.w().embed_float(2)
    g1 = abs(g.embed_float(1))
    g2 = abs(g.embed_float(2))
    r1 = math.sqrt(float(bounds_sq[0])) / g1
    r2 = math.sqrt(float(bounds_sq[1])) / g2
    sqd = math.sqrt(field.d)
    ymax = int((r1 + r2) / sqd) + 2
    est = 0
    out = []
    for y in range(-ymax, ymax + 1):
        # |x + y*w_j| <= r_j for both embeddings of w
        los = (-r1 - y * w1, -r2 - y * w2)
        his = (r1 - y * w1, r2 - y * w2)
        xlo = int(math.floor(max(los) - 1.5))
        xhi = int(math.ceil(min(his) + 1.5))
        est += max(0, xhi - xlo + 1)
        if est > budget:
            raise ResourceBudgetError("box enumeration exceeds point budget")
        for x in range(xlo, xhi + 1):
            if x == 0 and y == 0:
                continue
            s = g * field.element(x, y)
            if all(_sigma_sq_leq(s, j + 1, bounds_sq[j]) for j in range(2)):
                out.append(_canonical_mod_pm(s))
    # dedupe mod +-
    seen = {}
    for s in out:
        seen[(s.a, s.b)] = s
    return _sorted_points(seen.values())


def _sorted_points(points) -> List[FieldElement]:
    return sorted(points, key=lambda s: (s.norm(), s.a, s.b))


def shortest_vector(ideal: PrincipalIdeal,
                    budget: int = DEFAULT_POINT_BUDGET):
    """(delta^2, minimizers): exact minimum of Tr(s^2) over the ideal mod +-."""
    field = ideal.field
    g = ideal.generator
    cands = [g]
    if field.r == 2:
        w = field.w()
        cands += [g * w, g * (1 + w), g * (1 - w)]
    upper = min(norm_square_sum(s) for s in cands)
    box = lattice_points_in_box(ideal, [upper] * field.r, budget=budget)
    delta_sq = min(norm_square_sum(s) for s in box)
    minimizers = tuple(s for s in box if norm_square_sum(s) == delta_sq)
    return delta_sq, minimizers


def box_set(ideal: PrincipalIdeal, budget: int = DEFAULT_POINT_BUDGET) -> BoxSet:
    """The data (delta, A, minimizers) of the lattice sigma(bN)."""
    delta_sq, minimizers = shortest_vector(ideal, budget=budget)
    field = ideal.field
    # |sigma_j(s)| <= 2 delta~ = delta / sqrt(r):  sigma_j(s)^2 <= delta^2 / r
    bound = delta_sq / field.r
    pts = lattice_points_in_box(ideal, [bound] * field.r, budget=budget)
    return BoxSet(ideal, delta_sq, tuple(pts), minimizers)


def enumerate_complement(ideal: PrincipalIdeal,
                         bounds: Sequence,
                         box: Optional[BoxSet] = None,
                         budget: int = DEFAULT_POINT_BUDGET) -> List[FieldElement]:
    """A' within the window: s != 0 mod +-, |sigma_j(s)| <= R_j, s not in A.

    bounds are per-coordinate radii (numbers, exact Fractions accepted).
    """
    if box is None:
        box = box_set(ideal, budget=budget)
    field = ideal.field
    bounds_sq = [Fraction(b) * Fraction(b) for b in bounds]
    min_allowed = box.delta_sq / field.r
    if any(b < min_allowed for b in bounds_sq):
        raise ValueError("cutoffs must cover the box (R_j >= 2 delta~)")
    pts = lattice_points_in_box(ideal, bounds_sq, budget=budget)
    in_box = {(s.a, s.b) for s in box.box}
    return [s for s in pts if (s.a, s.b) not in in_box]
