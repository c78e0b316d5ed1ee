"""Real-affine shadow of a polynomial semigroup.

Every degree-d polynomial with leading coefficient a casts the shadow
x -> d*x + log|a| acting on log-moduli.  The shadow's repelling-fixed-point
closure is the attractor of the inverse (contracting) system and is
computed here as a certified outer cover by nested interval refinement;
its component count upper-bounds the component count of the Julia set,
and covering [alpha, beta] by the inverse images gives an exact
connectedness criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import Generator, Polynomial
from .semigroup import GeneratorSet

MERGE_RESOLUTION = 1e-12


class SlopeOne(ValueError):
    """Affine map x -> x + b has no (finite, unique) fixed point."""


@dataclass(frozen=True)
class AffineMap:
    slope: float
    intercept: float

    def __call__(self, x: float) -> float:
        return self.slope * x + self.intercept

    def inverse(self, x: float) -> float:
        return (x - self.intercept) / self.slope

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        return AffineMap(self.slope * other.slope,
                         self.slope * other.intercept + self.intercept)

    def fixed_point(self) -> float:
        if self.slope == 1.0:
            raise SlopeOne("slope 1 has no unique fixed point")
        return self.intercept / (1.0 - self.slope)


def psi(g: Generator) -> AffineMap:
    """Shadow map: slope = degree, intercept = log |leading coefficient|."""
    if g.degree < 1:
        raise ValueError("need degree >= 1")
    return AffineMap(float(g.degree), g.log_leading_magnitude())


def theta(g: Generator) -> Polynomial:
    """Monomial with the same degree and leading coefficient."""
    if g.degree < 1:
        raise ValueError("need degree >= 1")
    coeffs = [0.0] * g.degree + [g.leading_coefficient]
    return Polynomial(coeffs)


class IntervalSet:
    """Sorted disjoint closed intervals on the real line.

    Intervals closer than the merge resolution are coalesced; below that,
    gaps are numerically meaningless in double precision.
    """

    __slots__ = ("intervals", "contains_plus_infinity")

    def __init__(self, intervals: Sequence[tuple[float, float]],
                 merge_resolution: float = MERGE_RESOLUTION,
                 contains_plus_infinity: bool = False):
        ivs = sorted((float(lo), float(hi)) for lo, hi in intervals)
        merged: list[list[float]] = []
        for lo, hi in ivs:
            if hi < lo:
                raise ValueError("interval with hi < lo")
            if merged and lo - merged[-1][1] <= merge_resolution:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        self.intervals = [(lo, hi) for lo, hi in merged]
        self.contains_plus_infinity = contains_plus_infinity

    @property
    def count(self) -> int:
        return len(self.intervals)

    def max_width(self) -> float:
        return max((hi - lo for lo, hi in self.intervals), default=0.0)

    def hull(self) -> tuple[float, float]:
        return self.intervals[0][0], self.intervals[-1][1]

    def contains_point(self, x: float) -> bool:
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return True
            if lo > x:
                break
        return False

    def contains_interval_set(self, other: "IntervalSet") -> bool:
        """Every interval of `other` inside some single interval of self."""
        for lo, hi in other.intervals:
            if not any(a <= lo and hi <= b for a, b in self.intervals):
                return False
        return True

    def to_json_dict(self) -> dict:
        return {"intervals": [[lo, hi] for lo, hi in self.intervals],
                "contains_plus_infinity": self.contains_plus_infinity}

    def __repr__(self):
        return f"IntervalSet({self.intervals!r})"

    def __eq__(self, other):
        return (isinstance(other, IntervalSet)
                and self.intervals == other.intervals
                and self.contains_plus_infinity == other.contains_plus_infinity)


def _shadow_maps(gs: GeneratorSet) -> list[AffineMap]:
    maps = [psi(g) for g in gs]
    for mp in maps:
        if mp.slope < 2:
            raise ValueError("shadow system needs every slope >= 2 (degree >= 2)")
    return maps


def m_set(gs: GeneratorSet, refine_depth: int) -> IntervalSet:
    """Outer interval cover of the shadow semigroup's fixed-point closure.

    Depth-k cover = union of the k-fold inverse images of the fixed-point
    hull; covers shrink monotonically in Hausdorff distance as the depth
    grows.  Finite families of degree >= 2 never reach +infinity.
    """
    maps = _shadow_maps(gs)
    fps = [mp.fixed_point() for mp in maps]
    cover = IntervalSet([(min(fps), max(fps))])
    for _ in range(refine_depth):
        images = [(mp.inverse(lo), mp.inverse(hi))
                  for mp in maps for lo, hi in cover.intervals]
        cover = IntervalSet(images)
    return cover


@dataclass(frozen=True)
class CountBound:
    kind: str       # "finite" | "at_least"
    n: int

    def __str__(self):
        return f"{'Finite' if self.kind == 'finite' else 'AtLeast'}({self.n})"


def _outward(lo: float, hi: float) -> tuple[float, float]:
    return (math.nextafter(math.nextafter(lo, -math.inf), -math.inf),
            math.nextafter(math.nextafter(hi, math.inf), math.inf))


def component_count_upper_bound(gs: GeneratorSet, refine_depth: int) -> CountBound:
    """Component count of the shadow attractor cover.

    Certified Finite(n) only when the count stopped growing and the cover
    reproduces itself under the inverse system with outward-rounded
    endpoints; otherwise AtLeast(n), since refinement can only split.
    """
    refine_depth = max(refine_depth, 1)
    prev = m_set(gs, refine_depth - 1)
    cover = m_set(gs, refine_depth)
    if prev.count == cover.count and _self_cover_certified(gs, cover):
        return CountBound("finite", cover.count)
    return CountBound("at_least", cover.count)


def _self_cover_certified(gs: GeneratorSet, cover: IntervalSet) -> bool:
    maps = _shadow_maps(gs)
    images = [_outward(mp.inverse(lo), mp.inverse(hi))
              for mp in maps for lo, hi in cover.intervals]
    return IntervalSet(images, merge_resolution=0.0).contains_interval_set(cover)


# ---------------------------------------------------------------------------
# Connectedness criteria
# ---------------------------------------------------------------------------

@dataclass
class CriterionReport:
    criterion_name: str
    alpha: float
    beta: float
    covered: bool
    gap_witness: float | None = None

    def to_json_dict(self) -> dict:
        return {"criterion_name": self.criterion_name, "alpha": self.alpha,
                "beta": self.beta, "covered": self.covered,
                "gap_witness": self.gap_witness}


def normalized_fixed_point(g: Generator) -> float:
    """-log|a| / (deg - 1): the shadow map's fixed point."""
    return -g.log_leading_magnitude() / (g.degree - 1)


def check_interval_cover(gs: GeneratorSet) -> CriterionReport:
    """Does the union of inverse shadow images cover [alpha, beta]?

    A true result certifies a connected Julia set for postcritically
    bounded input.  The sweep runs in exact rational arithmetic over the
    float inputs, so touching endpoints never produce spurious gaps.
    """
    maps = [psi(g) for g in gs]
    fps = [normalized_fixed_point(g) for g in gs]
    alpha, beta = min(fps), max(fps)
    report = CriterionReport("interval_cover", alpha, beta, covered=True)
    if alpha == beta:
        return report

    a_f, b_f = Fraction(alpha), Fraction(beta)
    ivs = []
    for mp in maps:
        slope = Fraction(mp.slope)
        icpt = Fraction(mp.intercept)
        ivs.append(((a_f - icpt) / slope, (b_f - icpt) / slope))
    ivs.sort()
    reach = a_f
    for lo, hi in ivs:
        if lo > reach:
            break
        reach = max(reach, hi)
        if reach >= b_f:
            return report
    gap_hi = min((lo for lo, _ in ivs if lo > reach), default=b_f)
    report.covered = False
    report.gap_witness = float((reach + gap_hi) / 2)
    return report


def check_all_quadratic(gs: GeneratorSet) -> bool:
    """True iff every generator is exactly quadratic (certifies connectedness)."""
    return all(g.degree == 2 for g in gs)


def check_equal_normalized(gs: GeneratorSet, tol: float = 1e-12) -> bool:
    """(deg(h)-1) log|a(k)| == (deg(k)-1) log|a(h)| for all pairs, within tol."""
    gens = list(gs)
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            lhs = (g.degree - 1) * h.log_leading_magnitude()
            rhs = (h.degree - 1) * g.log_leading_magnitude()
            if abs(lhs - rhs) > tol:
                return False
    return True
