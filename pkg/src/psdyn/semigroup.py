"""Generator sets, words, and the postcritical-boundedness decision procedure.

The boundedness check runs a breadth-first orbit of the finite critical
values under all generators, deduplicating on a hash grid.  Escape past the
absorbing radius certifies unboundedness (the witness word can be replayed);
a frontier that stops producing new cells certifies boundedness at the
dedup tolerance, optionally strengthened to an explicit forward-invariant
disk.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .poly import (ESCAPE_SENTINEL, Generator, IteratedPolynomial, Polynomial)

Word = tuple[int, ...]  # 1-based generator indices, applied left to right

DEFAULT_MAX_DEPTH = 30
DEFAULT_MAX_POINTS = 2_000_000
TOL_DEDUP = 1e-6


class DegreeError(ValueError):
    """Generator outside the admissible class (degree must be >= 2)."""


class GeneratorSet:
    """Ordered finite family of degree->=2 polynomials generating a semigroup."""

    def __init__(self, generators: Iterable[Generator]):
        gens = tuple(generators)
        if not gens:
            raise DegreeError("need at least one generator")
        for g in gens:
            if g.degree < 2:
                raise DegreeError(f"generator degree {g.degree} < 2")
        self.generators = gens
        self._escape_radius: float | None = None

    @property
    def m(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def __repr__(self):
        return f"GeneratorSet({list(self.generators)!r})"

    # -- word evaluation ----------------------------------------------------

    def evaluate_word(self, word: Sequence[int], z: complex) -> complex:
        """Apply h_{w1} first, then h_{w2}, ...; sequential, never composed.

        Saturates at the escape sentinel instead of overflowing.
        """
        cur = complex(z)
        for idx in word:
            if not (1 <= idx <= self.m):
                raise IndexError(f"word index {idx} outside 1..{self.m}")
            if abs(cur) > ESCAPE_SENTINEL:
                return cur
            cur = self.generators[idx - 1](cur)
            if not (math.isfinite(cur.real) and math.isfinite(cur.imag)):
                return complex(ESCAPE_SENTINEL, 0.0)
        return cur

    # -- escape radius -------------------------------------------------------

    def escape_radius(self) -> float:
        """R with |z| > R implying |h(z)| > 2|z| for every generator h."""
        if self._escape_radius is None:
            self._escape_radius = max(
                _single_escape_radius(g.base.coeffs) for g in self.generators)
        return self._escape_radius

    # -- JSON round trip -----------------------------------------------------

    def to_json_dict(self) -> dict:
        gens = []
        for g in self.generators:
            if isinstance(g, IteratedPolynomial):
                g = g.to_polynomial()
            gens.append([[c.real, c.imag] for c in g.coeffs])
        return {"generators": gens}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "GeneratorSet":
        gens: list[Generator] = []
        for entry in doc["generators"]:
            if isinstance(entry, dict):
                base = Polynomial([complex(re, im) for re, im in entry["base"]])
                gens.append(IteratedPolynomial(base, int(entry["power"])))
            else:
                gens.append(Polynomial([complex(re, im) for re, im in entry]))
        return cls(gens)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSet":
        return cls.from_json_dict(json.loads(text))


def _single_escape_radius(coeffs: np.ndarray) -> float:
    """Doubling radius for one polynomial (from its base coefficients).

    Starts from 2 * max(1, (2 + sum|c_i|) / |c_d|)^(1/(d-1)) and enlarges
    until c_d r^d - sum c_i r^i - 2r is provably positive; that expression
    has a single positive root, so positivity at R gives positivity beyond.
    """
    coeffs = np.asarray(coeffs)
    d = len(coeffs) - 1
    lead = abs(coeffs[-1])
    lower = np.abs(coeffs[:-1])
    s = float(np.sum(lower))
    r = 2.0 * max(1.0, (2.0 + s) / lead) ** (1.0 / (d - 1))

    def growth_ok(radius: float) -> bool:
        # g(r)/r^d stays in range even for large radii
        acc = lead
        for i, ci in enumerate(lower):
            acc -= ci * radius ** (i - d)
        acc -= 2.0 * radius ** (1 - d)
        return acc > 0.0

    for _ in range(200):
        if growth_ok(r):
            return r
        r *= 2.0
    raise ArithmeticError("escape radius search failed to terminate")


# ---------------------------------------------------------------------------
# Postcritical orbit
# ---------------------------------------------------------------------------

@dataclass
class PcbReport:
    verdict: str                       # "bounded" | "escaped" | "undecided"
    witness_word: Word | None = None
    witness_value: complex | None = None
    witness_seed: complex | None = None
    max_modulus_seen: float = 0.0
    depth_reached: int = 0
    n_points: int = 0
    escape_radius: float = 0.0


@dataclass
class PcbDecision:
    verdict: str                       # "yes" | "no" | "undecided"
    method: str                        # "escape-witness" | "trapping-disk" | "stable-closure" | "budget"
    report: PcbReport
    disk_center: complex | None = None
    disk_radius: float | None = None


def _cell(z: complex, tol: float) -> tuple[int, int]:
    return (math.floor(z.real / tol), math.floor(z.imag / tol))


def postcritical_orbit(gs: GeneratorSet,
                       max_depth: int = DEFAULT_MAX_DEPTH,
                       max_points: int = DEFAULT_MAX_POINTS,
                       tol_dedup: float = TOL_DEDUP) -> tuple[np.ndarray, PcbReport]:
    """Breadth-first orbit of the union of finite critical values.

    Returns every visited point (approximating the planar postcritical set)
    plus a report.  Escape past the absorbing radius stops the search with a
    replayable witness; an exhausted frontier that survives two full
    re-application sweeps is reported bounded.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    radius = gs.escape_radius()

    seeds: list[complex] = []
    for g in gs:
        seeds.extend(g.critical_values())

    points: list[complex] = []
    parent: list[int] = []      # index into points, -1 for seeds
    genidx: list[int] = []      # 1-based generator applied to parent, 0 for seeds
    cells: dict[tuple[int, int], int] = {}
    max_mod = 0.0

    def reconstruct(i: int) -> tuple[Word, complex]:
        word: list[int] = []
        while parent[i] >= 0:
            word.append(genidx[i])
            i = parent[i]
        word.reverse()
        return tuple(word), points[i]

    def admit(z: complex, par: int, gi: int) -> int | None:
        key = _cell(z, tol_dedup)
        if key in cells:
            return None
        cells[key] = len(points)
        points.append(z)
        parent.append(par)
        genidx.append(gi)
        return len(points) - 1

    frontier: list[int] = []
    for z in seeds:
        i = admit(complex(z), -1, 0)
        if i is not None:
            frontier.append(i)
            max_mod = max(max_mod, abs(z))

    def finish(verdict: str, depth: int, **kw) -> tuple[np.ndarray, PcbReport]:
        cloud = np.array(points, dtype=complex)
        rep = PcbReport(verdict=verdict, max_modulus_seen=max_mod,
                        depth_reached=depth, n_points=len(points),
                        escape_radius=radius, **kw)
        return cloud, rep

    # seeds can already be escaped
    for i in frontier:
        if abs(points[i]) > radius:
            w, seed = reconstruct(i)
            return finish("escaped", 0, witness_word=w,
                          witness_value=points[i], witness_seed=seed)

    depth = 0
    stable_rounds = 0
    while depth < max_depth:
        depth += 1
        expand = frontier if frontier else list(range(len(points)))
        new_frontier: list[int] = []
        for i in expand:
            z = points[i]
            for gi, g in enumerate(gs, start=1):
                img = complex(g(z))
                if not (math.isfinite(img.real) and math.isfinite(img.imag)):
                    img = complex(ESCAPE_SENTINEL, 0.0)
                j = admit(img, i, gi)
                if j is None:
                    continue
                mod = abs(img)
                max_mod = max(max_mod, mod)
                if mod > radius:
                    w, seed = reconstruct(j)
                    return finish("escaped", depth, witness_word=w,
                                  witness_value=img, witness_seed=seed)
                new_frontier.append(j)
                if len(points) >= max_points:
                    return finish("undecided", depth)
        if new_frontier:
            stable_rounds = 0
            frontier = new_frontier
        else:
            stable_rounds += 1
            frontier = []
            if stable_rounds >= 3:
                return finish("bounded", depth)
    return finish("undecided", depth)


def _trapping_disk(gs: GeneratorSet, cloud: np.ndarray,
                   n_boundary: int = 256) -> tuple[complex, float] | None:
    """Disk around the orbit cloud that every generator maps into itself."""
    center = complex(np.mean(cloud))
    radius = 1.05 * float(np.max(np.abs(cloud - center))) if len(cloud) > 1 else 0.0
    theta = 2.0 * np.pi * np.arange(n_boundary) / n_boundary
    ring = center + radius * np.exp(1j * theta)
    for g in gs:
        if np.max(np.abs(g(ring) - center)) > radius:
            return None
    return center, radius


def is_postcritically_bounded(gs: GeneratorSet,
                              max_depth: int = DEFAULT_MAX_DEPTH,
                              max_points: int = DEFAULT_MAX_POINTS,
                              tol_dedup: float = TOL_DEDUP) -> PcbDecision:
    """Tri-state decision: escaped orbits certify No, stable orbits Yes."""
    cloud, rep = postcritical_orbit(gs, max_depth, max_points, tol_dedup)
    if rep.verdict == "escaped":
        return PcbDecision("no", "escape-witness", rep)
    if rep.verdict == "bounded":
        disk = _trapping_disk(gs, cloud)
        if disk is not None:
            return PcbDecision("yes", "trapping-disk", rep,
                               disk_center=disk[0], disk_radius=disk[1])
        # the orbit closure itself is stable at the dedup tolerance: every
        # generator image of every orbit point landed in an existing cell
        return PcbDecision("yes", "stable-closure", rep)
    return PcbDecision("undecided", "budget", rep)
