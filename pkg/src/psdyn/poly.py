"""Dense complex polynomials and the operations the dynamics is built on.

Polynomials are stored as ascending coefficient arrays (c0 .. cd).  Root
finding uses simultaneous Aberth-Ehrlich iteration with Newton polishing,
which converges for all roots at once; that matters because inverse-branch
sampling needs every preimage, not just one.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

# Magnitudes beyond this are treated as escaped to infinity; keeps NaNs out
# of orbit loops.
ESCAPE_SENTINEL = 1e150

# Explicit composition is refused beyond these caps; callers fall back to
# pointwise word evaluation.
MAX_COMPOSE_DEGREE = 4096
COEFF_CAP = 1e150

TOL_ROOT = 1e-12
TOL_MERGE = 1e-8
ROOT_MAX_ITER = 200


class PolyError(Exception):
    """Base class for polynomial-layer failures."""


class CoefficientOverflow(PolyError):
    """Composition would exceed the degree or coefficient-magnitude cap."""


class NoConvergence(PolyError):
    """Root residuals failed the tolerance test after the iteration budget."""


def _trim(coeffs: np.ndarray) -> np.ndarray:
    n = len(coeffs)
    while n > 1 and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


class Polynomial:
    """Immutable dense polynomial with complex coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex]):
        arr = _trim(np.asarray(list(coeffs), dtype=complex))
        if arr.size == 0:
            raise ValueError("polynomial needs at least one coefficient")
        if arr.size > 1 and arr[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        self.coeffs = arr
        self.coeffs.setflags(write=False)

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> complex:
        return complex(self.coeffs[-1])

    def log_leading_magnitude(self) -> float:
        return math.log(abs(self.coeffs[-1]))

    @property
    def power(self) -> int:
        # Uniform protocol with IteratedPolynomial: apply self once.
        return 1

    @property
    def base(self) -> "Polynomial":
        return self

    def __call__(self, z):
        """Horner evaluation; works on scalars and numpy arrays."""
        if isinstance(z, np.ndarray):
            acc = np.full(z.shape, self.coeffs[-1], dtype=complex)
            for c in self.coeffs[-2::-1]:
                acc = acc * z + c
            return acc
        zz = complex(z)
        acc = complex(self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            acc = acc * zz + c
        return acc

    def __eq__(self, other):
        return isinstance(other, Polynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"

    # -- calculus and algebra ---------------------------------------------

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial([0.0])
        d = np.arange(1, len(self.coeffs))
        return Polynomial(self.coeffs[1:] * d)

    def derivative_value(self, z) -> complex:
        return self.derivative()(z)

    def compose(self, inner: "Polynomial", max_degree: int = MAX_COMPOSE_DEGREE,
                coeff_cap: float = COEFF_CAP) -> "Polynomial":
        """self(inner(z)) with explicit coefficients.

        Raises CoefficientOverflow past the degree or magnitude cap; the
        caller should switch to pointwise word evaluation in that case.
        """
        if self.degree * max(inner.degree, 1) > max_degree:
            raise CoefficientOverflow(
                f"composed degree {self.degree * inner.degree} exceeds cap {max_degree}")
        acc = np.array([self.coeffs[-1]], dtype=complex)
        for c in self.coeffs[-2::-1]:
            acc = np.convolve(acc, inner.coeffs)
            acc[0] += c
            if np.max(np.abs(acc)) > coeff_cap:
                raise CoefficientOverflow("coefficient magnitude beyond cap")
        return Polynomial(acc)

    # -- roots --------------------------------------------------------------

    def roots(self, tol: float = TOL_ROOT, max_iter: int = ROOT_MAX_ITER) -> list[complex]:
        """All deg(p) roots with multiplicity (Aberth-Ehrlich + polishing).

        Each result r satisfies |p(r)| <= tol * (1+|r|)^deg * max|c_i|.
        Raises NoConvergence if that residual test cannot be met.
        """
        if self.degree < 1:
            raise ValueError("constant polynomial has no roots to find")
        return _all_roots(self.coeffs, tol, max_iter)

    def preimages(self, w: complex, tol: float = TOL_ROOT) -> list[complex]:
        """The deg(p) solutions of p(z) = w."""
        shifted = self.coeffs.copy()
        shifted[0] -= w
        shifted = _trim(shifted)
        if len(shifted) == 1:
            # p - w collapsed to a constant: p was constant, disallowed upstream
            raise ValueError("cannot take preimages under a constant polynomial")
        return _all_roots(shifted, tol, ROOT_MAX_ITER)

    def critical_values(self, tol_merge: float = TOL_MERGE) -> list[complex]:
        """Finite critical values {p(c) : p'(c)=0}, duplicates merged."""
        if self.degree < 2:
            raise ValueError("critical values need degree >= 2")
        crit = self.derivative().roots()
        return _merge_close([self(c) for c in crit], tol_merge)

    # -- structure ----------------------------------------------------------

    def shifted_monomial_form(self, rtol: float = 1e-12):
        """Detect p(z) = a(z-b)^d + c; return (a, b, c) or None.

        Inverse branches of this form have a closed form, which the
        backward-orbit sampler exploits.
        """
        d = self.degree
        a = self.leading_coefficient
        if d < 1:
            return None
        if d == 1:
            return (a, 0.0 + 0j, complex(self.coeffs[0]))
        b = -self.coeffs[-2] / (d * a)
        cand = shifted_monomial(a, b, d, 0.0)
        c = complex(self.coeffs[0] - cand.coeffs[0])
        scale = max(np.max(np.abs(self.coeffs)), 1e-300)
        full = cand.coeffs.copy()
        full[0] += c
        if np.max(np.abs(full - self.coeffs)) <= rtol * scale:
            return (a, complex(b), c)
        return None


class IteratedPolynomial:
    """The power-fold self-composition of a base polynomial, kept in
    factored form so that words with huge composed degree are evaluated
    pointwise instead of through an explicit coefficient blowup."""

    __slots__ = ("base", "power")

    def __init__(self, base: Polynomial, power: int):
        if power < 1:
            raise ValueError("power must be >= 1")
        self.base = base
        self.power = power

    @property
    def degree(self) -> int:
        return self.base.degree ** self.power

    def log_leading_magnitude(self) -> float:
        d = self.base.degree
        if d == 1:
            return self.power * self.base.log_leading_magnitude()
        exponent = (d ** self.power - 1) / (d - 1)
        return exponent * self.base.log_leading_magnitude()

    @property
    def leading_coefficient(self) -> complex:
        # May over/underflow for large powers; prefer log_leading_magnitude.
        d = self.base.degree
        exponent = (d ** self.power - 1) // (d - 1) if d > 1 else self.power
        return self.base.leading_coefficient ** exponent

    def __call__(self, z):
        for _ in range(self.power):
            z = self.base(z)
        return z

    def derivative_value(self, z) -> complex:
        acc = 1.0 + 0j
        cur = z
        dbase = self.base.derivative()
        for _ in range(self.power):
            acc *= dbase(cur)
            cur = self.base(cur)
        return acc

    def preimages(self, w: complex, tol: float = TOL_ROOT) -> list[complex]:
        level = [complex(w)]
        for _ in range(self.power):
            level = [z for v in level for z in self.base.preimages(v, tol)]
        return level

    def critical_values(self, tol_merge: float = TOL_MERGE) -> list[complex]:
        # CV*(h^p) = { h^j(v) : v in CV*(h), 0 <= j < p }
        vals = []
        for v in self.base.critical_values(tol_merge):
            cur = v
            for _ in range(self.power):
                vals.append(cur)
                cur = self.base(cur)
        return _merge_close(vals, tol_merge)

    def to_polynomial(self, max_degree: int = MAX_COMPOSE_DEGREE) -> Polynomial:
        out = self.base
        for _ in range(self.power - 1):
            out = self.base.compose(out, max_degree=max_degree)
        return out

    def shifted_monomial_form(self, rtol: float = 1e-12):
        return self.base.shifted_monomial_form(rtol)

    def __repr__(self):
        return f"IteratedPolynomial({self.base!r}, power={self.power})"

    def __eq__(self, other):
        return (isinstance(other, IteratedPolynomial)
                and self.power == other.power and self.base == other.base)

    def __hash__(self):
        return hash((self.base, self.power))


Generator = Polynomial | IteratedPolynomial


def shifted_monomial(a: complex, b: complex, d: int, c: complex) -> Polynomial:
    """Build a(z-b)^d + c in coefficient form (binomial expansion)."""
    coeffs = np.zeros(d + 1, dtype=complex)
    for k in range(d + 1):
        coeffs[k] = a * math.comb(d, k) * (-b) ** (d - k)
    coeffs[0] += c
    return Polynomial(coeffs)


def _merge_close(values: Sequence[complex], tol: float) -> list[complex]:
    merged: list[complex] = []
    for v in values:
        for i, m in enumerate(merged):
            if abs(v - m) <= tol:
                break
        else:
            merged.append(complex(v))
    return merged


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

def _horner_vec(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full(z.shape, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def _residual_ok(coeffs: np.ndarray, roots: np.ndarray, tol: float) -> bool:
    deg = len(coeffs) - 1
    scale = np.max(np.abs(coeffs))
    vals = np.abs(_horner_vec(coeffs, roots))
    bound = tol * (1.0 + np.abs(roots)) ** deg * scale
    return bool(np.all(vals <= bound))


def _quadratic_roots(c0: complex, c1: complex, c2: complex) -> list[complex]:
    disc = np.sqrt(complex(c1 * c1 - 4.0 * c2 * c0))
    # pick the sign avoiding cancellation
    if (np.conj(c1) * disc).real > 0:
        q = -0.5 * (c1 + disc)
    else:
        q = -0.5 * (c1 - disc)
    if q == 0:
        r = -c1 / (2.0 * c2)
        return [complex(r), complex(r)]
    return [complex(q / c2), complex(c0 / q)]


def _root_radius(coeffs: np.ndarray) -> float:
    # Fujiwara bound: robust even when the leading coefficient is tiny
    # (e.g. coefficients of high iterates), where the classical Cauchy
    # bound overflows.
    deg = len(coeffs) - 1
    lead = abs(coeffs[-1])
    kk = np.arange(1, deg + 1)
    ratios = np.abs(coeffs[-2::-1]) / lead
    with np.errstate(divide="ignore"):
        bounds = ratios ** (1.0 / kk)
    return 2.0 * float(np.max(bounds)) + 1e-9


def _aberth(coeffs: np.ndarray, tol: float, max_iter: int, attempt: int) -> np.ndarray:
    deg = len(coeffs) - 1
    dcoeffs = coeffs[1:] * np.arange(1, deg + 1)
    radius = _root_radius(coeffs)
    k = np.arange(deg)
    # mild spiral + per-attempt rotation breaks symmetric deadlocks
    theta = 2.0 * np.pi * (k + 0.35 + 0.17 * attempt) / deg + 0.01 * k / deg
    z = radius * np.exp(1j * theta)
    fallback = 0.5 * radius * np.exp(1j * (theta + 0.5))
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            pv = _horner_vec(coeffs, z)
            pd = _horner_vec(dcoeffs, z)
            pd = np.where(pd == 0, 1e-300, pd)
            w = pv / pd
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            s = np.sum(1.0 / diff, axis=1) - 1.0  # drop the filled diagonal term
            denom = 1.0 - w * s
            denom = np.where(denom == 0, 1e-300, denom)
            corr = w / denom
            z = z - corr
            bad = ~np.isfinite(z)
            if np.any(bad):
                z = np.where(bad, fallback, z)
            if np.max(np.abs(corr)) < tol * (1.0 + np.max(np.abs(z))):
                break
    return z


def _newton_polish(coeffs: np.ndarray, roots: np.ndarray, steps: int = 3) -> np.ndarray:
    deg = len(coeffs) - 1
    dcoeffs = coeffs[1:] * np.arange(1, deg + 1)
    z = roots.copy()
    for _ in range(steps):
        pv = _horner_vec(coeffs, z)
        pd = _horner_vec(dcoeffs, z)
        step = np.where(pd != 0, pv / np.where(pd == 0, 1.0, pd), 0.0)
        cand = z - step
        better = np.abs(_horner_vec(coeffs, cand)) <= np.abs(pv)
        z = np.where(better, cand, z)
    return z


def _all_roots(coeffs: np.ndarray, tol: float, max_iter: int) -> list[complex]:
    coeffs = np.asarray(coeffs, dtype=complex)
    # peel off exact zero roots so multiple roots at 0 come out exactly
    nzero = 0
    while nzero < len(coeffs) - 1 and coeffs[nzero] == 0:
        nzero += 1
    work = coeffs[nzero:]
    deg = len(work) - 1
    found: np.ndarray
    if deg == 0:
        found = np.empty(0, dtype=complex)
    elif deg == 1:
        found = np.array([-work[0] / work[1]])
    elif deg == 2:
        found = np.array(_quadratic_roots(work[0], work[1], work[2]))
    else:
        found = None
        for attempt in range(3):
            cand = _aberth(work, tol, max_iter, attempt)
            cand = _newton_polish(work, cand)
            if _residual_ok(work, cand, tol):
                found = cand
                break
        if found is None:
            raise NoConvergence(
                f"root residuals above tolerance after {max_iter} iterations x3 attempts")
    if deg >= 1 and not _residual_ok(work, found, tol):
        raise NoConvergence("root residuals above tolerance")
    out = [0j] * nzero + list(found)
    out.sort(key=lambda r: (r.real, r.imag))
    return [complex(r) for r in out]


# ---------------------------------------------------------------------------
# Plain-text coefficient form: whitespace-separated "re,im" ascending degree
# ---------------------------------------------------------------------------

def parse_polynomial(text: str) -> Polynomial:
    coeffs = []
    for token in text.split():
        re_s, im_s = token.split(",")
        coeffs.append(complex(float(re_s), float(im_s)))
    return Polynomial(coeffs)


def format_polynomial(p: Polynomial) -> str:
    return " ".join(f"{c.real!r},{c.imag!r}" for c in p.coeffs)
