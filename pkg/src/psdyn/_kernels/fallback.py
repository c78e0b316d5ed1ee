"""Pure-numpy implementations of the hot kernels.

Selected at import time when the compiled extension is unavailable (or when
PSDYN_PURE_PYTHON=1).  The compiled extension mirrors these semantics
operation for operation, so either backend yields the same classifications.
"""

from __future__ import annotations

import numpy as np

NOT_ESCAPED = np.uint16(0xFFFF)
_STAGNATION_SQ = 1e-28
_CHECK_EVERY = 16


def word_escape_counts(zr: np.ndarray, zi: np.ndarray,
                       coeffs_list: list[np.ndarray], powers: np.ndarray,
                       letters: np.ndarray, r2: float,
                       max_iter: int) -> np.ndarray:
    """Escape iteration counts for repeated application of one word.

    Each iteration applies the whole word (letters in order, each letter's
    base polynomial `power` times).  A point escapes when |z|^2 > r2 or the
    value stops being finite; points that stagnate (movement below 1e-14
    between 16-iteration snapshots) are declared non-escaping early.
    Returns 1-based escape iterations, NOT_ESCAPED where the cap was hit.
    """
    z = zr.astype(np.float64) + 1j * zi.astype(np.float64)
    n = z.size
    counts = np.full(n, NOT_ESCAPED, dtype=np.uint16)
    active = np.arange(n)
    cur = z.copy()
    snap = z.copy()
    for it in range(1, max_iter + 1):
        w = cur[active]
        escaped = np.zeros(len(active), dtype=bool)
        for li in letters:
            coeffs = coeffs_list[li]
            for _ in range(powers[li]):
                acc = np.full(w.shape, coeffs[-1], dtype=complex)
                for c in coeffs[-2::-1]:
                    acc = acc * w + c
                w = acc
            with np.errstate(invalid="ignore", over="ignore"):
                mag2 = w.real * w.real + w.imag * w.imag
            escaped |= ~np.isfinite(mag2) | (mag2 > r2)
        counts[active[escaped]] = it
        stay = ~escaped
        if it % _CHECK_EVERY == 0:
            with np.errstate(invalid="ignore", over="ignore"):
                dz = w - snap[active]
                moved2 = dz.real * dz.real + dz.imag * dz.imag
            stagnant = stay & np.isfinite(moved2) & (moved2 < _STAGNATION_SQ)
            stay &= ~stagnant
            snap[active] = w
        cur[active] = w
        active = active[stay]
        if active.size == 0:
            break
    return counts


def monomial_chaos(params: np.ndarray, degrees: np.ndarray, powers: np.ndarray,
                   gen_choice: np.ndarray, branch_u: np.ndarray,
                   z0: complex) -> np.ndarray:
    """Backward-orbit ensemble for shifted-monomial generators a(z-b)^d + c.

    params: (m, 3) complex rows (a, b, c); gen_choice: (steps, chains) int;
    branch_u: (steps, chains, max_power) uniforms in [0,1).  Every chain
    starts at z0; returns all post-step values, shape (steps, chains).
    """
    steps, chains = gen_choice.shape
    out = np.empty((steps, chains), dtype=complex)
    z = np.full(chains, complex(z0), dtype=complex)
    two_pi = 2.0 * np.pi
    for t in range(steps):
        choice = gen_choice[t]
        for gi in range(len(degrees)):
            mask = choice == gi
            if not np.any(mask):
                continue
            a, b, c = params[gi]
            d = int(degrees[gi])
            w = z[mask]
            for level in range(int(powers[gi])):
                u = (w - c) / a
                r = np.hypot(u.real, u.imag)
                th = np.arctan2(u.imag, u.real)
                k = np.floor(branch_u[t, mask, level] * d)
                ang = (th + two_pi * k) / d
                w = b + r ** (1.0 / d) * (np.cos(ang) + 1j * np.sin(ang))
            z[mask] = w
        out[t] = z
    return out
