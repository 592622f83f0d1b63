"""Maximization over the unit sphere of C^2 modulo a global phase.

A unit vector is written d = (cos t, e^{i phi} sin t) with t in [0, pi/2] and
phi in [0, 2 pi). Objectives that only depend on d up to a unimodular factor
are maximized by a coarse (t, phi) grid, non-maximum suppression to pick a few
well separated seeds, and a pattern search that runs a bounded golden-section
line search along a fixed set of directions, shrinking the bracket as the
iterate settles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_DIRECTIONS = ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0))
LINE_REL_TOL = 1e-3
SHRINK_MIN = 0.05


@dataclass(frozen=True)
class SphereMax:
    value: float
    t: float
    phi: float

    @property
    def point(self) -> np.ndarray:
        return sphere_point(self.t, self.phi)


def sphere_point(t: float, phi: float) -> np.ndarray:
    return np.array([math.cos(t), complex(math.cos(phi), math.sin(phi)) * math.sin(t)])


def sphere_grid(nt: int, nphi: int):
    """Return (t, phi, d1, d2) flattened in row-major (t, phi) order."""
    t = np.linspace(0.0, HALF_PI, nt)
    phi = np.arange(nphi) * (TWO_PI / nphi)
    T, P = np.meshgrid(t, phi, indexing="ij")
    T = T.reshape(-1)
    P = P.reshape(-1)
    d1 = np.cos(T).astype(np.complex128)
    d2 = np.exp(1j * P) * np.sin(T)
    return T, P, d1, d2


def to_angles(d) -> tuple[float, float]:
    """Inverse of :func:`sphere_point` up to global phase (d must be nonzero)."""
    d = np.asarray(d, dtype=np.complex128)
    d = d / np.linalg.norm(d)
    a, b = abs(d[0]), abs(d[1])
    t = math.atan2(b, a)
    phi = 0.0
    if a > 0 and b > 0:
        phi = float(np.angle(d[1] / d[0])) % TWO_PI
    elif b > 0:
        phi = float(np.angle(d[1])) % TWO_PI
    return t, phi


def golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float, f0: float | None = None):
    """Bounded golden-section maximization of a scalar function on [lo, hi].

    Returns the best (x, value) among the interior search and the two endpoints;
    if ``f0`` is given it is the known value at x=0 and is included as well.
    """
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    best_x, best_v = (c, fc) if fc >= fd else (d, fd)
    for x in (lo, hi):
        v = f(x)
        if v > best_v:
            best_x, best_v = x, v
    if f0 is not None and f0 >= best_v:
        return 0.0, f0
    return best_x, best_v


def refine(
    f: Callable[[float, float], float],
    t0: float,
    phi0: float,
    step_t: float,
    step_phi: float,
    tol: float = 1e-10,
    max_cycles: int = 40,
) -> SphereMax:
    """Pattern search with golden-section line searches from (t0, phi0).

    Each cycle line-searches the four directions over [-1, 1] times the current
    step (to a relative accuracy of 1e-3 of the bracket); the step shrinks once
    the iterate stops moving by more than half a step, and the search ends when
    the step in parameter space falls below ``tol``.
    """
    t, phi = t0, phi0
    val = f(t, phi)
    scale = 1.0
    hmax = max(step_t, step_phi)
    for _ in range(max_cycles):
        moved = 0.0
        line_tol = max(LINE_REL_TOL, tol / hmax / scale)
        for dt, dp in _DIRECTIONS:
            ht, hp = dt * step_t * scale, dp * step_phi * scale

            def line(s, t=t, phi=phi, ht=ht, hp=hp):
                return f(min(max(t + s * ht, 0.0), HALF_PI), phi + s * hp)

            s, v = golden_max(line, -1.0, 1.0, line_tol, f0=val)
            # ignore gains at rounding level, otherwise flat directions never settle
            if s != 0.0 and v > val + 4e-16 * max(1.0, abs(val)):
                t = min(max(t + s * ht, 0.0), HALF_PI)
                phi = (phi + s * hp) % TWO_PI
                val = v
                moved = max(moved, abs(s))
        if moved < 0.5:
            scale *= max(SHRINK_MIN, 4.0 * moved)
        if scale * hmax < tol:
            break
    return SphereMax(val, t, phi % TWO_PI)


def top_indices(values: np.ndarray, nt: int, nphi: int, k: int, radius: int = 2) -> list[int]:
    """Indices of the k largest grid values, suppressing neighbours within ``radius`` cells.

    A pole row (t = 0 or t = pi/2) is a single point of the sphere, so all of
    its entries count as neighbours of each other.
    """
    order = np.argsort(-values, kind="stable")
    picked: list[tuple[int, int]] = []
    out: list[int] = []
    for flat in order:
        i, j = divmod(int(flat), nphi)
        ok = True
        for pi, pj in picked:
            dj = min(abs(j - pj), nphi - abs(j - pj))
            if i == pi and i in (0, nt - 1):
                dj = 0
            if abs(i - pi) <= radius and dj <= radius:
                ok = False
                break
        if ok:
            picked.append((i, j))
            out.append(int(flat))
            if len(out) == k:
                break
    return out


def seed_angles(values: np.ndarray, T: np.ndarray, P: np.ndarray, nt: int, nphi: int, idx: int):
    """(t, phi) to start refinement from grid index ``idx``.

    At a pole phi carries no information, so it is taken from the best entry
    of the adjacent ring instead.
    """
    i = idx // nphi
    if i == 0 or i == nt - 1:
        ring = 1 if i == 0 else nt - 2
        j = int(np.argmax(values[ring * nphi:(ring + 1) * nphi]))
        return float(T[idx]), float(P[ring * nphi + j])
    return float(T[idx]), float(P[idx])


def maximize(
    fvec: Callable[[np.ndarray, np.ndarray], np.ndarray],
    fscalar: Callable[[complex, complex], float],
    nt: int = 129,
    nphi: int = 257,
    top_k: int = 3,
    tol: float = 1e-10,
    max_cycles: int = 40,
) -> SphereMax:
    """Maximize an objective of a unit vector d in C^2 (phase-invariant).

    ``fvec(d1, d2)`` evaluates on arrays for the grid; ``fscalar(d1, d2)`` on
    scalars for the refinement.
    """
    T, P, d1, d2 = sphere_grid(nt, nphi)
    vals = np.asarray(fvec(d1, d2), dtype=float)
    step_t = HALF_PI / (nt - 1)
    step_phi = TWO_PI / nphi

    def f(t, phi):
        return fscalar(math.cos(t), complex(math.cos(phi), math.sin(phi)) * math.sin(t))

    best = None
    for idx in top_indices(vals, nt, nphi, top_k):
        t0, phi0 = seed_angles(vals, T, P, nt, nphi, idx)
        r = refine(f, t0, phi0, step_t, step_phi, tol, max_cycles)
        if r.value < vals[idx]:
            r = SphereMax(float(vals[idx]), float(T[idx]), float(P[idx]))
        if best is None or r.value > best.value:
            best = r
    return best
