"""The norm ||(z1, z2)||_A = ||z1 A1 + z2 A2||_op on C^2 and its dual."""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from . import kernels, sphere
from .errors import InvalidPair, ShapeError
from .linalg import DEFAULT_TOL, as_cmat, as_cvec2, matrix_unit, op_norm, opnorm2

__all__ = [
    "MatrixPair",
    "a_norm",
    "in_unit_ball",
    "dual_norm_numeric",
    "dual_norm_parabola",
    "dual_parabola_branch",
    "boundary_sample",
    "to_boundary",
    "DualNormOracle",
    "dual_oracle",
    "dual_ratio_sup",
]

INDEPENDENCE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MatrixPair:
    """An ordered pair of square matrices of equal size defining a norm on C^2."""

    A1: np.ndarray
    A2: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        A1 = as_cmat(self.A1, "A1").copy()
        A2 = as_cmat(self.A2, "A2").copy()
        if A1.shape != A2.shape:
            raise ShapeError(f"A1 and A2 differ in shape: {A1.shape} vs {A2.shape}")
        if A1.shape[0] != A1.shape[1]:
            raise ShapeError(f"A1 and A2 must be square, got {A1.shape}")
        cols = np.stack([A1.reshape(-1), A2.reshape(-1)], axis=1)
        smin = np.linalg.svd(cols, compute_uv=False)[-1]
        if smin <= INDEPENDENCE_TOL:
            raise InvalidPair(f"A1 and A2 are linearly dependent (smallest singular value {smin:.3g})")
        A1.setflags(write=False)
        A2.setflags(write=False)
        object.__setattr__(self, "A1", A1)
        object.__setattr__(self, "A2", A2)
        object.__setattr__(self, "n", A1.shape[0])

    @classmethod
    def bidisc(cls) -> "MatrixPair":
        return cls(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))

    @classmethod
    def parabola(cls) -> "MatrixPair":
        """(I, E12), whose unit ball is |z1|^2 + |z2| < 1."""
        return cls(np.eye(2), matrix_unit(1, 2))

    @classmethod
    def euclidean(cls) -> "MatrixPair":
        return cls(np.diag([1.0, 0.0]), matrix_unit(1, 2))

    def transpose(self) -> "MatrixPair":
        return MatrixPair(self.A1.T, self.A2.T)

    def pencil(self, z1: complex, z2: complex) -> np.ndarray:
        return z1 * self.A1 + z2 * self.A2

    def key(self) -> bytes:
        return self.A1.tobytes() + self.A2.tobytes()

    def allclose(self, other: "MatrixPair", tol: float = 1e-10) -> bool:
        return (
            self.A1.shape == other.A1.shape
            and float(np.max(np.abs(self.A1 - other.A1))) <= tol
            and float(np.max(np.abs(self.A2 - other.A2))) <= tol
        )

    def __repr__(self):
        return f"MatrixPair(A1={self.A1.tolist()}, A2={self.A2.tolist()})"


def _scalar_norm_fn(pair: MatrixPair):
    """Fast scalar evaluator (d1, d2) -> ||d1 A1 + d2 A2||."""
    if pair.n == 2:
        a00, a01, a10, a11 = (complex(x) for x in pair.A1.reshape(-1))
        b00, b01, b10, b11 = (complex(x) for x in pair.A2.reshape(-1))

        def f(d1, d2):
            return opnorm2(d1 * a00 + d2 * b00, d1 * a01 + d2 * b01, d1 * a10 + d2 * b10, d1 * a11 + d2 * b11)

        return f
    A1, A2 = pair.A1, pair.A2
    return lambda d1, d2: op_norm(d1 * A1 + d2 * A2)


def a_norm(pair: MatrixPair, z) -> float:
    z = as_cvec2(z, "z")
    return op_norm(pair.pencil(z[0], z[1]))


def in_unit_ball(pair: MatrixPair, z, tol: float = DEFAULT_TOL) -> bool:
    return a_norm(pair, z) < 1.0 + tol


def to_boundary(pair: MatrixPair, d) -> np.ndarray:
    """Rescale a nonzero direction onto the unit sphere of the A-norm."""
    d = as_cvec2(d, "direction")
    return d / a_norm(pair, d)


def boundary_sample(pair: MatrixPair, count: int, seed: int = 0) -> list[np.ndarray]:
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        d = rng.normal(size=2) + 1j * rng.normal(size=2)
        if np.linalg.norm(d) > 1e-8:
            out.append(to_boundary(pair, d))
    return out


def dual_parabola_branch(w) -> str:
    w = as_cvec2(w, "w")
    return "quadratic" if abs(w[1]) >= abs(w[0]) / 2 and abs(w[1]) > 0 else "linear"


def dual_norm_parabola(w) -> float:
    """Closed-form dual norm for the pair (I, E12)."""
    w = as_cvec2(w, "w")
    m1, m2 = abs(w[0]), abs(w[1])
    if m2 > 0 and m2 >= m1 / 2:
        return (m1 * m1 + 4.0 * m2 * m2) / (4.0 * m2)
    return m1


class DualNormOracle:
    """Support-function evaluator for the dual norm of one pair.

    Holds the A-unit-sphere sampled on a (t, phi) table; ``coarse`` scans that
    table and ``precise`` refines the table argmax by pattern search.
    """

    def __init__(self, pair: MatrixPair, nt: int = 129, nphi: int = 257, tol: float = 1e-10):
        self.pair = pair
        self.nt, self.nphi, self.tol = nt, nphi, tol
        T, P, d1, d2 = sphere.sphere_grid(nt, nphi)
        a = kernels.pencil_norms(pair.A1, pair.A2, d1, d2)
        self.T, self.P = T, P
        self.b1 = d1 / a
        self.b2 = d2 / a
        self.step_t = sphere.HALF_PI / (nt - 1)
        self.step_phi = sphere.TWO_PI / nphi
        self._norm = _scalar_norm_fn(pair)
        # every other row and column, for seeding outer searches cheaply
        self.s1 = np.ascontiguousarray(self.b1.reshape(nt, nphi)[::2, ::2]).reshape(-1)
        self.s2 = np.ascontiguousarray(self.b2.reshape(nt, nphi)[::2, ::2]).reshape(-1)

    def coarse(self, e1, e2, subsample: bool = False) -> np.ndarray:
        """Table lower bound for the dual norm at each (e1[i], e2[i])."""
        b1, b2 = (self.s1, self.s2) if subsample else (self.b1, self.b2)
        vals, _ = kernels.support_max(np.atleast_1d(e1), np.atleast_1d(e2), b1, b2)
        return vals

    def precise(self, w) -> float:
        w1, w2 = complex(w[0]), complex(w[1])
        if w1 == 0 and w2 == 0:
            return 0.0
        vals, idx = kernels.support_max(np.array([w1]), np.array([w2]), self.b1, self.b2)
        k = int(idx[0])
        t0, phi0 = float(self.T[k]), float(self.P[k])
        i = k // self.nphi
        if i == 0 or i == self.nt - 1:
            ring = slice(self.nphi, 2 * self.nphi) if i == 0 else slice((self.nt - 2) * self.nphi, (self.nt - 1) * self.nphi)
            _, j = kernels.support_max(np.array([w1]), np.array([w2]), self.b1[ring], self.b2[ring])
            phi0 = float(self.P[ring][int(j[0])])
        if self.pair.n == 2:
            value, _, _ = kernels.support_refine(
                w1, w2, self.pair.A1, self.pair.A2, t0, phi0, self.step_t, self.step_phi, self.tol
            )
        else:
            norm = self._norm

            def f(t, phi):
                c = math.cos(t)
                s = complex(math.cos(phi), math.sin(phi)) * math.sin(t)
                return abs(w1 * c + w2 * s) / norm(c, s)

            value = sphere.refine(f, t0, phi0, self.step_t, self.step_phi, self.tol).value
        return max(float(vals[0]), value)


_ORACLES: "OrderedDict[tuple, DualNormOracle]" = OrderedDict()


def dual_oracle(pair: MatrixPair, nt: int = 129, nphi: int = 257) -> DualNormOracle:
    """Cached oracle per (pair, grid); the table is the expensive part."""
    key = (pair.key(), pair.n, nt, nphi)
    orc = _ORACLES.get(key)
    if orc is None:
        orc = DualNormOracle(pair, nt, nphi)
        _ORACLES[key] = orc
        if len(_ORACLES) > 32:
            _ORACLES.popitem(last=False)
    else:
        _ORACLES.move_to_end(key)
    return orc


def dual_norm_numeric(pair: MatrixPair, w) -> float:
    """sup over nonzero d of |w1 d1 + w2 d2| / ||d||_A."""
    w = as_cvec2(w, "w")
    return dual_oracle(pair).precise(w)


def dual_ratio_sup(pair: MatrixPair, numer_vec, numer_scalar, nt: int = 65, nphi: int = 129, top_k: int = 3,
                   tol: float = 1e-7) -> sphere.SphereMax:
    """sup over nonzero e of numer(e) / ||e||_A* for a 1-homogeneous numerator.

    The grid uses the coarse table dual; the best seeds are refined with the
    precise dual. The returned value is the refined one.
    """
    orc = dual_oracle(pair)
    T, P, e1, e2 = sphere.sphere_grid(nt, nphi)
    num = np.asarray(numer_vec(e1, e2), dtype=float)
    if not np.any(num > 0):
        return sphere.SphereMax(0.0, 0.0, 0.0)
    den = orc.coarse(e1, e2, subsample=True)
    ratio = num / den
    step_t = sphere.HALF_PI / (nt - 1)
    step_phi = sphere.TWO_PI / nphi

    def f(t, phi):
        c = math.cos(t)
        s = complex(math.cos(phi), math.sin(phi)) * math.sin(t)
        return numer_scalar(c, s) / orc.precise((c, s))

    best = None
    for idx in sphere.top_indices(ratio, nt, nphi, top_k):
        t0, phi0 = sphere.seed_angles(ratio, T, P, nt, nphi, idx)
        r = sphere.refine(f, t0, phi0, step_t, step_phi, tol)
        if best is None or r.value > best.value:
            best = r
    return best
