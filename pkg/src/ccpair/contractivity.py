"""Contractivity of the linear maps w -> w1 V1 + w2 V2 out of the dual-normed C^2.

Besides the level-1 norm ``lv_norm`` and the level-n lower bound ``cc_bound``,
this module evaluates the extremal function

    g(beta) = 1 - u^2 |A1* beta|^2 - v^2 |A2* beta|^2 + u^2 v^2 c(beta),
    c(beta) = |A1* beta|^2 |A2* beta|^2 - |<A1 A2* beta, beta>|^2,

whose infimum over unit beta decides contractivity of the row-vector map
V1 = (u, 0), V2 = (0, v).
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from . import kernels, sphere
from .anorm import MatrixPair, a_norm, dual_ratio_sup
from .errors import DimensionError, ShapeError
from .linalg import DEFAULT_TOL, as_cmat, kron, op_norm, top_singular

__all__ = [
    "VPair",
    "UVParams",
    "GEval",
    "lv_norm",
    "cc_bound",
    "rowvec_cc_bound",
    "g_eval",
    "g_terms",
    "inf_g",
    "is_contractive_uv",
    "uv_direct_sup",
    "testfn_sup",
]


@dataclass(frozen=True, eq=False)
class VPair:
    V1: np.ndarray
    V2: np.ndarray
    p: int = field(init=False)
    q: int = field(init=False)

    def __post_init__(self):
        V1 = as_cmat(self.V1, "V1").copy()
        V2 = as_cmat(self.V2, "V2").copy()
        if V1.shape != V2.shape:
            raise ShapeError(f"V1 and V2 differ in shape: {V1.shape} vs {V2.shape}")
        V1.setflags(write=False)
        V2.setflags(write=False)
        object.__setattr__(self, "V1", V1)
        object.__setattr__(self, "V2", V2)
        object.__setattr__(self, "p", V1.shape[0])
        object.__setattr__(self, "q", V1.shape[1])

    @classmethod
    def uv(cls, u: float, v: float) -> "VPair":
        """The row-vector ansatz V1 = (u, 0), V2 = (0, v)."""
        return cls([[u, 0.0]], [[0.0, v]])

    def is_zero(self) -> bool:
        return not (np.any(self.V1) or np.any(self.V2))

    def transformed(self, p, q, r, s) -> "VPair":
        """(p V1 + q V2, r V1 + s V2): the V seen by the pair before a linear move."""
        return VPair(p * self.V1 + q * self.V2, r * self.V1 + s * self.V2)

    def __repr__(self):
        return f"VPair(V1={self.V1.tolist()}, V2={self.V2.tolist()})"


@dataclass(frozen=True)
class UVParams:
    u: float
    v: float

    def __post_init__(self):
        for name in ("u", "v"):
            x = float(getattr(self, name))
            if not math.isfinite(x) or x < 0:
                raise ValueError(f"{name} must be a finite nonnegative real, got {x}")
            object.__setattr__(self, name, x)

    def as_vpair(self) -> VPair:
        return VPair.uv(self.u, self.v)


@dataclass(frozen=True, eq=False)
class GEval:
    value: float
    beta: np.ndarray
    schwarz_gap: float


# -- level-1 and level-n norms ---------------------------------------------------------


def _lv_bidual(pair: MatrixPair, V: VPair) -> float:
    """sup over unit x, y of ||(y* V1 x, y* V2 x)||_A, for V with p or q equal to 1."""
    if V.p == 1 and V.q == 1:
        return a_norm(pair, (V.V1[0, 0], V.V2[0, 0]))
    if V.p == 1:
        r1, r2 = V.V1[0], V.V2[0]
        conj = False
    else:
        r1, r2 = V.V1[:, 0], V.V2[:, 0]
        conj = True
    r1 = [complex(x) for x in r1]
    r2 = [complex(x) for x in r2]

    def coeffs(d1, d2):
        if conj:
            d1, d2 = np.conj(d1), np.conj(d2)
        return r1[0] * d1 + r1[1] * d2, r2[0] * d1 + r2[1] * d2

    def fvec(d1, d2):
        w1, w2 = coeffs(d1, d2)
        return kernels.pencil_norms(pair.A1, pair.A2, w1, w2)

    def fscalar(d1, d2):
        w1, w2 = coeffs(d1, d2)
        return a_norm(pair, (w1, w2))

    return sphere.maximize(fvec, fscalar).value


def lv_norm(pair: MatrixPair, V: VPair, method: str = "auto") -> float:
    """Norm of w -> w1 V1 + w2 V2 from (C^2, dual A-norm) to the p x q operator norm.

    ``method="dual"`` maximizes ||e1 V1 + e2 V2|| / ||e||_A* over directions e.
    ``method="bidual"`` (row or column V of length <= 2) maximizes the A-norm of
    (y* V1 x, y* V2 x) over unit x, y instead; both compute the same number.
    ``"auto"`` picks the bidual route when available.
    """
    if V.is_zero():
        return 0.0
    bidual_ok = min(V.p, V.q) == 1 and max(V.p, V.q) <= 2
    if method == "auto":
        method = "bidual" if bidual_ok else "dual"
    if method == "bidual":
        if not bidual_ok:
            raise ShapeError("the bidual route needs V of shape 1x1, 1x2 or 2x1")
        return _lv_bidual(pair, V)
    if method != "dual":
        raise ValueError(f"unknown method {method!r}")
    V1, V2 = V.V1, V.V2
    return dual_ratio_sup(
        pair,
        lambda e1, e2: kernels.pencil_norms(V1, V2, e1, e2),
        lambda e1, e2: op_norm(e1 * V1 + e2 * V2),
    ).value


def cc_bound(pair: MatrixPair, V: VPair) -> float:
    """||A1 (x) V1 + A2 (x) V2||, the level-n norm evaluated at the defining function."""
    return op_norm(kron(pair.A1, V.V1) + kron(pair.A2, V.V2))


def rowvec_cc_bound(pair: MatrixPair, V: VPair) -> float:
    """Same quantity for row vectors, as the norm of [B1 B2] with Bj = v1j A1 + v2j A2."""
    if V.p != 1 or V.q != 2:
        raise ShapeError(f"rowvec_cc_bound needs 1x2 row vectors, got {V.p}x{V.q}")
    B = [V.V1[0, j] * pair.A1 + V.V2[0, j] * pair.A2 for j in range(2)]
    return op_norm(np.hstack(B))


# -- the extremal function g -----------------------------------------------------------


def g_terms(pair: MatrixPair, beta):
    """(|A1* b|^2, |A2* b|^2, Schwarz gap c(b)) for a vector b."""
    b = np.asarray(beta, dtype=np.complex128).reshape(-1)
    if b.shape[0] != pair.n:
        raise DimensionError(f"beta must have length {pair.n}")
    x = pair.A1.conj().T @ b
    y = pair.A2.conj().T @ b
    q1 = float(np.vdot(x, x).real)
    q2 = float(np.vdot(y, y).real)
    k = np.vdot(x, y)
    return q1, q2, q1 * q2 - float(abs(k) ** 2)


def _unit(beta) -> np.ndarray:
    b = np.asarray(beta, dtype=np.complex128).reshape(-1)
    nb = float(np.linalg.norm(b))
    if abs(nb - 1.0) > 1e-9:
        raise ValueError(f"beta must be a unit vector, has norm {nb}")
    return b / nb


def g_eval(pair: MatrixPair, uv: UVParams, beta) -> GEval:
    b = _unit(beta)
    q1, q2, gap = g_terms(pair, b)
    u2, v2 = uv.u**2, uv.v**2
    return GEval(1.0 - u2 * q1 - v2 * q2 + u2 * v2 * gap, b, gap)


class _GTable:
    """The three quadratic terms of g tabulated on a (t, phi) grid, per pair."""

    def __init__(self, pair: MatrixPair, nt: int, nphi: int):
        if pair.n != 2:
            raise DimensionError("the sphere search for inf g is implemented for 2x2 pairs")
        T, P, d1, d2 = sphere.sphere_grid(nt, nphi)
        A1h = pair.A1.conj().T
        A2h = pair.A2.conj().T
        x0 = A1h[0, 0] * d1 + A1h[0, 1] * d2
        x1 = A1h[1, 0] * d1 + A1h[1, 1] * d2
        y0 = A2h[0, 0] * d1 + A2h[0, 1] * d2
        y1 = A2h[1, 0] * d1 + A2h[1, 1] * d2
        self.T, self.P = T, P
        self.q1 = np.abs(x0) ** 2 + np.abs(x1) ** 2
        self.q2 = np.abs(y0) ** 2 + np.abs(y1) ** 2
        k = np.conj(x0) * y0 + np.conj(x1) * y1
        self.gap = self.q1 * self.q2 - np.abs(k) ** 2
        self.nt, self.nphi = nt, nphi
        a = [complex(z) for z in A1h.reshape(-1)]
        b = [complex(z) for z in A2h.reshape(-1)]

        def terms(c, s):
            u0 = a[0] * c + a[1] * s
            u1 = a[2] * c + a[3] * s
            w0 = b[0] * c + b[1] * s
            w1 = b[2] * c + b[3] * s
            q1 = u0.real * u0.real + u0.imag * u0.imag + u1.real * u1.real + u1.imag * u1.imag
            q2 = w0.real * w0.real + w0.imag * w0.imag + w1.real * w1.real + w1.imag * w1.imag
            kk = u0.conjugate() * w0 + u1.conjugate() * w1
            return q1, q2, q1 * q2 - (kk.real * kk.real + kk.imag * kk.imag)

        self.terms = terms


_GTABLES: "OrderedDict[tuple, _GTable]" = OrderedDict()


def _gtable(pair: MatrixPair, nt: int, nphi: int) -> _GTable:
    key = (pair.key(), nt, nphi)
    tab = _GTABLES.get(key)
    if tab is None:
        tab = _GTable(pair, nt, nphi)
        _GTABLES[key] = tab
        if len(_GTABLES) > 64:
            _GTABLES.popitem(last=False)
    return tab


def inf_g(pair: MatrixPair, uv: UVParams, nt: int = 257, nphi: int = 257, refine: bool = True,
          top_k: int = 3) -> GEval:
    """Minimize g over the unit sphere: grid search, then local refinement of the best seeds."""
    tab = _gtable(pair, nt, nphi)
    u2, v2 = uv.u**2, uv.v**2
    vals = 1.0 - u2 * tab.q1 - v2 * tab.q2 + u2 * v2 * tab.gap
    if not refine:
        i = int(np.argmin(vals))
        beta = sphere.sphere_point(float(tab.T[i]), float(tab.P[i]))
        return GEval(float(vals[i]), beta, float(tab.gap[i]))
    terms = tab.terms

    def neg_g(t, phi):
        q1, q2, gap = terms(math.cos(t), complex(math.cos(phi), math.sin(phi)) * math.sin(t))
        return -(1.0 - u2 * q1 - v2 * q2 + u2 * v2 * gap)

    step_t = sphere.HALF_PI / (nt - 1)
    step_phi = sphere.TWO_PI / nphi
    best = None
    for idx in sphere.top_indices(-vals, nt, nphi, top_k):
        t0, phi0 = sphere.seed_angles(-vals, tab.T, tab.P, nt, nphi, idx)
        r = sphere.refine(neg_g, t0, phi0, step_t, step_phi)
        if best is None or r.value > best.value:
            best = r
    beta = best.point
    q1, q2, gap = terms(complex(beta[0]), complex(beta[1]))
    return GEval(1.0 - u2 * q1 - v2 * q2 + u2 * v2 * gap, beta, gap)


def uv_direct_sup(pair: MatrixPair, uv: UVParams) -> float:
    """sup over unit z in C^2 of ||z1 u A1 + z2 v A2||, the direct contractivity oracle."""
    u, v = uv.u, uv.v
    return sphere.maximize(
        lambda d1, d2: kernels.pencil_norms(pair.A1, pair.A2, u * d1, v * d2),
        lambda d1, d2: op_norm(u * d1 * pair.A1 + v * d2 * pair.A2),
    ).value


def is_contractive_uv(pair: MatrixPair, uv: UVParams, tol: float = DEFAULT_TOL) -> bool:
    """Contractivity of V1 = (u, 0), V2 = (0, v) through the g criterion.

    The side condition (u <= 1/||A1*|| or v <= 1/||A2*||) keeps the eigenvalue of
    I - T T* that the determinant does not see positive.
    """
    side = uv.u <= 1.0 / op_norm(pair.A1) + tol or uv.v <= 1.0 / op_norm(pair.A2) + tol
    if not side:
        return False
    return inf_g(pair, uv).value >= -tol


# -- test-function supremum --------------------------------------------------------------


def testfn_sup(pair: MatrixPair, V: VPair, restarts: int = 100, max_iter: int = 500) -> float:
    """sup over unit alpha, beta of ||<A1 alpha, beta> V1 + <A2 alpha, beta> V2||.

    Alternating maximization: for fixed (alpha, beta) the best (x, y) is a top
    singular pair of the p x q matrix, and for fixed (x, y) the best
    (alpha, beta) is a top singular pair of (y* V1 x) A1 + (y* V2 x) A2.
    Restarts use seeds 0..restarts-1; the largest value found is returned.
    """
    if V.is_zero():
        return 0.0
    A1, A2, V1, V2 = pair.A1, pair.A2, V.V1, V.V2
    n = pair.n
    best = 0.0
    for seed in range(restarts):
        rng = np.random.default_rng(seed)
        alpha = rng.normal(size=n) + 1j * rng.normal(size=n)
        beta = rng.normal(size=n) + 1j * rng.normal(size=n)
        alpha /= np.linalg.norm(alpha)
        beta /= np.linalg.norm(beta)
        val = -1.0
        for _ in range(max_iter):
            w1 = np.vdot(beta, A1 @ alpha)
            w2 = np.vdot(beta, A2 @ alpha)
            _, x, y = top_singular(w1 * V1 + w2 * V2)
            s1 = np.vdot(y, V1 @ x)
            s2 = np.vdot(y, V2 @ x)
            sig, alpha, beta = top_singular(s1 * A1 + s2 * A2)
            if sig <= val + 1e-15:
                val = max(val, sig)
                break
            val = sig
        best = max(best, val)
    return float(best)
