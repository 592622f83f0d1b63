"""Acceptance checks shared by ``ccpair verify-paper`` and the acceptance tests.

Each ``criterion_*`` function returns a :class:`CheckResult`; ``run_all`` runs
the nine of them in order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .anorm import MatrixPair, a_norm, dual_norm_numeric, dual_norm_parabola
from .canonical import LinearMove, apply_moves, table_pair
from .contractivity import UVParams, VPair, cc_bound, is_contractive_uv, lv_norm, testfn_sup
from .errors import NotApplicable
from .linalg import hs_norm, op_norm, random_unitary
from .opspace import (
    THEOREM_Z,
    EmbeddingSpec,
    LevelKElement,
    block_norm_reduction,
    dmp_scalar_condition,
    embedding_equivalence,
    gap_criterion,
    level2_defining_norm,
    theorem3_gap,
)
from .search import SearchConfig, search


@dataclass
class CheckResult:
    number: int
    label: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.label}: {self.detail}"

    def to_dict(self) -> dict:
        return {"number": self.number, "label": self.label, "passed": bool(self.passed), "detail": self.detail}


# Representatives of the six residual families, away from their boundaries.
FAMILY_INSTANCES = {
    "i": (np.diag([1.0, np.exp(0.7j)]), [[1.0, 0.8], [0.3 + 0.4j, 0.0]]),
    "ii": (np.diag([1.0, np.exp(1.1j)]), [[0.0, 1.0], [0.4j, 0.0]]),
    "iii": (np.diag([np.exp(0.4j), 1.0]), [[1.0, 0.6], [0.5j, 0.0]]),
    "iv": (np.diag([1.0, 0.5]), [[1.0, 1.0], [1.0, 0.0]]),
    "v": (np.diag([1.0, 0.3]), [[0.0, 0.8], [0.8 * np.exp(0.5j), 0.0]]),
    "vi": (np.diag([1.6, 1.0]), [[1.0, 0.7], [0.7 * np.exp(-0.3j), 0.0]]),
}


def family_pair(name: str) -> MatrixPair:
    A1, A2 = FAMILY_INSTANCES[name]
    return MatrixPair(A1, A2)


def uv_grid_sup(pair: MatrixPair, uv: UVParams, n: int = 100) -> float:
    """max of ||z1 u A1 + z2 v A2|| over an n x n grid of the Euclidean unit sphere of C^2."""
    t = np.linspace(0.0, 0.5 * math.pi, n)
    phi = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    best = 0.0
    for ti in t:
        for pj in phi:
            M = math.cos(ti) * uv.u * pair.A1 + np.exp(1j * pj) * math.sin(ti) * uv.v * pair.A2
            best = max(best, float(np.linalg.norm(M, 2)))
    return best


def _crandn(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def _random_pair(rng) -> MatrixPair:
    while True:
        try:
            return MatrixPair(_crandn(rng, 2, 2), _crandn(rng, 2, 2))
        except ValueError:
            continue


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def criterion_1(perturb: float = 0.0) -> CheckResult:
    """(I, E12) with V1 = (1/sqrt 2, 0), V2 = (0, 1): level-1 norm 1, level-2 norm sqrt(3/2)."""
    pair = MatrixPair.parabola()
    u = 1.0 / math.sqrt(2.0) + perturb
    V = VPair([[u, 0.0]], [[0.0, 1.0]])
    lv_b = lv_norm(pair, V, method="bidual")
    lv_d = lv_norm(pair, V, method="dual")
    cc = cc_bound(pair, V)
    ok = abs(lv_b - 1.0) <= 1e-5 and abs(lv_d - 1.0) <= 1e-5 and abs(cc - math.sqrt(1.5)) <= 1e-9
    return CheckResult(1, "parabola witness", ok,
                       f"lv={lv_b:.12g} (dual route {lv_d:.12g}), cc={cc:.15g} vs sqrt(3/2)={math.sqrt(1.5):.15g}")


@_timed
def criterion_2(seed: int = 0) -> CheckResult:
    """Euclidean ball: test-function sup 1 and cc sqrt 2; op-norm and HS identities on random V."""
    pair = MatrixPair.euclidean()
    V = VPair([[1.0, 0.0]], [[0.0, 1.0]])
    ts = testfn_sup(pair, V)
    cc = cc_bound(pair, V)
    ok = abs(ts - 1.0) <= 1e-5 and abs(cc - math.sqrt(2.0)) <= 1e-9
    rng = np.random.default_rng(seed)
    worst_op = worst_hs = 0.0
    for _ in range(20):
        Vr = VPair(_crandn(rng, 1, 2), _crandn(rng, 1, 2))
        S = np.vstack([Vr.V1, Vr.V2])
        worst_op = max(worst_op, abs(testfn_sup(pair, Vr) - op_norm(S)))
        worst_hs = max(worst_hs, abs(cc_bound(pair, Vr) ** 2 - hs_norm(S) ** 2))
    ok = ok and worst_op <= 1e-9 and worst_hs <= 1e-9
    return CheckResult(2, "Euclidean ball", ok,
                       f"testfn_sup={ts:.12g}, cc={cc:.15g}, max op-identity err {worst_op:.2e}, "
                       f"max HS-identity err {worst_hs:.2e}")


@_timed
def criterion_3(seed: int = 0) -> CheckResult:
    """A vs A^t level-2 norms agree exactly when (b^2 - |c|^2)(1 - |d|^2) vanishes."""
    rng = np.random.default_rng(seed)
    vals = np.linspace(0.0, 2.0, 5)
    bad = 0
    total = 0
    for md in vals:
        for b in vals:
            for mc in vals:
                d = md * np.exp(1j * rng.uniform(0, 2 * math.pi))
                c = mc * np.exp(1j * rng.uniform(0, 2 * math.pi))
                _, _, equal = theorem3_gap(d, b, c)
                total += 1
                if equal != (gap_criterion(d, b, c) <= 1e-9):
                    bad += 1
    rep = table_pair(1, 0.0, 1.0, 0.0)
    sq = level2_defining_norm(rep, THEOREM_Z) ** 2
    sqt = level2_defining_norm(rep.transpose(), THEOREM_Z) ** 2
    ok = bad == 0 and abs(sq - 3.0) <= 1e-9 and abs(sqt - (3.0 + math.sqrt(5.0)) / 2.0) <= 1e-9
    return CheckResult(3, "level-2 A vs A^t criterion", ok,
                       f"{total - bad}/{total} grid points consistent; squared norms {sq:.15g}, {sqt:.15g}")


@_timed
def criterion_4(seed: int = 0) -> CheckResult:
    """Closed-form vs numeric dual norm of (I, E12) on a 21 x 21 modulus grid."""
    pair = MatrixPair.parabola()
    rng = np.random.default_rng(seed)
    grid = np.linspace(0.0, 2.0, 21)
    worst = 0.0
    for m1 in grid:
        for m2 in grid:
            w = (m1 * np.exp(1j * rng.uniform(0, 2 * math.pi)), m2 * np.exp(1j * rng.uniform(0, 2 * math.pi)))
            exact = dual_norm_parabola(w)
            num = dual_norm_numeric(pair, w)
            err = abs(num - exact) / max(exact, 1e-300) if exact > 0 else abs(num)
            worst = max(worst, err)
    return CheckResult(4, "dual norm closed form", worst <= 1e-5, f"max relative error {worst:.2e} over 441 points")


@_timed
def criterion_5() -> CheckResult:
    """Search certificates for one instance of each residual family, re-verified independently."""
    cfg = SearchConfig()
    parts = []
    ok = True
    for name in FAMILY_INSTANCES:
        try:
            cert = search(family_pair(name), cfg)
        except Exception as exc:  # reported as a failure row, not raised
            ok = False
            parts.append(f"({name}) {type(exc).__name__}: {exc}")
            continue
        sup = uv_grid_sup(cert.pair, cert.uv)
        V = cert.V
        cc = float(np.linalg.norm(np.kron(cert.pair.A1, V.V1) + np.kron(cert.pair.A2, V.V2), 2))
        good = (
            cert.family.family == name
            and sup <= 1.0 + 1e-6
            and cert.lv_value <= 1.0 + 1e-6
            and cc - 1.0 >= 1e-4
            and abs(cert.inf_g_value) <= 10 * cfg.bisect_tol
            and cert.schwarz_gap_at_beta0 > 1e-8
        )
        ok &= good
        parts.append(f"({name}) violation {cert.violation:.4g}, grid sup {sup:.9f}")
    return CheckResult(5, "search certificates", ok, "; ".join(parts))


@_timed
def criterion_6(seed: int = 0) -> CheckResult:
    """Bidisc: no search, and cc <= 1 for contractive (u, v)."""
    pair = MatrixPair.bidisc()
    try:
        search(pair)
        na = False
    except NotApplicable:
        na = True
    rng = np.random.default_rng(seed)
    worst = -math.inf
    count = 0
    while count < 200:
        uv = UVParams(*rng.uniform(0.0, 1.2, size=2))
        if not is_contractive_uv(pair, uv):
            continue
        count += 1
        worst = max(worst, cc_bound(pair, uv.as_vpair()))
    ok = na and worst <= 1.0 + 1e-9
    return CheckResult(6, "bidisc negative control", ok, f"NotApplicable={na}, max cc over 200 contractive = {worst:.15g}")


@_timed
def criterion_7(seed: int = 0) -> CheckResult:
    """Block norm reduction and the scalar contraction criterion for [[a1 I, B], [0, a2 I]]."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    mismatches = 0
    for _ in range(100):
        m, n = rng.integers(1, 5, size=2)
        a1, a2 = (r * np.exp(1j * t) for r, t in zip(rng.uniform(0, 1.1, 2), rng.uniform(0, 2 * math.pi, 2)))
        B = _crandn(rng, m, n)
        B *= rng.uniform(0.05, 1.0) / op_norm(B)
        full, red = block_norm_reduction(a1, a2, B)
        worst = max(worst, abs(full - red))
        if dmp_scalar_condition(a1, a2, B) != (full <= 1.0 + 1e-12):
            mismatches += 1
    ok = worst <= 1e-9 and mismatches == 0
    return CheckResult(7, "block norm and contraction criterion", ok,
                       f"max |full - reduced| {worst:.2e}, criterion mismatches {mismatches}/100")


@_timed
def criterion_8(seed: int = 0) -> CheckResult:
    """Embedding blocks: full vs reduced norms, and invariance over B of equal norm."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    spread = 0.0
    for _ in range(50):
        k = int(rng.integers(1, 4))
        m, n = (int(x) for x in rng.integers(1, 4, size=2))
        Z = LevelKElement(_crandn(rng, k, k), _crandn(rng, k, k))
        a1, a2 = _crandn(rng, 2)
        B = _crandn(rng, m, n)
        nb = op_norm(B)
        full, red = embedding_equivalence(EmbeddingSpec(a1, a2, B), Z)
        worst = max(worst, abs(full - red) / max(1.0, red))
        for _ in range(5):
            B2 = _crandn(rng, m, n)
            B2 *= nb / op_norm(B2)
            f2, _ = embedding_equivalence(EmbeddingSpec(a1, a2, B2), Z)
            spread = max(spread, abs(f2 - full) / max(1.0, full))
    ok = worst <= 1e-8 and spread <= 1e-8
    return CheckResult(8, "embedding norm reduction", ok,
                       f"max full-vs-reduced {worst:.2e}, max spread over equal-norm B {spread:.2e}")


@_timed
def criterion_9(seed: int = 0, count: int = 100) -> CheckResult:
    """Norm axioms, duality, unitary/transpose invariance, linear-move covariance, domination."""
    rng = np.random.default_rng(seed)
    fails = {"axioms": 0, "duality": 0, "invariance": 0, "covariance": 0, "domination": 0}
    for _ in range(count):
        pair = _random_pair(rng)
        z, w = _crandn(rng, 2), _crandn(rng, 2)
        lam = complex(*rng.normal(size=2))
        nz, nw = a_norm(pair, z), a_norm(pair, w)
        if not (nz > 0 and abs(a_norm(pair, lam * z) - abs(lam) * nz) <= 1e-9 * max(1, abs(lam) * nz)
                and a_norm(pair, z + w) <= nz + nw + 1e-9):
            fails["axioms"] += 1
        if abs(z[0] * w[0] + z[1] * w[1]) > nz * dual_norm_numeric(pair, w) * (1 + 1e-9):
            fails["duality"] += 1
        U, W = random_unitary(2, rng), random_unitary(2, rng)
        moved = apply_moves(pair, U, W)
        if abs(a_norm(moved, z) - nz) > 1e-9 * nz or abs(a_norm(pair.transpose(), z) - nz) > 1e-9 * nz:
            fails["invariance"] += 1
        p, q, r, s = _crandn(rng, 4)
        if abs(p * s - q * r) < 1e-3:
            p += 1.0
        T = LinearMove(p, q, r, s)
        V = VPair(_crandn(rng, 1, 2), _crandn(rng, 1, 2))
        lhs = lv_norm(apply_moves(pair, T=T), V)
        rhs = lv_norm(pair, V.transformed(p, q, r, s))
        if abs(lhs - rhs) > 1e-6 * max(1.0, rhs):
            fails["covariance"] += 1
        if testfn_sup(pair, V, restarts=5, max_iter=200) > cc_bound(pair, V) + 1e-7:
            fails["domination"] += 1
    ok = not any(fails.values())
    return CheckResult(9, "structural invariants", ok,
                       ", ".join(f"{k} {count - v}/{count}" for k, v in fails.items()))


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_all(perturb: float = 0.0) -> list[CheckResult]:
    out = [criterion_1(perturb=perturb)]
    out.extend(fn() for fn in CRITERIA[1:])
    return out
