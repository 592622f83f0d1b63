"""Counterexample search: contractive but not completely contractive maps V1 = (u, 0), V2 = (0, v).

Outline, for a pair in canonical form:

1. pick a unit vector ``beta_hat`` at which one of the coefficient families
   a_i(beta) = |A1* beta|^2 - |A1* eta_i|^2  (mode "A")
   b_i(beta) = |A2* beta|^2 - |A2* eta_i|^2  (mode "B")
   is positive for every dependency direction eta_i;
2. walk the curve g_{u,v}(beta_hat) = 0 and keep points (u0, v0) where
   f_i = a_i u^2 + b_i v^2 - c u^2 v^2 is positive, so g is smaller at beta_hat
   than at any eta_i throughout the triangle below (u0, v0);
3. along the ray through such a point, bisect for the first u with inf g = 0.

At that point the map is contractive, and the minimizer of g has a positive
Schwarz gap, which forces the level-2 norm above 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .anorm import MatrixPair
from .canonical import OPSPACE, SIMDIAG, CanonicalClass, classify
from .contractivity import (
    GEval,
    UVParams,
    VPair,
    cc_bound,
    g_eval,
    g_terms,
    inf_g,
    is_contractive_uv,
    lv_norm,
    rowvec_cc_bound,
)
from .errors import NotApplicable, SearchFailure
from .linalg import dependency_directions, op_norm, schur2

__all__ = [
    "SearchConfig",
    "Certificate",
    "abc_coeffs",
    "choose_beta_hat",
    "region_candidates",
    "region_params",
    "bisect_x0",
    "search",
    "search_classified",
    "theorem5_witness",
    "MODE_A",
    "MODE_B",
]

MODE_A = "A-positive"
MODE_B = "B-positive"

BETA_GRID = 1025
CURVE_SAMPLES = 4097
LAMBDA_CANDIDATES = 17
SCAN_POINTS = 33
F_MIN = 1e-10
MARGIN_MIN = 1e-8
GAP_MIN = 1e-8
ZERO_TOL = 1e-14
COARSE_GRID = 65
COARSE_TOL = 1e-4


@dataclass(frozen=True)
class SearchConfig:
    sphere_grid: int = 257
    bisect_tol: float = 1e-8
    cert_margin: float = 1e-4
    max_bisect_iters: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.sphere_grid < 9 or self.max_bisect_iters < 1:
            raise ValueError("sphere_grid must be >= 9 and max_bisect_iters >= 1")
        if not (self.bisect_tol > 0 and self.cert_margin > 0):
            raise ValueError("bisect_tol and cert_margin must be positive")
        if self.bisect_tol >= self.cert_margin:
            raise ValueError("bisect_tol must be smaller than cert_margin")

    def to_dict(self) -> dict:
        return {
            "sphere_grid": self.sphere_grid,
            "bisect_tol": self.bisect_tol,
            "cert_margin": self.cert_margin,
            "max_bisect_iters": self.max_bisect_iters,
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class Certificate:
    """A contractive map (lv_value <= 1) whose level-2 norm exceeds 1 by ``violation``.

    ``pair`` is the pair the ansatz V1 = (u, 0), V2 = (0, v) was built for.
    ``source_pair`` and ``source_V`` give the same map for the input pair
    (identical to ``pair`` and ``uv.as_vpair()`` when no linear move was needed).
    """

    pair: MatrixPair
    uv: UVParams
    beta0: np.ndarray
    lv_value: float
    violation: float
    inf_g_value: float
    schwarz_gap_at_beta0: float
    config: SearchConfig
    family: CanonicalClass
    mode: str = MODE_A
    lambda0: float = 1.0
    beta_hat: np.ndarray | None = None
    source_pair: MatrixPair | None = None
    source_V: VPair | None = None
    notes: tuple = field(default_factory=tuple)

    @property
    def V(self) -> VPair:
        return self.uv.as_vpair()

    @property
    def cc_value(self) -> float:
        return 1.0 + self.violation

    def check(self) -> list[str]:
        """Invariant violations, recomputed from scratch; empty when the certificate holds."""
        problems = []
        tol = self.config.bisect_tol
        lv = lv_norm(self.pair, self.V)
        if lv > 1.0 + tol:
            problems.append(f"lv_norm {lv!r} exceeds 1 + {tol}")
        if not is_contractive_uv(self.pair, self.uv, tol=10 * tol):
            problems.append("g criterion reports a non-contractive map")
        viol = cc_bound(self.pair, self.V) - 1.0
        if viol < self.config.cert_margin:
            problems.append(f"violation {viol!r} below margin {self.config.cert_margin}")
        if abs(self.inf_g_value) > 10 * tol:
            problems.append(f"inf g {self.inf_g_value!r} is not within {10 * tol} of 0")
        if not self.schwarz_gap_at_beta0 > GAP_MIN:
            problems.append(f"Schwarz gap {self.schwarz_gap_at_beta0!r} at beta0 is not positive")
        return problems


# -- step 1 ---------------------------------------------------------------------------------


def abc_coeffs(pair: MatrixPair, eta, beta):
    """(a, b, c): the drops of |A1* .|^2 and |A2* .|^2 from beta to eta, and the Schwarz gap at beta."""
    eta = _unit_vec(eta, "eta")
    beta = _unit_vec(beta, "beta")
    q1, q2, gap = g_terms(pair, beta)
    e1, e2, _ = g_terms(pair, eta)
    return q1 - e1, q2 - e2, gap


def _unit_vec(x, name):
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    nx = float(np.linalg.norm(x))
    if abs(nx - 1.0) > 1e-9:
        raise ValueError(f"{name} must be a unit vector, has norm {nx}")
    return x / nx


def _coeff_margin(pair, etas, beta, mode) -> float:
    k = 0 if mode == MODE_A else 1
    return min(abc_coeffs(pair, eta, beta)[k] for eta in etas)


def _best_on_meridian(pair, etas, mode):
    """Best real beta = (sqrt(1 - s^2), s) on a BETA_GRID-point grid in s."""
    s = np.linspace(0.0, 1.0, BETA_GRID)
    B = np.stack([np.sqrt(1.0 - s * s), s], axis=1).astype(np.complex128)
    A = pair.A1 if mode == MODE_A else pair.A2
    Y = B @ A.conj()  # rows are (A* beta)^T
    q = np.sum(np.abs(Y) ** 2, axis=1)
    ref = max(float(np.linalg.norm(A.conj().T @ eta) ** 2) for eta in etas)
    i = int(np.argmax(q - ref))
    return B[i], float(q[i] - ref)


def _best_on_sphere(pair, etas, mode, nt=65, nphi=128):
    t = np.linspace(0.0, 0.5 * math.pi, nt)
    phi = np.arange(nphi) * (2.0 * math.pi / nphi)
    T, P = np.meshgrid(t, phi, indexing="ij")
    B = np.stack([np.cos(T).ravel(), (np.exp(1j * P) * np.sin(T)).ravel()], axis=1)
    A = pair.A1 if mode == MODE_A else pair.A2
    q = np.sum(np.abs(B @ A.conj()) ** 2, axis=1)
    ref = max(float(np.linalg.norm(A.conj().T @ eta) ** 2) for eta in etas)
    i = int(np.argmax(q - ref))
    return B[i], float(q[i] - ref)


def choose_beta_hat(cls: CanonicalClass, pair: MatrixPair):
    """(beta_hat, mode) with the mode's coefficient positive against every dependency direction.

    Unimodular families: B-positive at the first Schur vector of A2 A1^{-1}.
    Balanced families: A-positive on a grid of |beta_2|.
    Otherwise both modes are tried over the sphere and the larger margin wins.
    """
    if cls.tag == SIMDIAG:
        raise NotApplicable("simultaneously diagonalizable pairs have no counterexample")
    etas = dependency_directions(pair.A1, pair.A2)
    fam = cls.family
    if fam in ("i", "ii", "iii"):
        Q, _ = schur2(pair.A2 @ np.linalg.inv(pair.A1))
        beta, mode = Q[:, 0].copy(), MODE_B
    elif fam in ("iv", "v", "vi"):
        beta, _ = _best_on_meridian(pair, etas, MODE_A)
        mode = MODE_A
    else:
        options = [(_best_on_sphere(pair, etas, m), m) for m in (MODE_A, MODE_B)]
        (beta, _), mode = max(options, key=lambda o: o[0][1])
    margin = _coeff_margin(pair, etas, beta, mode)
    if not margin > MARGIN_MIN:
        raise SearchFailure(f"no beta_hat with positive {mode} margin (best {margin:.3g})", stage="beta_hat")
    return beta, mode


# -- step 1, continued: points on the zero curve ---------------------------------------------


def _f_values(pair, etas, beta, u, v):
    out = []
    for eta in etas:
        a, b, c = abc_coeffs(pair, eta, beta)
        out.append(a * u * u + b * v * v - c * u * u * v * v)
    return np.array(out)


def region_candidates(pair: MatrixPair, beta_hat, mode: str, count: int = LAMBDA_CANDIDATES):
    """Up to ``count`` points (u0, v0, lambda0) on g(beta_hat) = 0 with every f_i > F_MIN."""
    beta = _unit_vec(beta_hat, "beta_hat")
    etas = dependency_directions(pair.A1, pair.A2)
    q1, q2, gap = g_terms(pair, beta)
    coeffs = np.array([abc_coeffs(pair, eta, beta) for eta in etas])
    if mode == MODE_A:
        cap = 1.0 / op_norm(pair.A2)
        qf, qs = q2, q1  # free parameter v, solved parameter u
    elif mode == MODE_B:
        cap = 1.0 / op_norm(pair.A1)
        qf, qs = q1, q2
    else:
        raise ValueError(f"unknown mode {mode!r}")
    x = np.linspace(0.0, cap, CURVE_SAMPLES + 2)[1:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        y2 = (1.0 - x * x * qf) / (qs - x * x * gap)
    ok = np.isfinite(y2) & (y2 > 0)
    y = np.sqrt(np.where(ok, y2, 1.0))
    u, v = (y, x) if mode == MODE_A else (x, y)
    f = coeffs[:, 0:1] * u * u + coeffs[:, 1:2] * v * v - coeffs[:, 2:3] * u * u * v * v
    ok &= np.all(f > F_MIN, axis=0)
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        raise SearchFailure(f"no point of the zero curve satisfies f_i > {F_MIN} ({CURVE_SAMPLES} samples)",
                            stage="region")
    pick = idx[np.unique(np.linspace(0, idx.size - 1, min(count, idx.size)).round().astype(int))]
    out = []
    for i in pick:
        uu, vv = float(u[i]), float(v[i])
        out.append((uu, vv, vv / uu if mode == MODE_A else uu / vv))
    return out


def region_params(pair: MatrixPair, beta_hat, mode: str, config: SearchConfig | None = None):
    """One valid (u0, v0, lambda0): the middle of the admissible stretch of the zero curve."""
    cands = region_candidates(pair, beta_hat, mode)
    return cands[len(cands) // 2]


# -- step 2 ---------------------------------------------------------------------------------


def _ray_uv(mode, lam, x):
    return UVParams(x, lam * x) if mode == MODE_A else UVParams(lam * x, x)


def _lower_bound(pair, lam, mode):
    n1, n2 = op_norm(pair.A1), op_norm(pair.A2)
    if mode == MODE_A:
        return 1.0 / math.sqrt(n1 * n1 + lam * lam * n2 * n2)
    return 1.0 / math.sqrt(lam * lam * n1 * n1 + n2 * n2)


def bisect_x0(pair: MatrixPair, lambda0: float, mode: str, config: SearchConfig | None = None,
              upper: float | None = None, refine: bool = True, tol: float | None = None):
    """First x on the ray with inf g = 0, and the minimizing GEval there.

    The ray is (x, lambda0 x) in mode A and (lambda0 x, x) in mode B. The bracket
    starts at the lower bound where g >= 0 is automatic; without ``upper`` it is
    grown by 1.25 until inf g <= 0. The returned x is on the contractive side.
    """
    config = config or SearchConfig()
    tol = config.bisect_tol if tol is None else tol
    if mode not in (MODE_A, MODE_B):
        raise ValueError(f"unknown mode {mode!r}")
    grid = config.sphere_grid if refine else COARSE_GRID

    def h(x):
        return inf_g(pair, _ray_uv(mode, lambda0, x), nt=grid, nphi=grid, refine=refine)

    lo = _lower_bound(pair, lambda0, mode)
    hi = upper if upper is not None else 1.25 * lo
    if upper is None:
        for _ in range(200):
            if h(hi).value <= ZERO_TOL:
                break
            hi *= 1.25
        else:
            raise SearchFailure("inf g stays positive along the ray", stage="bisect")
    xs = np.linspace(lo, hi, SCAN_POINTS)
    vals = [h(float(x)) for x in xs]
    hits = [i for i, g in enumerate(vals) if g.value <= ZERO_TOL]
    if not hits:
        raise SearchFailure(
            f"no sign change of inf g on [{lo!r}, {hi!r}]: h(lo) = {vals[0].value!r}, h(hi) = {vals[-1].value!r}",
            stage="bisect",
        )
    k = hits[0]
    if k == 0:
        raise SearchFailure(f"inf g already vanishes at the lower bound {lo!r}: h = {vals[0].value!r}", stage="bisect")
    a, b = float(xs[k - 1]), float(xs[k])
    ga = vals[k - 1]
    for _ in range(config.max_bisect_iters):
        if b - a < tol and (not refine or abs(ga.value) <= tol):
            break
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        gm = h(m)
        if gm.value <= ZERO_TOL:
            b = m
        else:
            a, ga = m, gm
    if refine and ga.schwarz_gap <= GAP_MIN:
        raise SearchFailure(
            f"the minimizer of g at x0 = {a!r} has Schwarz gap {ga.schwarz_gap!r}: it is a dependency direction",
            stage="bisect",
        )
    return a, ga


# -- driver ---------------------------------------------------------------------------------


def _moved_v(cls: CanonicalClass, V: VPair) -> VPair:
    T = cls.T
    return V.transformed(T.p, T.q, T.r, T.s)


def search_classified(cls: CanonicalClass, pair: MatrixPair, config: SearchConfig | None = None,
                      source: MatrixPair | None = None) -> Certificate:
    """Run the search on ``pair`` (the representative of ``cls``)."""
    config = config or SearchConfig()
    if cls.tag == SIMDIAG:
        raise NotApplicable("simultaneously diagonalizable pairs have no counterexample")
    if cls.tag == OPSPACE:
        modes = _opspace_modes(pair)
    else:
        modes = [choose_beta_hat(cls, pair)]
    failures = []
    for beta_hat, mode in modes:
        try:
            return _search_mode(cls, pair, beta_hat, mode, config, source)
        except SearchFailure as exc:
            failures.append(str(exc))
    raise SearchFailure("; ".join(failures), stage="search")


def _opspace_modes(pair):
    etas = dependency_directions(pair.A1, pair.A2)
    opts = []
    for mode in (MODE_A, MODE_B):
        beta, margin = _best_on_sphere(pair, etas, mode)
        beta = beta / np.linalg.norm(beta)
        if margin > MARGIN_MIN and _coeff_margin(pair, etas, beta, mode) > MARGIN_MIN:
            opts.append((margin, beta, mode))
    if not opts:
        raise SearchFailure("no beta_hat with a positive margin in either mode", stage="beta_hat")
    opts.sort(key=lambda o: -o[0])
    return [(b, m) for _, b, m in opts]


def _search_mode(cls, pair, beta_hat, mode, config, source):
    cands = region_candidates(pair, beta_hat, mode)
    ranked = []
    for u0, v0, lam in cands:
        x_end = u0 if mode == MODE_A else v0
        try:
            x, _ = bisect_x0(pair, lam, mode, config, upper=x_end, refine=False, tol=COARSE_TOL)
        except SearchFailure:
            continue
        V = _ray_uv(mode, lam, x).as_vpair()
        ranked.append((cc_bound(pair, V), lam, x_end))
    if not ranked:
        raise SearchFailure("no candidate ray produced a crossing", stage="rank")
    ranked.sort(key=lambda r: -r[0])
    errors = []
    for _, lam, x_end in ranked[:3]:
        try:
            x0, gmin = bisect_x0(pair, lam, mode, config, upper=x_end)
        except SearchFailure as exc:
            errors.append(str(exc))
            continue
        return _assemble(cls, pair, beta_hat, mode, lam, x0, gmin, config, source)
    raise SearchFailure("; ".join(errors), stage="bisect")


def _assemble(cls, pair, beta_hat, mode, lam, x0, gmin, config, source):
    uv = _ray_uv(mode, lam, x0)
    V = uv.as_vpair()
    lv = lv_norm(pair, V)
    violation = cc_bound(pair, V) - 1.0
    notes = []
    if cls.family in ("iii", "vi"):
        notes.append(f"family ({cls.family}) handled by the same coefficient search with the roles of the "
                     "diagonal entries exchanged; this case is an adaptation")
    src_pair = source if source is not None else pair
    src_V = _moved_v(cls, V) if source is not None else V
    cert = Certificate(
        pair=pair, uv=uv, beta0=np.asarray(gmin.beta), lv_value=lv, violation=violation,
        inf_g_value=gmin.value, schwarz_gap_at_beta0=gmin.schwarz_gap, config=config, family=cls,
        mode=mode, lambda0=lam, beta_hat=np.asarray(beta_hat), source_pair=src_pair, source_V=src_V,
        notes=tuple(notes),
    )
    problems = cert.check()
    if problems:
        raise SearchFailure("certificate failed re-verification: " + "; ".join(problems), stage="verify")
    return cert


def search(pair: MatrixPair, config: SearchConfig | None = None) -> Certificate:
    """Classify, move to the representative, and search there."""
    config = config or SearchConfig()
    cls = classify(pair)
    if cls.tag == SIMDIAG:
        raise NotApplicable("simultaneously diagonalizable pairs: every contractive map is completely contractive")
    return search_classified(cls, cls.reduced, config, source=pair)


def theorem5_witness() -> Certificate:
    """The fixed witness for (I, E12): u = 1/sqrt(2), v = 1, with level-2 norm sqrt(3/2)."""
    pair = MatrixPair.parabola()
    uv = UVParams(1.0 / math.sqrt(2.0), 1.0)
    V = uv.as_vpair()
    lv = lv_norm(pair, V)
    cc = cc_bound(pair, V)
    if abs(lv - 1.0) > 1e-6:
        raise SearchFailure(f"lv_norm {lv!r} differs from 1", stage="witness")
    if abs(cc - math.sqrt(1.5)) > 1e-9 or abs(rowvec_cc_bound(pair, V) - cc) > 1e-12:
        raise SearchFailure(f"cc_bound {cc!r} differs from sqrt(3/2)", stage="witness")
    beta0 = np.array([1.0, 0.0], dtype=np.complex128)
    g0: GEval = g_eval(pair, uv, beta0)
    cfg = SearchConfig()
    return Certificate(
        pair=pair, uv=uv, beta0=beta0, lv_value=lv, violation=cc - 1.0, inf_g_value=g0.value,
        schwarz_gap_at_beta0=g0.schwarz_gap, config=cfg, family=classify(pair), mode=MODE_B,
        lambda0=uv.u / uv.v, beta_hat=beta0, source_pair=pair, source_V=V,
    )
