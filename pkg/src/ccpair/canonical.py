"""Unitary and linear equivalence of 2x2 pairs, and the canonical families.

Two moves leave the contractivity questions unchanged:

* unitary: (A1, A2) -> (U A1 W, U A2 W);
* linear:  (A1, A2) -> (p A1 + r A2, q A1 + s A2), i.e. z = T z~ with
  T = [[p, q], [r, s]] invertible.

Every pair that is not simultaneously diagonalizable can be moved to one of
three patterns ("rows"):

    row 1: A1 = diag(1, d), A2 = [[1, b], [c, 0]]
    row 2: A1 = diag(d, 1), A2 = [[1, b], [c, 0]]
    row 3: A1 = diag(1, d), A2 = [[0, b], [c, 0]]

with b >= 0. On top of the row, the pair is tagged OpSpaceDistinguishable when
|d| != 1 and b != |c|, and otherwise with one of six residual families:
(i), (ii), (iii) for |d| = 1 on rows 1, 3, 2 and (iv), (v), (vi) for b = |c| on
rows 1, 3, 2.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .anorm import MatrixPair
from .errors import DegenerateInput, DimensionError, NotUnitary
from .linalg import as_cmat, is_unitary, op_norm, schur2, svd2

__all__ = [
    "LinearMove",
    "CanonicalClass",
    "SIMDIAG",
    "OPSPACE",
    "RESIDUAL_TAGS",
    "apply_moves",
    "is_simdiag",
    "table_pair",
    "match_table_rows",
    "reduce_to_table1",
    "classify",
]

SIMDIAG = "SimultaneouslyDiagonalizable"
OPSPACE = "OpSpaceDistinguishable"
RESIDUAL_TAGS = tuple(f"Residual({k})" for k in ("i", "ii", "iii", "iv", "v", "vi"))

TOL_CLASS = 1e-6
PIVOT_TOL = 1e-10
READOFF_TOL = 1e-12
SIMDIAG_SEEDS = (7, 11)

# family index within each group, by row
_UNIMODULAR_FAMILY = {1: "i", 3: "ii", 2: "iii"}
_BALANCED_FAMILY = {1: "iv", 3: "v", 2: "vi"}


@dataclass(frozen=True)
class LinearMove:
    """z1 = p z1~ + q z2~, z2 = r z1~ + s z2~."""

    p: complex = 1.0
    q: complex = 0.0
    r: complex = 0.0
    s: complex = 1.0

    def __post_init__(self):
        for name in ("p", "q", "r", "s"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.p * self.s - self.q * self.r) <= 1e-12:
            raise DegenerateInput("linear move is singular (|ps - qr| <= 1e-12)")

    def matrix(self) -> np.ndarray:
        return np.array([[self.p, self.q], [self.r, self.s]], dtype=np.complex128)

    @classmethod
    def from_matrix(cls, M) -> "LinearMove":
        M = as_cmat(M)
        return cls(M[0, 0], M[0, 1], M[1, 0], M[1, 1])

    def then(self, other: "LinearMove") -> "LinearMove":
        """The single move equal to applying ``self`` and then ``other``."""
        return LinearMove.from_matrix(self.matrix() @ other.matrix())

    def to_dict(self) -> dict:
        return {k: [getattr(self, k).real, getattr(self, k).imag] for k in ("p", "q", "r", "s")}


IDENTITY_MOVE = LinearMove()


def apply_moves(pair: MatrixPair, U=None, W=None, T: LinearMove | None = None) -> MatrixPair:
    """(p UA1W + r UA2W, q UA1W + s UA2W)."""
    n = pair.n
    U = np.eye(n) if U is None else as_cmat(U, "U")
    W = np.eye(n) if W is None else as_cmat(W, "W")
    T = IDENTITY_MOVE if T is None else T
    if U.shape != (n, n) or not is_unitary(U, 1e-10):
        raise NotUnitary("U is not unitary within 1e-10")
    if W.shape != (n, n) or not is_unitary(W, 1e-10):
        raise NotUnitary("W is not unitary within 1e-10")
    B1 = U @ pair.A1 @ W
    B2 = U @ pair.A2 @ W
    return MatrixPair(T.p * B1 + T.r * B2, T.q * B1 + T.s * B2)


def _require_2x2(pair: MatrixPair):
    if pair.n != 2:
        raise DimensionError(f"canonical forms are implemented for 2x2 pairs, got n={pair.n}")


def _offdiag_mass(M: np.ndarray) -> float:
    return float(max(abs(M[0, 1]), abs(M[1, 0])))


def simdiag_basis(pair: MatrixPair, tol: float = 1e-9):
    """(U, W) making both U A_i W diagonal within tol, or None.

    The singular vectors of a generic member a A1 + a' A2 are the only
    candidates; two seeded draws guard against an unlucky member.
    """
    _require_2x2(pair)
    conclusive = False
    for seed in SIMDIAG_SEEDS:
        rng = np.random.default_rng(seed)
        a, a2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        Uo, s, Wo = svd2(a * pair.A1 + a2 * pair.A2)
        if s[0] - s[1] <= 1e-10 * max(s[0], 1e-300):
            continue
        conclusive = True
        U, W = Uo.conj().T, Wo
        ok = all(
            _offdiag_mass(U @ A @ W) <= tol * max(1.0, op_norm(A)) for A in (pair.A1, pair.A2)
        )
        if ok:
            return U, W
    if not conclusive:
        raise DegenerateInput("every sampled member of the pencil has equal singular values")
    return None


def is_simdiag(pair: MatrixPair, tol: float = 1e-9) -> bool:
    return simdiag_basis(pair, tol) is not None


@dataclass(frozen=True, eq=False)
class CanonicalClass:
    """Outcome of classification.

    ``reduced`` is the row representative built from (d, b, c); it equals
    ``apply_moves(source, U, W, T)`` up to ``snap_residual`` (nonzero only when
    a boundary value of |d| or b was snapped).
    """

    tag: str
    row: int | None = None
    d: complex | None = None
    b: float | None = None
    c: complex | None = None
    U: np.ndarray | None = None
    W: np.ndarray | None = None
    T: LinearMove = IDENTITY_MOVE
    reduced: MatrixPair | None = None
    snap_residual: float = 0.0
    witness_moves: tuple = field(default_factory=tuple)
    notes: tuple = field(default_factory=tuple)

    @property
    def family(self) -> str | None:
        if self.tag.startswith("Residual("):
            return self.tag[len("Residual("):-1]
        return None

    @property
    def theta(self) -> float | None:
        if self.family in ("i", "ii", "iii"):
            return float(cmath.phase(self.d))
        return None

    @property
    def is_residual(self) -> bool:
        return self.family is not None

    def to_dict(self) -> dict:
        def cx(z):
            return None if z is None else [complex(z).real, complex(z).imag]

        out = {"tag": self.tag, "row": self.row, "d": cx(self.d), "b": self.b, "c": cx(self.c)}
        if self.theta is not None:
            out["theta"] = self.theta
        out["snap_residual"] = self.snap_residual
        out["witness_moves"] = list(self.witness_moves)
        out["notes"] = list(self.notes)
        if self.U is not None:
            out["move"] = {
                "U": {"re": self.U.real.tolist(), "im": self.U.imag.tolist()},
                "W": {"re": self.W.real.tolist(), "im": self.W.imag.tolist()},
                "T": self.T.to_dict(),
            }
        return out


def table_pair(row: int, d: complex, b: float, c: complex) -> MatrixPair:
    """The representative pair of a row with parameters (d, b, c)."""
    if row == 1:
        return MatrixPair(np.diag([1.0, d]), [[1.0, b], [c, 0.0]])
    if row == 2:
        return MatrixPair(np.diag([d, 1.0]), [[1.0, b], [c, 0.0]])
    if row == 3:
        return MatrixPair(np.diag([1.0, d]), [[0.0, b], [c, 0.0]])
    raise ValueError(f"row must be 1, 2 or 3, got {row}")


def match_table_rows(pair: MatrixPair, atol: float = READOFF_TOL) -> list[tuple[int, complex, float, complex]]:
    """Rows whose pattern the pair already has, with the parameters read off."""
    _require_2x2(pair)
    A1, A2 = pair.A1, pair.A2

    def close(x, y):
        return abs(x - y) <= atol

    if not (close(A1[0, 1], 0) and close(A1[1, 0], 0)):
        return []
    b_ok = abs(A2[0, 1].imag) <= atol and A2[0, 1].real >= -atol
    if not b_ok:
        return []
    b = max(float(A2[0, 1].real), 0.0)
    c = complex(A2[1, 0])
    out = []
    if close(A1[0, 0], 1) and close(A2[0, 0], 1) and close(A2[1, 1], 0):
        out.append((1, complex(A1[1, 1]), b, c))
    if close(A1[1, 1], 1) and close(A2[0, 0], 1) and close(A2[1, 1], 0):
        out.append((2, complex(A1[0, 0]), b, c))
    if close(A1[0, 0], 1) and close(A2[0, 0], 0) and close(A2[1, 1], 0):
        out.append((3, complex(A1[1, 1]), b, c))
    return out


def _phase_fix(X2: np.ndarray):
    """Diagonal unitary G with (G* X2 G)[0, 1] real nonnegative."""
    x = X2[0, 1]
    ph = 1.0 if abs(x) == 0 else x / abs(x)
    return np.diag([1.0, np.conj(ph)]).astype(np.complex128)


def _finish(pair, row, d, b, c, U, W, T, steps, notes, tol_class) -> CanonicalClass:
    if row in (1, 2) and b <= PIVOT_TOL and abs(c) <= PIVOT_TOL:
        raise DegenerateInput("[off-diagonal] both off-diagonal entries vanish: the pair is simultaneously diagonalizable")
    if row == 3 and b <= PIVOT_TOL and abs(c) <= PIVOT_TOL:
        raise DegenerateInput("[off-diagonal] transformed A2 vanishes")
    if abs(abs(d) - 1.0) <= tol_class:
        tag = f"Residual({_UNIMODULAR_FAMILY[row]})"
        d = d / abs(d) if d != 0 else 1.0
    elif abs(b - abs(c)) <= tol_class:
        tag = f"Residual({_BALANCED_FAMILY[row]})"
        b = abs(c)
    else:
        tag = OPSPACE
    rep = table_pair(row, d, b, c)
    moved = apply_moves(pair, U, W, T)
    resid = max(float(np.max(np.abs(moved.A1 - rep.A1))), float(np.max(np.abs(moved.A2 - rep.A2))))
    if resid > 1e-10:
        notes = notes + (f"representative snapped to the family boundary; residual {resid:.3g}",)
    return CanonicalClass(
        tag=tag, row=row, d=complex(d), b=float(b), c=complex(c), U=U, W=W, T=T,
        reduced=rep, snap_residual=resid, witness_moves=tuple(steps), notes=tuple(notes),
    )


def reduce_to_table1(pair: MatrixPair, tol_class: float = TOL_CLASS) -> CanonicalClass:
    """Move a non-simultaneously-diagonalizable pair to a row pattern and tag it."""
    _require_2x2(pair)
    I2 = np.eye(2, dtype=np.complex128)

    rows = match_table_rows(pair)
    if rows:
        row, d, b, c = rows[0]
        notes = ()
        if len(rows) > 1:
            notes = (f"pair matches rows {[r[0] for r in rows]}; the first is used",)
        return _finish(pair, row, d, b, c, I2, I2, IDENTITY_MOVE, ["read-off: already in row form"], notes, tol_class)

    steps = []
    notes: tuple = ()
    Uo, sv, Wo = svd2(pair.A1)
    s1 = float(sv[0])
    if s1 <= PIVOT_TOL:
        raise DegenerateInput("[svd] A1 vanishes")
    dt = float(sv[1]) / s1
    U, W = Uo.conj().T, Wo
    steps.append(f"unitary: singular value decomposition of A1, ratio {dt:.17g}")
    M = U @ pair.A2 @ W / s1

    if abs(1.0 - dt) <= tol_class:
        # A1 is a multiple of a unitary: make it the identity and triangularize A2.
        Q, Tm = schur2(M)
        U, W = Q.conj().T @ U, W @ Q
        mu, nu, sig = Tm[0, 0], Tm[1, 1], Tm[0, 1]
        steps.append("unitary: Schur form of A2 with A1 = identity")
        # A defective double eigenvalue is only resolved to sqrt(eps), so compare
        # the squared gap (the discriminant) against the pivot tolerance.
        scale2 = max(1.0, float(np.sum(np.abs(M) ** 2)))
        if abs(mu - nu) ** 2 > PIVOT_TOL * scale2:
            k = 1.0 / (mu - nu)
            T = LinearMove(1.0 / s1, -nu * k / s1, 0.0, k / s1)
            row = 1
            steps.append("linear: A2 <- (A2 - nu A1)/(mu - nu)")
            X12 = sig * k
        else:
            nu = 0.5 * (mu + nu)
            T = LinearMove(1.0 / s1, -nu / s1, 0.0, 1.0 / s1)
            row = 3
            steps.append("linear: A2 <- A2 - nu A1 (equal eigenvalues)")
            X12 = sig
        G = _phase_fix(np.array([[0, X12], [0, 0]]))
        U, W = G.conj().T @ U, W @ G
        steps.append("unitary: diagonal phase making the (1,2) entry of A2 nonnegative")
        return _finish(pair, row, 1.0, abs(X12), 0.0, U, W, T, steps, notes, tol_class)

    x, y = M[0, 0], M[1, 1]
    det = y - dt * x
    if abs(det) > PIVOT_TOL:
        qq, ss = y / det, -dt / det
        row = 1
        steps.append("linear: r = 0 move giving A2 the diagonal (1, 0)")
    else:
        qq, ss = -x, 1.0
        row = 3
        steps.append("linear: A2 <- A2 - x A1 (diagonal of A2 proportional to that of A1)")
        notes = notes + ("diagonal of A2 is proportional to that of A1; using the zero-diagonal row",)
    T = LinearMove(1.0 / s1, qq / s1, 0.0, ss / s1)
    X2 = qq * np.diag([1.0, dt]) + ss * M
    G = _phase_fix(X2)
    U, W = G.conj().T @ U, W @ G
    X2 = G.conj().T @ X2 @ G
    steps.append("unitary: diagonal phase making the (1,2) entry of A2 nonnegative")
    b = float(abs(X2[0, 1]))
    c = complex(X2[1, 0])
    return _finish(pair, row, dt, b, c, U, W, T, steps, notes, tol_class)


def classify(pair: MatrixPair, tol_class: float = TOL_CLASS) -> CanonicalClass:
    _require_2x2(pair)
    basis = simdiag_basis(pair)
    if basis is not None:
        U, W = basis
        return CanonicalClass(tag=SIMDIAG, U=U, W=W, witness_moves=("unitary: common singular vectors",))
    return reduce_to_table1(pair, tol_class)
