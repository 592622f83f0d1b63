"""Matrix-level norms: the level-2 A vs A^t distinguisher, MIN norms, and block contractions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .anorm import MatrixPair, dual_ratio_sup
from .errors import ShapeError
from .linalg import as_cmat, kron, matrix_unit, op_norm

__all__ = [
    "LevelKElement",
    "EmbeddingSpec",
    "THEOREM_Z",
    "level2_defining_norm",
    "defining_norm_raw",
    "theorem3_gap",
    "gap_criterion",
    "min_norm",
    "dmp_scalar_condition",
    "upper_block",
    "block_norm_reduction",
    "embedding_blocks",
    "embedding_equivalence",
]


@dataclass(frozen=True, eq=False)
class LevelKElement:
    Z1: np.ndarray
    Z2: np.ndarray
    k: int = field(init=False)

    def __post_init__(self):
        Z1 = as_cmat(self.Z1, "Z1").copy()
        Z2 = as_cmat(self.Z2, "Z2").copy()
        if Z1.shape != Z2.shape or Z1.shape[0] != Z1.shape[1]:
            raise ShapeError(f"Z1 and Z2 must be square of equal size, got {Z1.shape} and {Z2.shape}")
        object.__setattr__(self, "Z1", Z1)
        object.__setattr__(self, "Z2", Z2)
        object.__setattr__(self, "k", Z1.shape[0])

    def transpose(self) -> "LevelKElement":
        return LevelKElement(self.Z1.T, self.Z2.T)


@dataclass(frozen=True, eq=False)
class EmbeddingSpec:
    alpha1: complex
    alpha2: complex
    B: np.ndarray

    def __post_init__(self):
        B = as_cmat(self.B, "B").copy()
        if not np.any(B):
            raise ValueError("B must be nonzero")
        for name in ("alpha1", "alpha2"):
            x = complex(getattr(self, name))
            if not (math.isfinite(x.real) and math.isfinite(x.imag)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, x)
        object.__setattr__(self, "B", B)


# The two level-2 elements that separate A from A^t.
THEOREM_Z = LevelKElement(matrix_unit(1, 1), matrix_unit(1, 2))


def defining_norm_raw(A1, A2, Z1, Z2) -> float:
    """||A1 (x) Z1 + A2 (x) Z2||: block (i, j) is A1[i, j] Z1 + A2[i, j] Z2."""
    return op_norm(kron(A1, Z1) + kron(A2, Z2))


def level2_defining_norm(pair: MatrixPair, Z: LevelKElement) -> float:
    return defining_norm_raw(pair.A1, pair.A2, Z.Z1, Z.Z2)


def _row_matrices(row: int, d: complex, b: float, c: complex):
    A2 = np.array([[1.0 if row in (1, 2) else 0.0, b], [c, 0.0]], dtype=np.complex128)
    A1 = np.diag([d, 1.0] if row == 2 else [1.0, d]).astype(np.complex128)
    return A1, A2


def gap_criterion(d: complex, b: float, c: complex) -> float:
    """|(b^2 - |c|^2)(1 - |d|^2)|: zero exactly when the level-2 norms can agree."""
    return abs((b * b - abs(c) ** 2) * (1.0 - abs(d) ** 2))


def theorem3_gap(d: complex, b: float, c: complex, row: int = 1, tol: float = 1e-9):
    """Level-2 norms of the row pair and of its transpose at Z = (E11, E12).

    Returns ``(norm_A, norm_At, equal)`` with ``equal`` meaning agreement within tol.
    Rows 2 and 3 are evaluated through the full 4x4 block matrices as well.
    """
    A1, A2 = _row_matrices(row, complex(d), float(b), complex(c))
    Z1, Z2 = THEOREM_Z.Z1, THEOREM_Z.Z2
    nA = defining_norm_raw(A1, A2, Z1, Z2)
    nAt = defining_norm_raw(A1.T, A2.T, Z1, Z2)
    return nA, nAt, abs(nA - nAt) <= tol


def min_norm(pair: MatrixPair, Z: LevelKElement) -> float:
    """MIN norm: sup over the dual unit ball of ||w1 Z1 + w2 Z2||."""
    Z1, Z2 = Z.Z1, Z.Z2
    if not (np.any(Z1) or np.any(Z2)):
        return 0.0
    return dual_ratio_sup(
        pair,
        lambda e1, e2: kernels.pencil_norms(Z1, Z2, e1, e2),
        lambda e1, e2: op_norm(e1 * Z1 + e2 * Z2),
    ).value


def dmp_scalar_condition(alpha1: complex, alpha2: complex, B, slack: float = 1e-12) -> bool:
    """Contractivity of [[a1 I, B], [0, a2 I]] via ||B||^2 <= (1 - |a1|^2)(1 - |a2|^2)."""
    m1, m2 = abs(alpha1), abs(alpha2)
    if m1 > 1.0 or m2 > 1.0:
        return False
    nb = op_norm(B)
    return nb * nb <= (1.0 - m1 * m1) * (1.0 - m2 * m2) + slack


def upper_block(alpha1: complex, alpha2: complex, B) -> np.ndarray:
    """[[a1 I_m, B], [0, a2 I_n]] for an m x n matrix B."""
    B = as_cmat(B, "B")
    m, n = B.shape
    out = np.zeros((m + n, m + n), dtype=np.complex128)
    out[:m, :m] = alpha1 * np.eye(m)
    out[:m, m:] = B
    out[m:, m:] = alpha2 * np.eye(n)
    return out


def block_norm_reduction(alpha1: complex, alpha2: complex, B):
    """(||[[a1 I, B], [0, a2 I]]||, ||[[a1, ||B||], [0, a2]]||)."""
    full = op_norm(upper_block(alpha1, alpha2, B))
    reduced = op_norm(np.array([[alpha1, op_norm(B)], [0.0, alpha2]], dtype=np.complex128))
    return full, reduced


def embedding_blocks(spec: EmbeddingSpec, Z: LevelKElement):
    """The full k(m+n) block matrix and its 2k x 2k reduction for level-k element Z."""
    m, n = spec.B.shape
    k = Z.k
    full = np.zeros((k * (m + n), k * (m + n)), dtype=np.complex128)
    full[: k * m, : k * m] = spec.alpha1 * kron(Z.Z1, np.eye(m))
    full[: k * m, k * m:] = kron(Z.Z2, spec.B)
    full[k * m:, k * m:] = spec.alpha2 * kron(Z.Z1, np.eye(n))
    nb = op_norm(spec.B)
    red = np.zeros((2 * k, 2 * k), dtype=np.complex128)
    red[:k, :k] = spec.alpha1 * Z.Z1
    red[:k, k:] = nb * Z.Z2
    red[k:, k:] = spec.alpha2 * Z.Z1
    return full, red


def embedding_equivalence(spec: EmbeddingSpec, Z: LevelKElement):
    """(full, reduced) operator norms; equal for every B of the same norm."""
    full, red = embedding_blocks(spec, Z)
    return op_norm(full), op_norm(red)
