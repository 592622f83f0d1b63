"""Small dense complex linear algebra.

Every matrix in this package is at most 16x16, so the routines here favour
closed forms and a cyclic Jacobi eigensolver over anything clever. Matrices
are plain ``numpy`` arrays of dtype complex128; :func:`as_cmat` is the single
entry point that validates shape and finiteness.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateInput, DimensionError, ShapeError

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "as_cmat",
    "as_cvec2",
    "adjoint",
    "kron",
    "hs_norm",
    "op_norm",
    "opnorm2",
    "hermitian_eigh",
    "top_singular",
    "svd2",
    "schur2",
    "dependency_directions",
    "phase_normalize",
    "random_unitary",
    "is_unitary",
    "matrix_unit",
]


def as_cmat(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a 2-D complex128 array, rejecting empty or non-finite input."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    elif A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] == 0 or A.shape[1] == 0:
        raise DimensionError(f"{name} has an empty dimension: shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def as_cvec2(z, name: str = "vector") -> np.ndarray:
    v = np.asarray(z, dtype=np.complex128).reshape(-1)
    if v.shape != (2,):
        raise ShapeError(f"{name} must have exactly two entries, got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def matrix_unit(i: int, j: int, n: int = 2) -> np.ndarray:
    """E_ij with 1-based indices."""
    E = np.zeros((n, n), dtype=np.complex128)
    E[i - 1, j - 1] = 1.0
    return E


def adjoint(M) -> np.ndarray:
    return as_cmat(M).conj().T


def kron(M, N) -> np.ndarray:
    return np.kron(as_cmat(M), as_cmat(N))


def hs_norm(M) -> float:
    A = as_cmat(M)
    return float(math.sqrt(np.sum(A.real**2 + A.imag**2)))


def opnorm2(m00: complex, m01: complex, m10: complex, m11: complex) -> float:
    """Largest singular value of [[m00, m01], [m10, m11]] in scalar arithmetic.

    The eigenvalues of M*M have trace ||M||_F^2 and determinant |det M|^2, so
    the larger one follows from the quadratic formula.
    """
    F = (
        m00.real * m00.real + m00.imag * m00.imag
        + m01.real * m01.real + m01.imag * m01.imag
        + m10.real * m10.real + m10.imag * m10.imag
        + m11.real * m11.real + m11.imag * m11.imag
    )
    D = abs(m00 * m11 - m01 * m10)
    disc = (F - 2.0 * D) * (F + 2.0 * D)
    if disc < 0.0:
        disc = 0.0
    return math.sqrt(0.5 * (F + math.sqrt(disc)))


def _gram2_top(G: np.ndarray) -> float:
    a = G[0, 0].real
    d = G[1, 1].real
    b = abs(G[0, 1])
    return 0.5 * (a + d) + math.sqrt(0.25 * (a - d) ** 2 + b * b)


def hermitian_eigh(H, tol: float = 1e-14, max_sweeps: int = 200):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, V)`` with eigenvalues in descending order and orthonormal
    eigenvectors in the columns of ``V``. Sweeps stop once the off-diagonal
    Frobenius mass falls below ``tol`` times the Frobenius norm of ``H``.
    """
    A = as_cmat(H, "hermitian matrix").copy()
    n = A.shape[0]
    if A.shape[1] != n:
        raise ShapeError(f"hermitian_eigh needs a square matrix, got {A.shape}")
    A = 0.5 * (A + A.conj().T)
    V = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(A))
    if scale == 0.0 or n == 1:
        return A.diagonal().real.copy(), V
    for _ in range(max_sweeps):
        off = A - np.diag(A.diagonal())
        if float(np.linalg.norm(off)) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p, q]
                absb = abs(b)
                if absb <= 1e-300:
                    continue
                a = A[p, p].real
                d = A[q, q].real
                ph = b / absb
                tau = (d - a) / (2.0 * absb)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(ph)) @ [[c, s], [-s, c]] acting on the (p, q) plane
                G = np.array([[c, s], [-s * ph.conjugate(), c * ph.conjugate()]], dtype=np.complex128)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ G
    w = A.diagonal().real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def op_norm(M) -> float:
    """Operator (spectral) norm: the largest singular value of ``M``."""
    A = as_cmat(M)
    r, c = A.shape
    if r == 1 or c == 1:
        return float(math.sqrt(np.sum(A.real**2 + A.imag**2)))
    if r == 2 and c == 2:
        return opnorm2(complex(A[0, 0]), complex(A[0, 1]), complex(A[1, 0]), complex(A[1, 1]))
    G = A.conj().T @ A if c <= r else A @ A.conj().T
    if G.shape[0] == 2:
        return math.sqrt(max(_gram2_top(G), 0.0))
    w, _ = hermitian_eigh(G)
    return math.sqrt(max(w[0], 0.0))


def top_singular(M):
    """Return ``(sigma, x, y)`` with ``M @ x = sigma * y`` and unit ``x``, ``y``."""
    A = as_cmat(M)
    w, V = hermitian_eigh(A.conj().T @ A)
    sigma = math.sqrt(max(w[0], 0.0))
    x = V[:, 0]
    if sigma > 0.0:
        y = A @ x / sigma
        y = y / np.linalg.norm(y)
    else:
        y = np.zeros(A.shape[0], dtype=np.complex128)
        y[0] = 1.0
    return sigma, x, y


def _perp(x: np.ndarray) -> np.ndarray:
    return np.array([-np.conj(x[1]), np.conj(x[0])], dtype=np.complex128)


def svd2(M):
    """Full SVD of a 2x2 matrix: ``(U, s, W)`` with ``M = U @ diag(s) @ W^*``, s descending."""
    A = as_cmat(M)
    if A.shape != (2, 2):
        raise ShapeError(f"svd2 needs a 2x2 matrix, got {A.shape}")
    s1, x1, y1 = top_singular(A)
    x2 = _perp(x1)
    z = A @ x2
    s2 = float(np.linalg.norm(z))
    y2 = z / s2 if s2 > 1e-300 else _perp(y1)
    U = np.column_stack([y1, y2])
    W = np.column_stack([x1, x2])
    return U, np.array([s1, s2]), W


def schur2(M):
    """Unitary triangularization ``Q^* M Q = [[mu, sigma], [0, nu]]`` with |mu| >= |nu|."""
    A = as_cmat(M)
    if A.shape != (2, 2):
        raise ShapeError(f"schur2 needs a 2x2 matrix, got {A.shape}")
    tr = A[0, 0] + A[1, 1]
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    root = np.sqrt(tr * tr / 4 - det + 0j)
    l1, l2 = tr / 2 + root, tr / 2 - root
    mu = l1 if abs(l1) >= abs(l2) else l2
    cands = [np.array([A[0, 1], mu - A[0, 0]]), np.array([mu - A[1, 1], A[1, 0]])]
    x = max(cands, key=lambda v: float(np.linalg.norm(v)))
    nx = float(np.linalg.norm(x))
    if nx <= 1e-14 * max(1.0, float(np.linalg.norm(A))):
        x = np.array([1.0, 0.0], dtype=np.complex128)
    else:
        x = x / nx
    Q = np.column_stack([x, _perp(x)])
    T = Q.conj().T @ A @ Q
    T[1, 0] = 0.0
    return Q, T


def phase_normalize(v, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rotate the global phase so the first entry with modulus > tol is real positive."""
    v = np.asarray(v, dtype=np.complex128)
    for x in v:
        if abs(x) > tol:
            return v * (abs(x) / x)
    return v.copy()


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    d = R.diagonal()
    return Q * (d / np.abs(d))


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = as_cmat(U)
    if U.shape[0] != U.shape[1]:
        return False
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))) <= tol


def _wedge(A1s: np.ndarray, A2s: np.ndarray, x: np.ndarray) -> complex:
    p = A1s @ x
    q = A2s @ x
    return complex(p[0] * q[1] - p[1] * q[0])


def dependency_directions(A1, A2, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Unit vectors eta with A1* eta and A2* eta linearly dependent.

    ``det[A1* b | A2* b]`` is a binary quadratic form in ``b`` (no conjugates),
    so its zero set in the projective line has at most two points unless the
    form vanishes identically. Each direction is phase-normalized.
    """
    A1 = as_cmat(A1, "A1")
    A2 = as_cmat(A2, "A2")
    if A1.shape != (2, 2) or A2.shape != (2, 2):
        raise ShapeError("dependency_directions is defined for 2x2 pairs")
    A1s = A1.conj().T
    A2s = A2.conj().T
    e1 = np.array([1.0, 0.0], dtype=np.complex128)
    e2 = np.array([0.0, 1.0], dtype=np.complex128)
    f11 = _wedge(A1s, A2s, e1)
    f22 = _wedge(A1s, A2s, e2)
    f12 = _wedge(A1s, A2s, e1 + e2) - f11 - f22
    thr = tol * max(np.linalg.norm(A1) * np.linalg.norm(A2), 1e-300)
    if max(abs(f11), abs(f12), abs(f22)) <= thr:
        raise DegenerateInput("det[A1* b | A2* b] vanishes identically; every direction is dependent")

    raw: list[np.ndarray] = []
    # Points (1, y) solve f22 y^2 + f12 y + f11 = 0; the point at infinity e2 is a root iff f22 = 0.
    if abs(f22) <= thr:
        raw.append(e2)
        if abs(f12) > thr:
            raw.append(np.array([1.0, -f11 / f12], dtype=np.complex128))
    else:
        disc = np.sqrt(complex(f12 * f12 - 4.0 * f22 * f11))
        s1 = f12 + disc
        s2 = f12 - disc
        qv = -0.5 * (s1 if abs(s1) >= abs(s2) else s2)
        if abs(qv) <= thr:
            raw.append(np.array([1.0, 0.0], dtype=np.complex128))
        else:
            raw.append(np.array([1.0, qv / f22], dtype=np.complex128))
            raw.append(np.array([1.0, f11 / qv], dtype=np.complex128))

    out: list[np.ndarray] = []
    for v in raw:
        v = phase_normalize(v / np.linalg.norm(v), tol)
        if all(abs(np.vdot(w, v)) < 1.0 - 1e-9 for w in out):
            out.append(v)
    out.sort(key=lambda v: (-abs(v[0]), -abs(v[1])))
    return out
