import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccpair.errors import DegenerateInput, DimensionError, ShapeError
from ccpair.linalg import (
    adjoint,
    as_cmat,
    dependency_directions,
    hermitian_eigh,
    hs_norm,
    is_unitary,
    kron,
    matrix_unit,
    op_norm,
    phase_normalize,
    random_unitary,
    schur2,
    svd2,
    top_singular,
)
from conftest import crandn

E11, E12, E21, E22 = (matrix_unit(i, j) for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)))


# -- frozen values --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "M, expected",
    [
        ([[0, 1], [0, 0]], 1.0),
        ([[3, 0], [0, 0]], 3.0),
        ([[2, 1], [1, 1]], (3 + math.sqrt(5)) / 2),
        ([[5]], 5.0),
        ([[3, 4]], 5.0),
        ([[3], [4j]], 5.0),
    ],
)
def test_op_norm_values(M, expected):
    assert op_norm(M) == pytest.approx(expected, abs=1e-12)


def test_op_norm_rejects_empty_and_nonfinite():
    with pytest.raises(DimensionError):
        op_norm(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        op_norm([[np.nan, 0], [0, 1]])
    with pytest.raises(ShapeError):
        as_cmat(np.zeros((2, 2, 2)))


def test_kron_examples():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    got = kron([[1, 0], [0, 0]], [[1, 0]])
    assert np.array_equal(got, [[1, 0, 0, 0], [0, 0, 0, 0]])
    K = kron(E12, E21)
    assert K.shape == (4, 4) and K.sum() == 1 and K[1, 2] == 1


def test_adjoint_examples(rng):
    assert np.array_equal(adjoint(E12), E21)
    assert np.array_equal(adjoint(np.diag([1j, 2])), np.diag([-1j, 2]))
    M = crandn(rng, 3, 2)
    assert np.array_equal(adjoint(adjoint(M)), M)


def test_hs_norm_examples():
    assert hs_norm(np.eye(2)) == pytest.approx(math.sqrt(2))
    assert hs_norm(np.ones((2, 2))) == pytest.approx(2.0)
    assert hs_norm(np.eye(2)) >= op_norm(np.eye(2))


# -- independent oracles ----------------------------------------------------------------------


@pytest.mark.parametrize("shape", [(1, 1), (1, 5), (4, 1), (2, 2), (2, 5), (5, 3), (6, 6), (16, 16)])
def test_op_norm_matches_numpy_svd(rng, shape):
    for _ in range(10):
        M = crandn(rng, *shape)
        assert op_norm(M) == pytest.approx(np.linalg.norm(M, 2), rel=1e-12)


def test_hermitian_eigh_matches_numpy(rng):
    for n in (2, 3, 5, 8):
        X = crandn(rng, n, n)
        H = X + X.conj().T
        w, V = hermitian_eigh(H)
        assert np.allclose(w, np.sort(np.linalg.eigvalsh(H))[::-1], atol=1e-10)
        assert np.allclose(V.conj().T @ V, np.eye(n), atol=1e-10)
        assert np.allclose(H @ V, V * w, atol=1e-9)


def test_top_singular_triplet(rng):
    M = crandn(rng, 3, 4)
    s, x, y = top_singular(M)
    assert s == pytest.approx(np.linalg.norm(M, 2), rel=1e-12)
    assert np.allclose(M @ x, s * y, atol=1e-10)


def test_svd2_and_schur2_reconstruct(rng):
    for _ in range(20):
        M = crandn(rng, 2, 2)
        U, s, W = svd2(M)
        assert is_unitary(U) and is_unitary(W)
        assert s[0] >= s[1] >= 0
        assert np.allclose(U @ np.diag(s) @ W.conj().T, M, atol=1e-12)
        Q, T = schur2(M)
        assert is_unitary(Q)
        assert abs(T[0, 0]) >= abs(T[1, 1])
        assert np.allclose(Q @ T @ Q.conj().T, M, atol=1e-12)


def test_schur2_defective():
    Q, T = schur2([[2, 1], [0, 2]])
    assert np.allclose(Q @ T @ Q.conj().T, [[2, 1], [0, 2]])
    assert T[1, 0] == 0


def test_phase_normalize():
    v = phase_normalize([0, 1j])
    assert np.allclose(v, [0, 1])
    v = phase_normalize([-2, 1j])
    assert v[0] == pytest.approx(2)


# -- invariants ---------------------------------------------------------------------------------


def test_unitary_invariance(rng):
    for _ in range(50):
        n = int(rng.integers(1, 6))
        M = crandn(rng, n, n)
        U, W = random_unitary(n, rng), random_unitary(n, rng)
        assert op_norm(U @ M @ W) == pytest.approx(op_norm(M), abs=1e-9)


def test_kron_multiplicative(rng):
    for _ in range(50):
        M = crandn(rng, *rng.integers(1, 5, size=2))
        N = crandn(rng, *rng.integers(1, 5, size=2))
        assert op_norm(kron(M, N)) == pytest.approx(op_norm(M) * op_norm(N), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_op_vs_hs_bounds(r, c, seed):
    M = crandn(np.random.default_rng(seed), r, c)
    op, hs = op_norm(M), hs_norm(M)
    assert op <= hs * (1 + 1e-12)
    assert hs <= math.sqrt(min(r, c)) * op * (1 + 1e-12)


# -- dependency directions ----------------------------------------------------------------------


def _as_set(vs):
    return sorted((round(abs(v[0]), 9), round(abs(v[1]), 9)) for v in vs)


def test_dependency_directions_examples():
    assert _as_set(dependency_directions(np.eye(2), E12)) == [(0.0, 1.0)]
    assert _as_set(dependency_directions(E11, E22)) == [(0.0, 1.0), (1.0, 0.0)]
    assert _as_set(dependency_directions(E11, E12)) == [(0.0, 1.0)]


def test_dependency_directions_degenerate():
    with pytest.raises(DegenerateInput):
        dependency_directions(np.eye(2), 2 * np.eye(2))


def _wedge(A1, A2, b):
    x, y = A1.conj().T @ b, A2.conj().T @ b
    return x[0] * y[1] - x[1] * y[0]


def test_dependency_directions_properties(rng):
    for _ in range(30):
        A1, A2 = crandn(rng, 2, 2), crandn(rng, 2, 2)
        etas = dependency_directions(A1, A2)
        assert 1 <= len(etas) <= 2
        for eta in etas:
            assert abs(np.linalg.norm(eta) - 1) < 1e-12
            assert abs(_wedge(A1, A2, eta)) <= 1e-8
        hits = 0
        for _ in range(50):
            b = crandn(rng, 2)
            b /= np.linalg.norm(b)
            hits += abs(_wedge(A1, A2, b)) > 1e-12
        assert hits >= 45
