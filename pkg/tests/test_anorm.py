import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccpair.anorm import (
    MatrixPair,
    a_norm,
    boundary_sample,
    dual_norm_numeric,
    dual_norm_parabola,
    dual_parabola_branch,
    in_unit_ball,
    to_boundary,
)
from ccpair.errors import InvalidPair, ShapeError
from ccpair.linalg import random_unitary
from conftest import crandn, random_pair

BIDISC = MatrixPair.bidisc()
PARAB = MatrixPair.parabola()
EUCLID = MatrixPair.euclidean()


def parab_norm(z):
    # closed form for (I, E12), independent of the operator-norm code path
    m1, m2 = abs(z[0]), abs(z[1])
    return (m2 + math.sqrt(m2 * m2 + 4 * m1 * m1)) / 2


# -- construction -----------------------------------------------------------------------------


def test_pair_validation():
    with pytest.raises(InvalidPair):
        MatrixPair(np.eye(2), 3j * np.eye(2))
    with pytest.raises(ShapeError):
        MatrixPair(np.eye(2), np.eye(3))
    with pytest.raises(ShapeError):
        MatrixPair(np.ones((2, 3)), np.ones((2, 3)))


def test_pair_is_read_only():
    with pytest.raises(ValueError):
        PARAB.A1[0, 0] = 5


# -- frozen values -------------------------------------------------------------------------------


def test_a_norm_examples():
    assert a_norm(BIDISC, (3, 4)) == pytest.approx(4.0)
    assert a_norm(PARAB, (1, 0)) == pytest.approx(1.0)
    assert a_norm(PARAB, (1, 1)) == pytest.approx((1 + math.sqrt(5)) / 2)
    assert a_norm(EUCLID, (3, 4j)) == pytest.approx(5.0)


def test_a_norm_parabola_closed_form(rng):
    for _ in range(100):
        z = crandn(rng, 2)
        assert a_norm(PARAB, z) == pytest.approx(parab_norm(z), rel=1e-12)


def test_in_unit_ball_examples():
    assert in_unit_ball(PARAB, (0.5, 0.7))
    assert in_unit_ball(random_pair(np.random.default_rng(0)), (0, 0))
    assert not in_unit_ball(PARAB, (1, 0.01))


def test_dual_norm_numeric_examples():
    assert dual_norm_numeric(BIDISC, (1, 1)) == pytest.approx(2.0, rel=1e-9)
    assert dual_norm_numeric(PARAB, (1, 0)) == pytest.approx(1.0, rel=1e-9)
    assert dual_norm_numeric(PARAB, (1, 1)) == pytest.approx(1.25, rel=1e-9)
    assert dual_norm_numeric(EUCLID, (3, 4)) == pytest.approx(5.0, rel=1e-9)


def test_dual_norm_parabola_examples():
    assert dual_norm_parabola((0, 1)) == 1.0
    assert dual_norm_parabola((1, 0)) == 1.0
    assert dual_norm_parabola((2, 1)) == 2.0
    assert dual_parabola_branch((1, 1)) == "quadratic"
    assert dual_parabola_branch((1, 0)) == "linear"


def test_dual_parabola_continuous_at_branch_boundary():
    for m1 in np.linspace(0.1, 3, 12):
        lo = dual_norm_parabola((m1, m1 / 2 * (1 - 1e-12)))
        hi = dual_norm_parabola((m1, m1 / 2 * (1 + 1e-12)))
        assert lo == pytest.approx(hi, rel=1e-9)


def test_boundary_sample_examples():
    pair = random_pair(np.random.default_rng(5))
    pts = boundary_sample(pair, 1, seed=3)
    assert len(pts) == 1 and abs(a_norm(pair, pts[0]) - 1) <= 1e-10
    assert np.allclose(to_boundary(BIDISC, (1, 1)), (1, 1))
    assert np.allclose(to_boundary(PARAB, (0, 2)), (0, 1))
    assert all(np.allclose(a, b) for a, b in zip(boundary_sample(pair, 5, 9), boundary_sample(pair, 5, 9)))


# -- invariants ------------------------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_norm_axioms(seed):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng)
    z, w = crandn(rng, 2), crandn(rng, 2)
    lam = complex(*rng.normal(size=2))
    assert a_norm(pair, z) > 0
    assert a_norm(pair, lam * z) == pytest.approx(abs(lam) * a_norm(pair, z), rel=1e-12)
    assert a_norm(pair, z + w) <= a_norm(pair, z) + a_norm(pair, w) + 1e-10


def test_transpose_and_unitary_invariance(rng):
    for _ in range(50):
        pair = random_pair(rng)
        z = crandn(rng, 2)
        U, W = random_unitary(2, rng), random_unitary(2, rng)
        moved = MatrixPair(U @ pair.A1 @ W, U @ pair.A2 @ W)
        assert a_norm(pair.transpose(), z) == pytest.approx(a_norm(pair, z), abs=1e-10)
        assert a_norm(moved, z) == pytest.approx(a_norm(pair, z), abs=1e-9)


def test_generalized_cauchy_schwarz(rng):
    for _ in range(30):
        pair = random_pair(rng)
        z, w = crandn(rng, 2), crandn(rng, 2)
        assert abs(z @ w) <= dual_norm_numeric(pair, w) * a_norm(pair, z) * (1 + 1e-6)


def test_dual_closed_form_grid():
    grid = np.linspace(0, 2, 21)
    for m1 in grid:
        for m2 in grid:
            exact = dual_norm_parabola((m1, m2))
            num = dual_norm_numeric(PARAB, (m1, m2))
            assert num == pytest.approx(exact, rel=1e-5, abs=1e-12)


def test_sampled_bidual_is_a_lower_bound(rng):
    for _ in range(5):
        pair = random_pair(rng)
        ws = [crandn(rng, 2) for _ in range(400)]
        for _ in range(3):
            z = crandn(rng, 2)
            best = max(abs(z @ w) / dual_norm_numeric(pair, w) for w in ws)
            assert best <= a_norm(pair, z) * (1 + 1e-6)
            assert best >= a_norm(pair, z) * (1 - 0.05)


def test_bidual_exact_supporting_functional(rng):
    # The top singular pair of the pencil gives a functional attaining the norm.
    for _ in range(20):
        pair = random_pair(rng)
        z = crandn(rng, 2)
        M = pair.pencil(*z)
        U, s, Vh = np.linalg.svd(M)
        x, y = Vh[0].conj(), U[:, 0]
        w = np.array([np.vdot(y, pair.A1 @ x), np.vdot(y, pair.A2 @ x)])
        assert abs(z @ w) / dual_norm_numeric(pair, w) >= a_norm(pair, z) * (1 - 1e-4)
