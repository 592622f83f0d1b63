import math

import numpy as np
import pytest

from ccpair.anorm import MatrixPair
from ccpair.canonical import LinearMove, apply_moves
from ccpair.contractivity import (
    UVParams,
    VPair,
    cc_bound,
    g_eval,
    inf_g,
    is_contractive_uv,
    lv_norm,
    rowvec_cc_bound,
    testfn_sup as sup_over_test_functions,
    uv_direct_sup,
)
from ccpair.errors import ShapeError
from ccpair.linalg import hs_norm, op_norm
from conftest import crandn, random_pair

PARAB = MatrixPair.parabola()
EUCLID = MatrixPair.euclidean()
BIDISC = MatrixPair.bidisc()
R2 = 1 / math.sqrt(2)
WITNESS = VPair([[R2, 0]], [[0, 1]])
ZERO = VPair([[0, 0]], [[0, 0]])


def test_vpair_validation():
    with pytest.raises(ShapeError):
        VPair([[1, 0]], [[1], [0]])
    with pytest.raises(ValueError):
        UVParams(-1, 0)


# -- frozen values ---------------------------------------------------------------------------


def test_lv_norm_examples():
    assert lv_norm(PARAB, WITNESS) == pytest.approx(1.0, abs=1e-9)
    assert lv_norm(PARAB, WITNESS, method="dual") == pytest.approx(1.0, abs=1e-7)
    assert lv_norm(random_pair(np.random.default_rng(0)), ZERO) == 0.0
    assert lv_norm(EUCLID, VPair([[1, 0]], [[0, 1]])) == pytest.approx(1.0, abs=1e-9)


def test_cc_bound_examples():
    assert cc_bound(PARAB, WITNESS) == pytest.approx(math.sqrt(1.5), abs=1e-12)
    assert cc_bound(EUCLID, VPair([[1, 0]], [[0, 1]])) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert cc_bound(PARAB, ZERO) == 0.0


def test_rowvec_cc_bound_examples():
    assert rowvec_cc_bound(PARAB, WITNESS) == pytest.approx(math.sqrt(1.5), abs=1e-12)
    assert rowvec_cc_bound(BIDISC, VPair.uv(1, 1)) == pytest.approx(1.0)
    assert rowvec_cc_bound(BIDISC, VPair.uv(0, 0)) == 0.0
    with pytest.raises(ShapeError):
        rowvec_cc_bound(PARAB, VPair([[1], [0]], [[0], [1]]))


def test_g_eval_examples():
    uv = UVParams(R2, 1)
    g = g_eval(PARAB, uv, (0, 1))
    assert g.value == pytest.approx(0.5) and g.schwarz_gap == pytest.approx(0.0)
    g = g_eval(PARAB, uv, (1, 0))
    assert g.value == pytest.approx(0.0, abs=1e-15) and g.schwarz_gap == pytest.approx(1.0)
    assert g_eval(random_pair(np.random.default_rng(1)), UVParams(0, 0), (0.6, 0.8j)).value == 1.0
    with pytest.raises(ValueError):
        g_eval(PARAB, uv, (1, 1))


def test_inf_g_examples():
    g = inf_g(PARAB, UVParams(R2, 1))
    assert g.value == pytest.approx(0.0, abs=1e-7)
    assert abs(g.beta[0]) == pytest.approx(1.0, abs=1e-3)
    assert inf_g(PARAB, UVParams(0, 0)).value == pytest.approx(1.0)
    assert inf_g(EUCLID, UVParams(1, 1)).value == pytest.approx(0.0, abs=1e-7)


def test_is_contractive_examples():
    assert is_contractive_uv(PARAB, UVParams(R2, 1))
    assert not is_contractive_uv(PARAB, UVParams(1.1, 0))
    assert is_contractive_uv(random_pair(np.random.default_rng(2)), UVParams(0, 0))


def test_testfn_sup_examples(rng):
    for _ in range(3):
        V = VPair(crandn(rng, 1, 2), crandn(rng, 1, 2))
        assert sup_over_test_functions(EUCLID, V) == pytest.approx(op_norm(np.vstack([V.V1, V.V2])), abs=1e-9)
    assert sup_over_test_functions(EUCLID, ZERO) == 0.0
    V = VPair([[1, 0]], [[0, 1]])
    assert sup_over_test_functions(EUCLID, V) == pytest.approx(1.0, abs=1e-9)
    assert sup_over_test_functions(EUCLID, V) < cc_bound(EUCLID, V)


# -- oracles ---------------------------------------------------------------------------------


def test_lv_bidisc_oracle(rng):
    # The dual of the max-modulus norm is the l1 norm, whose extreme points are unit
    # multiples of e1 and e2, so lv = max(||V1||, ||V2||) for V of any shape.
    for shape in [(1, 2), (2, 1), (2, 2), (2, 3)]:
        V = VPair(crandn(rng, *shape), crandn(rng, *shape))
        expected = max(op_norm(V.V1), op_norm(V.V2))
        assert lv_norm(BIDISC, V, method="dual") == pytest.approx(expected, rel=1e-6)


def test_lv_routes_agree(rng):
    for shape in [(1, 2), (2, 1), (1, 1)]:
        for _ in range(3):
            pair = random_pair(rng)
            V = VPair(crandn(rng, *shape), crandn(rng, *shape))
            assert lv_norm(pair, V, "bidual") == pytest.approx(lv_norm(pair, V, "dual"), rel=1e-6)
    with pytest.raises(ShapeError):
        lv_norm(PARAB, VPair(np.eye(2), np.eye(2)), "bidual")


def test_inf_g_against_dense_grid(rng):
    t = np.linspace(0, np.pi / 2, 301)
    phi = np.linspace(0, 2 * np.pi, 300, endpoint=False)
    T, P = np.meshgrid(t, phi)
    B = np.stack([np.cos(T).ravel(), (np.exp(1j * P) * np.sin(T)).ravel()], axis=1)
    for _ in range(5):
        pair = random_pair(rng)
        u, v = rng.uniform(0.1, 0.8, 2)
        x = B @ pair.A1.conj()
        y = B @ pair.A2.conj()
        q1 = np.sum(np.abs(x) ** 2, 1)
        q2 = np.sum(np.abs(y) ** 2, 1)
        k = np.sum(np.conj(x) * y, 1)
        g = 1 - u * u * q1 - v * v * q2 + u * u * v * v * (q1 * q2 - np.abs(k) ** 2)
        got = inf_g(pair, UVParams(u, v)).value
        assert got <= g.min() + 1e-12
        assert got >= g.min() - 1e-3


# -- invariants ------------------------------------------------------------------------------


def test_testfn_dominated_by_cc(rng):
    for _ in range(30):
        pair = random_pair(rng)
        V = VPair(crandn(rng, 2, 2), crandn(rng, 2, 2))
        assert sup_over_test_functions(pair, V, restarts=10) <= cc_bound(pair, V) + 1e-7


def test_rowvec_matches_cc(rng):
    for _ in range(30):
        pair = random_pair(rng)
        V = VPair(crandn(rng, 1, 2), crandn(rng, 1, 2))
        assert rowvec_cc_bound(pair, V) == pytest.approx(cc_bound(pair, V), abs=1e-9)


def test_euclidean_identities(rng):
    for _ in range(20):
        V = VPair(crandn(rng, 1, 2), crandn(rng, 1, 2))
        S = np.vstack([V.V1, V.V2])
        assert cc_bound(EUCLID, V) ** 2 == pytest.approx(hs_norm(S) ** 2, abs=1e-9)


def test_contractivity_oracles_agree(rng):
    for i in range(50):
        pair = random_pair(rng)
        u, v = rng.uniform(0.2, 1.0, 2)
        base = lv_norm(pair, VPair.uv(u, v))
        # land 10% inside or outside the unit ball of maps
        s = (0.9 if i % 2 == 0 else 1.1) / base
        uv = UVParams(s * u, s * v)
        V = uv.as_vpair()
        lv = lv_norm(pair, V)
        expected = lv <= 1 + 1e-9
        assert is_contractive_uv(pair, uv) == expected
        assert (sup_over_test_functions(pair, V, restarts=20) <= 1 + 1e-9) == expected
        assert (uv_direct_sup(pair, uv) <= 1 + 1e-9) == expected


def test_linear_move_covariance(rng):
    for _ in range(20):
        pair = random_pair(rng)
        p, q, r, s = crandn(rng, 4)
        T = LinearMove(p, q, r, s)
        V = VPair(crandn(rng, 1, 2), crandn(rng, 1, 2))
        moved = apply_moves(pair, T=T)
        assert lv_norm(moved, V) == pytest.approx(lv_norm(pair, V.transformed(p, q, r, s)), rel=1e-6)
        assert cc_bound(moved, V) == pytest.approx(cc_bound(pair, V.transformed(p, q, r, s)), rel=1e-12)
