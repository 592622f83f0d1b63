import math

import numpy as np
import pytest

from ccpair.anorm import MatrixPair, a_norm
from ccpair.canonical import table_pair
from ccpair.linalg import matrix_unit, op_norm
from ccpair.opspace import (
    THEOREM_Z,
    EmbeddingSpec,
    LevelKElement,
    block_norm_reduction,
    dmp_scalar_condition,
    embedding_equivalence,
    gap_criterion,
    level2_defining_norm,
    min_norm,
    theorem3_gap,
    upper_block,
)
from ccpair.errors import ShapeError
from conftest import crandn, random_pair

EUCLID = MatrixPair.euclidean()
ROW1_EUCLID = table_pair(1, 0.0, 1.0, 0.0)
ZERO2 = LevelKElement(np.zeros((2, 2)), np.zeros((2, 2)))


def test_level_k_validation():
    with pytest.raises(ShapeError):
        LevelKElement(np.eye(2), np.eye(3))
    with pytest.raises(ValueError):
        EmbeddingSpec(0.1, 0.2, np.zeros((2, 2)))


# -- frozen values ---------------------------------------------------------------------------


def test_level2_row1_representative():
    # (d, b, c) = (0, 1, 0) on the first row: squared norms 3 and (3 + sqrt 5)/2
    assert level2_defining_norm(ROW1_EUCLID, THEOREM_Z) == pytest.approx(math.sqrt(3), abs=1e-12)
    assert level2_defining_norm(ROW1_EUCLID.transpose(), THEOREM_Z) == pytest.approx(
        math.sqrt((3 + math.sqrt(5)) / 2), abs=1e-12)
    assert level2_defining_norm(ROW1_EUCLID, ZERO2) == 0.0


def test_level2_literal_euclidean_pair():
    # the pair (diag(1, 0), E12) itself is the third row with d = 0, b = 1, c = 0
    assert level2_defining_norm(EUCLID, THEOREM_Z) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert level2_defining_norm(EUCLID.transpose(), THEOREM_Z) == pytest.approx(1.0, abs=1e-12)


def test_level2_block_layout(rng):
    pair = random_pair(rng)
    Z1, Z2 = crandn(rng, 3, 3), crandn(rng, 3, 3)
    blocks = np.block([[pair.A1[i, j] * Z1 + pair.A2[i, j] * Z2 for j in range(2)] for i in range(2)])
    assert level2_defining_norm(pair, LevelKElement(Z1, Z2)) == pytest.approx(np.linalg.norm(blocks, 2), rel=1e-12)


def test_level2_gap_examples():
    nA, nAt, eq = theorem3_gap(0, 1, 0)
    assert not eq
    assert (nA**2, nAt**2) == pytest.approx((3, (3 + math.sqrt(5)) / 2))
    assert theorem3_gap(0, 1, 1)[2]
    assert theorem3_gap(1, 2, 0)[2]


def test_min_norm_examples(rng):
    assert min_norm(MatrixPair.bidisc(), LevelKElement(matrix_unit(1, 1), matrix_unit(2, 2))) == pytest.approx(1.0, rel=1e-6)
    assert min_norm(random_pair(rng), ZERO2) == 0.0
    for _ in range(5):
        pair = random_pair(rng)
        z = crandn(rng, 2)
        level1 = LevelKElement([[z[0]]], [[z[1]]])
        assert min_norm(pair, level1) == pytest.approx(a_norm(pair, z), rel=1e-4)


def test_dmp_examples():
    assert dmp_scalar_condition(0, 0, [[1.0]])
    assert not dmp_scalar_condition(1, 0, [[1e-3]])
    r = 1 / math.sqrt(2)
    assert dmp_scalar_condition(r, r, [[0.5, 0]])
    assert not dmp_scalar_condition(1.2, 0, [[0.0]])


def test_block_norm_examples(rng):
    B = crandn(rng, 2, 3)
    full, red = block_norm_reduction(0, 0, B)
    assert full == pytest.approx(op_norm(B)) and red == pytest.approx(op_norm(B))
    full, red = block_norm_reduction(0.3, 0.5j, np.zeros((2, 3)))
    assert full == pytest.approx(0.5) and red == pytest.approx(0.5)
    full, red = block_norm_reduction(0.3, 0.5j, B)
    assert full == pytest.approx(red, abs=1e-9)


def test_embedding_examples(rng):
    B = crandn(rng, 2, 3)
    spec = EmbeddingSpec(0.4, -0.7j, B)
    z = crandn(rng, 2)
    full, red = embedding_equivalence(spec, LevelKElement([[z[0]]], [[z[1]]]))
    assert full == pytest.approx(op_norm(upper_block(0.4 * z[0], -0.7j * z[0], z[1] * B)), rel=1e-12)
    Z1 = crandn(rng, 2, 2)
    full, red = embedding_equivalence(spec, LevelKElement(Z1, np.zeros((2, 2))))
    assert full == pytest.approx(op_norm(Z1) * 0.7) and red == pytest.approx(full)


# -- invariants ------------------------------------------------------------------------------


def test_gap_criterion_grid(rng):
    vals = np.linspace(0, 2, 5)
    for row in (1, 2, 3):
        for md in vals:
            for b in vals:
                for mc in vals:
                    d = md * np.exp(2j * np.pi * rng.uniform())
                    c = mc * np.exp(2j * np.pi * rng.uniform())
                    assert theorem3_gap(d, b, c, row=row)[2] == (gap_criterion(d, b, c) <= 1e-9)


def test_min_norm_level1_transpose_split():
    z = LevelKElement([[0.7]], [[0.4 - 0.2j]])
    assert min_norm(EUCLID, z) == pytest.approx(min_norm(EUCLID.transpose(), z), rel=1e-6)
    assert level2_defining_norm(EUCLID, THEOREM_Z) - level2_defining_norm(EUCLID.transpose(), THEOREM_Z) > 0.4


def test_min_norm_compression(rng):
    for _ in range(5):
        pair = random_pair(rng)
        Z1, Z2 = crandn(rng, 2, 2), crandn(rng, 2, 2)
        full = min_norm(pair, LevelKElement(Z1, Z2))
        Z1c, Z2c = Z1.copy(), Z2.copy()
        Z1c[1, :] = Z1c[:, 1] = 0
        Z2c[1, :] = Z2c[:, 1] = 0
        assert min_norm(pair, LevelKElement(Z1c, Z2c)) <= full * (1 + 1e-6)


def test_min_norm_below_defining_norm(rng):
    # MIN is the smallest operator space structure, so it never exceeds the concrete embedding
    for _ in range(5):
        pair = random_pair(rng)
        Z = LevelKElement(crandn(rng, 2, 2), crandn(rng, 2, 2))
        assert min_norm(pair, Z) <= level2_defining_norm(pair, Z) * (1 + 1e-6)


def test_dmp_matches_block_contractivity(rng):
    outcomes = set()
    for _ in range(100):
        m, n = (int(x) for x in rng.integers(1, 4, size=2))
        a1, a2 = rng.uniform(0, 1, 2) * np.exp(2j * np.pi * rng.uniform(size=2))
        B = crandn(rng, m, n)
        B *= rng.uniform(0.05, 1.0) / op_norm(B)
        ok = dmp_scalar_condition(a1, a2, B)
        outcomes.add(ok)
        assert ok == (op_norm(upper_block(a1, a2, B)) <= 1 + 1e-9)
    assert outcomes == {True, False}


def test_block_norm_reduction_random(rng):
    for _ in range(100):
        m, n = (int(x) for x in rng.integers(1, 5, size=2))
        a1, a2 = crandn(rng, 2)
        full, red = block_norm_reduction(a1, a2, crandn(rng, m, n))
        assert full == pytest.approx(red, abs=1e-9)


def test_embedding_random(rng):
    for _ in range(50):
        k = int(rng.integers(1, 4))
        m, n = (int(x) for x in rng.integers(1, 4, size=2))
        Z = LevelKElement(crandn(rng, k, k), crandn(rng, k, k))
        a1, a2 = crandn(rng, 2)
        B = crandn(rng, m, n)
        full, red = embedding_equivalence(EmbeddingSpec(a1, a2, B), Z)
        assert full == pytest.approx(red, abs=1e-8 * max(1, red))
        for _ in range(5):
            B2 = crandn(rng, m, n)
            B2 *= op_norm(B) / op_norm(B2)
            assert embedding_equivalence(EmbeddingSpec(a1, a2, B2), Z)[0] == pytest.approx(full, abs=1e-8 * max(1, full))
