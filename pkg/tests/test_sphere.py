import math

import numpy as np
import pytest

from ccpair import sphere


def test_grid_covers_poles_and_is_unit():
    T, P, d1, d2 = sphere.sphere_grid(9, 16)
    assert T.min() == 0.0 and T.max() == pytest.approx(math.pi / 2)
    assert np.allclose(np.abs(d1) ** 2 + np.abs(d2) ** 2, 1.0)


def test_to_angles_roundtrip():
    for t, phi in [(0.3, 1.2), (1.2, 5.0), (0.7, 0.0)]:
        d = sphere.sphere_point(t, phi) * np.exp(0.4j)
        t2, phi2 = sphere.to_angles(d)
        assert abs(np.vdot(sphere.sphere_point(t2, phi2), d)) == pytest.approx(1.0)


def test_golden_max_quadratic():
    x, v = sphere.golden_max(lambda s: -(s - 0.3) ** 2, -1.0, 1.0, 1e-10)
    assert x == pytest.approx(0.3, abs=1e-6)
    assert v == pytest.approx(0.0, abs=1e-12)


def test_maximize_rayleigh_quotient():
    # max over unit d of d* H d is the top eigenvalue; H is Hermitian.
    H = np.array([[1.0, 0.5 - 0.3j], [0.5 + 0.3j, -0.4]])
    H00, H01, H11 = H[0, 0].real, H[0, 1], H[1, 1].real

    def fvec(d1, d2):
        return (H00 * np.abs(d1) ** 2 + 2 * np.real(np.conj(d1) * H01 * d2) + H11 * np.abs(d2) ** 2)

    def fs(d1, d2):
        return float(fvec(np.array([d1]), np.array([d2]))[0])

    res = sphere.maximize(fvec, fs, nt=17, nphi=33)
    assert res.value == pytest.approx(np.linalg.eigvalsh(H)[-1], abs=1e-10)
    assert fs(*res.point) == pytest.approx(res.value)
