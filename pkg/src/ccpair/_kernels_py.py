"""Pure numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_kernels`` module; used when the
extension is not built or when ``CCPAIR_PURE_PYTHON=1``.
"""

import math

import numpy as np

from .linalg import opnorm2
from .sphere import refine

_BLOCK = 32


def pencil_norms_2x2(X1, X2, c1, c2):
    """Operator norms of c1[k]*X1 + c2[k]*X2 for 2x2 X1, X2 and 1-D c1, c2."""
    X1 = np.asarray(X1, dtype=np.complex128)
    X2 = np.asarray(X2, dtype=np.complex128)
    c1 = np.asarray(c1, dtype=np.complex128)
    c2 = np.asarray(c2, dtype=np.complex128)
    m00 = c1 * X1[0, 0] + c2 * X2[0, 0]
    m01 = c1 * X1[0, 1] + c2 * X2[0, 1]
    m10 = c1 * X1[1, 0] + c2 * X2[1, 0]
    m11 = c1 * X1[1, 1] + c2 * X2[1, 1]
    F = np.abs(m00) ** 2 + np.abs(m01) ** 2 + np.abs(m10) ** 2 + np.abs(m11) ** 2
    D = np.abs(m00 * m11 - m01 * m10)
    disc = np.maximum((F - 2.0 * D) * (F + 2.0 * D), 0.0)
    return np.sqrt(0.5 * (F + np.sqrt(disc)))


def support_max(e1, e2, d1, d2):
    """For each i, max_j |e1[i]*d1[j] + e2[i]*d2[j]| and the first maximizing j."""
    e1 = np.asarray(e1, dtype=np.complex128)
    e2 = np.asarray(e2, dtype=np.complex128)
    d1 = np.asarray(d1, dtype=np.complex128)
    d2 = np.asarray(d2, dtype=np.complex128)
    m = e1.shape[0]
    vals = np.empty(m)
    idx = np.empty(m, dtype=np.int64)
    for start in range(0, m, _BLOCK):
        stop = min(start + _BLOCK, m)
        P = np.outer(e1[start:stop], d1) + np.outer(e2[start:stop], d2)
        mag2 = P.real**2 + P.imag**2
        j = np.argmax(mag2, axis=1)
        idx[start:stop] = j
        vals[start:stop] = np.sqrt(mag2[np.arange(stop - start), j])
    return vals, idx


def support_refine(w1, w2, X1, X2, t0, phi0, step_t, step_phi, tol=1e-10, max_cycles=40):
    """Maximize |w1 d1 + w2 d2| / ||d1 X1 + d2 X2|| over d = (cos t, e^{i phi} sin t).

    Same pattern search as ``ccpair.sphere.refine``; returns (value, t, phi).
    """
    w1, w2 = complex(w1), complex(w2)
    a00, a01, a10, a11 = (complex(x) for x in np.asarray(X1).reshape(-1))
    b00, b01, b10, b11 = (complex(x) for x in np.asarray(X2).reshape(-1))

    def f(t, phi):
        c = math.cos(t)
        s = complex(math.cos(phi), math.sin(phi)) * math.sin(t)
        num = abs(w1 * c + w2 * s)
        return num / opnorm2(c * a00 + s * b00, c * a01 + s * b01, c * a10 + s * b10, c * a11 + s * b11)

    r = refine(f, t0, phi0, step_t, step_phi, tol, max_cycles)
    return r.value, r.t, r.phi
