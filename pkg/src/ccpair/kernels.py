"""Backend selection for the hot kernels.

The compiled extension is preferred; set ``CCPAIR_PURE_PYTHON=1`` to force the
numpy fallback (useful for benchmarking and for checking that both agree).
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("CCPAIR_PURE_PYTHON", "") == "1":
    _impl = _kernels_py
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "numpy"

pencil_norms_2x2 = _impl.pencil_norms_2x2
support_max = _impl.support_max
support_refine = _impl.support_refine


def pencil_norms(X1, X2, c1, c2):
    """Operator norms of c1[k]*X1 + c2[k]*X2 for square or rectangular X1, X2."""
    X1 = np.asarray(X1, dtype=np.complex128)
    X2 = np.asarray(X2, dtype=np.complex128)
    if X1.shape == (2, 2):
        return pencil_norms_2x2(X1, X2, c1, c2)
    c1 = np.asarray(c1, dtype=np.complex128).reshape(-1)
    c2 = np.asarray(c2, dtype=np.complex128).reshape(-1)
    r, c = X1.shape
    if r == 1 or c == 1:
        M = c1[:, None] * X1.reshape(-1)[None, :] + c2[:, None] * X2.reshape(-1)[None, :]
        return np.sqrt(np.sum(M.real**2 + M.imag**2, axis=1))
    out = np.empty(c1.shape[0])
    for start in range(0, c1.shape[0], 4096):
        sl = slice(start, start + 4096)
        M = c1[sl, None, None] * X1[None] + c2[sl, None, None] * X2[None]
        out[sl] = np.linalg.norm(M, ord=2, axis=(1, 2))
    return out


__all__ = ["BACKEND", "pencil_norms_2x2", "support_max", "support_refine", "pencil_norms"]
