# cython: language_level=3
"""Compiled hot loops: batched 2x2 pencil norms and support-function scans."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, fmod, fabs

cnp.import_array()


def pencil_norms_2x2(X1, X2, c1, c2):
    """Operator norms of c1[k]*X1 + c2[k]*X2 for 2x2 X1, X2 and 1-D c1, c2."""
    cdef const double complex[:, ::1] A = np.ascontiguousarray(X1, dtype=np.complex128)
    cdef const double complex[:, ::1] B = np.ascontiguousarray(X2, dtype=np.complex128)
    cdef const double complex[::1] a = np.ascontiguousarray(c1, dtype=np.complex128).reshape(-1)
    cdef const double complex[::1] b = np.ascontiguousarray(c2, dtype=np.complex128).reshape(-1)
    cdef Py_ssize_t n = a.shape[0], k
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double complex m00, m01, m10, m11, det
    cdef double F, D, disc
    cdef double complex a00 = A[0, 0], a01 = A[0, 1], a10 = A[1, 0], a11 = A[1, 1]
    cdef double complex b00 = B[0, 0], b01 = B[0, 1], b10 = B[1, 0], b11 = B[1, 1]
    for k in range(n):
        m00 = a[k] * a00 + b[k] * b00
        m01 = a[k] * a01 + b[k] * b01
        m10 = a[k] * a10 + b[k] * b10
        m11 = a[k] * a11 + b[k] * b11
        F = (m00.real * m00.real + m00.imag * m00.imag
             + m01.real * m01.real + m01.imag * m01.imag
             + m10.real * m10.real + m10.imag * m10.imag
             + m11.real * m11.real + m11.imag * m11.imag)
        det = m00 * m11 - m01 * m10
        D = sqrt(det.real * det.real + det.imag * det.imag)
        disc = (F - 2.0 * D) * (F + 2.0 * D)
        if disc < 0.0:
            disc = 0.0
        out[k] = sqrt(0.5 * (F + sqrt(disc)))
    return out_arr


def support_max(e1, e2, d1, d2):
    """For each i, max_j |e1[i]*d1[j] + e2[i]*d2[j]| and the first maximizing j."""
    cdef const double complex[::1] x1 = np.ascontiguousarray(e1, dtype=np.complex128).reshape(-1)
    cdef const double complex[::1] x2 = np.ascontiguousarray(e2, dtype=np.complex128).reshape(-1)
    cdef const double complex[::1] y1 = np.ascontiguousarray(d1, dtype=np.complex128).reshape(-1)
    cdef const double complex[::1] y2 = np.ascontiguousarray(d2, dtype=np.complex128).reshape(-1)
    cdef Py_ssize_t m = x1.shape[0], nd = y1.shape[0], i, j, jbest
    vals_arr = np.empty(m, dtype=np.float64)
    idx_arr = np.empty(m, dtype=np.int64)
    cdef double[::1] vals = vals_arr
    cdef long long[::1] idx = idx_arr
    cdef double complex p
    cdef double best, mag2
    for i in range(m):
        best = -1.0
        jbest = 0
        for j in range(nd):
            p = x1[i] * y1[j] + x2[i] * y2[j]
            mag2 = p.real * p.real + p.imag * p.imag
            if mag2 > best:
                best = mag2
                jbest = j
        vals[i] = sqrt(best)
        idx[i] = jbest
    return vals_arr, idx_arr


# -- pattern search for the support function of a 2x2 pencil ----------------------------

cdef double _HALF_PI = 1.5707963267948966
cdef double _TWO_PI = 6.283185307179586
cdef double _INVPHI = 0.6180339887498949
cdef double _LINE_REL_TOL = 1e-3
cdef double _SHRINK_MIN = 0.05


cdef inline double _opnorm2(double complex m00, double complex m01,
                            double complex m10, double complex m11) nogil:
    cdef double F = (m00.real * m00.real + m00.imag * m00.imag
                     + m01.real * m01.real + m01.imag * m01.imag
                     + m10.real * m10.real + m10.imag * m10.imag
                     + m11.real * m11.real + m11.imag * m11.imag)
    cdef double complex det = m00 * m11 - m01 * m10
    cdef double D = sqrt(det.real * det.real + det.imag * det.imag)
    cdef double disc = (F - 2.0 * D) * (F + 2.0 * D)
    if disc < 0.0:
        disc = 0.0
    return sqrt(0.5 * (F + sqrt(disc)))


cdef struct SupportProblem:
    double complex w1, w2
    double complex a00, a01, a10, a11, b00, b01, b10, b11


cdef inline double _support_obj(SupportProblem* pr, double t, double phi) nogil:
    cdef double c, sn
    if t < 0.0:
        t = 0.0
    elif t > _HALF_PI:
        t = _HALF_PI
    c = cos(t)
    sn = sin(t)
    cdef double complex s = (cos(phi) + 1j * sin(phi)) * sn
    cdef double complex num = pr.w1 * c + pr.w2 * s
    cdef double den = _opnorm2(c * pr.a00 + s * pr.b00, c * pr.a01 + s * pr.b01,
                               c * pr.a10 + s * pr.b10, c * pr.a11 + s * pr.b11)
    return sqrt(num.real * num.real + num.imag * num.imag) / den


cdef double _line_golden(SupportProblem* pr, double t, double phi, double ht, double hp,
                         double tol, double f0, double* s_out) nogil:
    cdef double a = -1.0, b = 1.0
    cdef double c = b - _INVPHI * (b - a)
    cdef double d = a + _INVPHI * (b - a)
    cdef double fc = _support_obj(pr, t + c * ht, phi + c * hp)
    cdef double fd = _support_obj(pr, t + d * ht, phi + d * hp)
    cdef double bx, bv, v
    while b - a > tol:
        if fc >= fd:
            b = d
            d = c
            fd = fc
            c = b - _INVPHI * (b - a)
            fc = _support_obj(pr, t + c * ht, phi + c * hp)
        else:
            a = c
            c = d
            fc = fd
            d = a + _INVPHI * (b - a)
            fd = _support_obj(pr, t + d * ht, phi + d * hp)
    if fc >= fd:
        bx = c
        bv = fc
    else:
        bx = d
        bv = fd
    v = _support_obj(pr, t - ht, phi - hp)
    if v > bv:
        bx = -1.0
        bv = v
    v = _support_obj(pr, t + ht, phi + hp)
    if v > bv:
        bx = 1.0
        bv = v
    if f0 >= bv:
        s_out[0] = 0.0
        return f0
    s_out[0] = bx
    return bv


def support_refine(w1, w2, X1, X2, double t0, double phi0, double step_t, double step_phi,
                   double tol=1e-10, int max_cycles=40):
    """Maximize |w1 d1 + w2 d2| / ||d1 X1 + d2 X2|| over d = (cos t, e^{i phi} sin t).

    Same pattern search as ``ccpair.sphere.refine``; returns (value, t, phi).
    """
    cdef const double complex[:, ::1] A = np.ascontiguousarray(X1, dtype=np.complex128)
    cdef const double complex[:, ::1] B = np.ascontiguousarray(X2, dtype=np.complex128)
    cdef SupportProblem pr
    pr.w1 = w1
    pr.w2 = w2
    pr.a00 = A[0, 0]; pr.a01 = A[0, 1]; pr.a10 = A[1, 0]; pr.a11 = A[1, 1]
    pr.b00 = B[0, 0]; pr.b01 = B[0, 1]; pr.b10 = B[1, 0]; pr.b11 = B[1, 1]
    cdef double dirs_t[4]
    cdef double dirs_p[4]
    dirs_t[:] = [1.0, 0.0, 1.0, 1.0]
    dirs_p[:] = [0.0, 1.0, 1.0, -1.0]
    cdef double t = t0, phi = phi0, val, scale = 1.0, moved, line_tol, ht, hp, s, v
    cdef double hmax = step_t if step_t > step_phi else step_phi
    cdef int cyc, k
    with nogil:
        val = _support_obj(&pr, t, phi)
        for cyc in range(max_cycles):
            moved = 0.0
            line_tol = tol / hmax / scale
            if line_tol < _LINE_REL_TOL:
                line_tol = _LINE_REL_TOL
            for k in range(4):
                ht = dirs_t[k] * step_t * scale
                hp = dirs_p[k] * step_phi * scale
                v = _line_golden(&pr, t, phi, ht, hp, line_tol, val, &s)
                if s != 0.0 and v > val + 4e-16 * (val if val > 1.0 else 1.0):
                    t = t + s * ht
                    if t < 0.0:
                        t = 0.0
                    elif t > _HALF_PI:
                        t = _HALF_PI
                    phi = fmod(phi + s * hp, _TWO_PI)
                    if phi < 0.0:
                        phi += _TWO_PI
                    val = v
                    if fabs(s) > moved:
                        moved = fabs(s)
            if moved < 0.5:
                scale *= (4.0 * moved if 4.0 * moved > _SHRINK_MIN else _SHRINK_MIN)
            if scale * hmax < tol:
                break
    return val, t, phi
