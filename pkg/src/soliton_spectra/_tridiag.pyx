# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tridiagonal kernels (Sturm counts, bisection, shifted solves).

Mirrors ``_tridiag_py`` operation for operation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, fmax

cnp.import_array()

cdef double EPS = np.finfo(float).eps


cdef Py_ssize_t _sturm(const double[::1] d, const double[::1] e2, double x,
                       double pivmin) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, count = 0
    cdef double q = d[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def sturm_count(diag, off_sq, double x, double pivmin):
    cdef const double[::1] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef const double[::1] e2 = np.ascontiguousarray(off_sq, dtype=np.float64)
    return _sturm(d, e2, x, pivmin)


def bisect_eigenvalues(diag, off_sq, Py_ssize_t first, Py_ssize_t count,
                       double lower, double upper, double pivmin):
    cdef const double[::1] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef const double[::1] e2 = np.ascontiguousarray(off_sq, dtype=np.float64)
    out = np.empty(count)
    cdef double[::1] res = out
    cdef Py_ssize_t k, it, target
    cdef double lo, hi, mid, tol
    with nogil:
        for k in range(count):
            target = first + k
            lo = lower
            hi = upper
            for it in range(200):
                tol = 2.0 * EPS * fmax(fabs(lo), fabs(hi)) + pivmin
                if hi - lo <= tol:
                    break
                mid = 0.5 * (lo + hi)
                if mid == lo or mid == hi:
                    break
                if _sturm(d, e2, mid, pivmin) > target:
                    hi = mid
                else:
                    lo = mid
            res[k] = 0.5 * (lo + hi)
    return out


def shifted_solve(diag, off, double shift, rhs, double pivmin):
    cdef Py_ssize_t n = len(diag)
    a_arr = np.array(diag, dtype=np.float64) - shift
    b_arr = np.zeros(n)
    b_arr[:n - 1] = off
    c_arr = np.zeros(n)
    sub_arr = np.ascontiguousarray(off, dtype=np.float64)
    y_arr = np.array(rhs, dtype=np.float64)
    x_arr = np.zeros(n)
    cdef double[::1] a = a_arr
    cdef double[::1] b = b_arr
    cdef double[::1] c = c_arr
    cdef const double[::1] sub = sub_arr
    cdef double[::1] y = y_arr
    cdef double[::1] x = x_arr
    cdef Py_ssize_t i
    cdef double na, nb, nc, ny, oa, ob, oc, oy, m, piv
    with nogil:
        for i in range(n - 1):
            if fabs(sub[i]) > fabs(a[i]):
                na = sub[i]; nb = a[i + 1]; nc = b[i + 1]; ny = y[i + 1]
                oa = a[i]; ob = b[i]; oc = c[i]; oy = y[i]
                a[i] = na; b[i] = nb; c[i] = nc; y[i] = ny
                m = oa / na
                a[i + 1] = ob - m * nb
                b[i + 1] = oc - m * nc
                y[i + 1] = oy - m * ny
            else:
                piv = a[i]
                if fabs(piv) < pivmin:
                    piv = pivmin
                    a[i] = piv
                m = sub[i] / piv
                a[i + 1] = a[i + 1] - m * b[i]
                b[i + 1] = b[i + 1] - m * c[i]
                y[i + 1] = y[i + 1] - m * y[i]
        if fabs(a[n - 1]) < pivmin:
            a[n - 1] = pivmin
        x[n - 1] = y[n - 1] / a[n - 1]
        if n > 1:
            x[n - 2] = (y[n - 2] - b[n - 2] * x[n - 1]) / a[n - 2]
        for i in range(n - 3, -1, -1):
            x[i] = (y[i] - b[i] * x[i + 1] - c[i] * x[i + 2]) / a[i]
    return x_arr
