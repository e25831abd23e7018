"""Pure-Python tridiagonal kernels.

Reference implementation of the routines in ``_tridiag.pyx``.  Both modules
expose the same three functions and must produce identical results up to
floating-point evaluation order (which is the same by construction).
"""

import numpy as np

EPS = np.finfo(float).eps


def sturm_count(diag, off_sq, x, pivmin):
    """Number of eigenvalues of the symmetric tridiagonal matrix below ``x``.

    ``off_sq`` holds the squared off-diagonal entries.
    """
    d = diag
    e2 = off_sq
    n = len(d)
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def bisect_eigenvalues(diag, off_sq, first, count, lower, upper, pivmin):
    """Eigenvalues ``first .. first+count-1`` (0-based, ascending) by bisection.

    Each eigenvalue is bracketed independently from ``[lower, upper]`` so the
    result does not depend on how many eigenvalues are requested.
    """
    d = [float(v) for v in diag]
    e2 = [float(v) for v in off_sq]
    out = np.empty(count)
    for k in range(count):
        target = first + k
        lo = lower
        hi = upper
        for _ in range(200):
            tol = 2.0 * EPS * max(abs(lo), abs(hi)) + pivmin
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if sturm_count(d, e2, mid, pivmin) > target:
                hi = mid
            else:
                lo = mid
        out[k] = 0.5 * (lo + hi)
    return out


def shifted_solve(diag, off, shift, rhs, pivmin):
    """Solve ``(T - shift*I) x = rhs`` by Gaussian elimination with partial
    pivoting.  Zero pivots are replaced by ``pivmin`` (inverse iteration only
    needs the direction of the solution).
    """
    n = len(diag)
    # rows after elimination: a[i] x_i + b[i] x_{i+1} + c[i] x_{i+2} = y[i]
    a = [float(v) - shift for v in diag]
    b = [float(v) for v in off] + [0.0]
    c = [0.0] * n
    sub = [float(v) for v in off]
    y = [float(v) for v in rhs]
    for i in range(n - 1):
        if abs(sub[i]) > abs(a[i]):
            # swap rows i and i+1
            na, nb, nc, ny = sub[i], a[i + 1], b[i + 1], y[i + 1]
            oa, ob, oc, oy = a[i], b[i], c[i], y[i]
            a[i], b[i], c[i], y[i] = na, nb, nc, ny
            m = oa / na
            a[i + 1] = ob - m * nb
            b[i + 1] = oc - m * nc
            y[i + 1] = oy - m * ny
        else:
            piv = a[i]
            if abs(piv) < pivmin:
                piv = pivmin
                a[i] = piv
            m = sub[i] / piv
            a[i + 1] = a[i + 1] - m * b[i]
            b[i + 1] = b[i + 1] - m * c[i]
            y[i + 1] = y[i + 1] - m * y[i]
    if abs(a[n - 1]) < pivmin:
        a[n - 1] = pivmin
    x = [0.0] * n
    x[n - 1] = y[n - 1] / a[n - 1]
    if n > 1:
        x[n - 2] = (y[n - 2] - b[n - 2] * x[n - 1]) / a[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (y[i] - b[i] * x[i + 1] - c[i] * x[i + 2]) / a[i]
    return np.asarray(x)
