"""Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
eigenvalues, inverse iteration for certified eigenvectors.

Every eigenvalue is bracketed on its own from the Gershgorin interval, so
results are bit-for-bit reproducible regardless of how many are requested.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ValidationError

EPS = np.finfo(float).eps
SAFMIN = np.finfo(float).tiny


def _as_tridiagonal(diag, off):
    d = np.ascontiguousarray(diag, dtype=float)
    e = np.ascontiguousarray(off, dtype=float)
    if d.ndim != 1 or e.ndim != 1 or len(e) != max(len(d) - 1, 0) or len(d) == 0:
        raise ValidationError(
            f"tridiagonal shape mismatch: {len(d)} diagonal, {len(e)} off-diagonal entries"
        )
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise ValidationError("tridiagonal entries must be finite")
    return d, e


def gershgorin(diag, off):
    d, e = _as_tridiagonal(diag, off)
    r = np.zeros_like(d)
    r[:-1] += np.abs(e)
    r[1:] += np.abs(e)
    lo, hi = float(np.min(d - r)), float(np.max(d + r))
    pad = 2.0 * EPS * max(abs(lo), abs(hi)) + 4.0 * SAFMIN
    return lo - pad, hi + pad


def tridiagonal_norm(diag, off) -> float:
    lo, hi = gershgorin(diag, off)
    return max(abs(lo), abs(hi))


def _pivmin(e):
    return SAFMIN * max(1.0, float(np.max(e * e)) if len(e) else 1.0)


def sturm_count(diag, off, x: float) -> int:
    """Number of eigenvalues strictly below ``x``."""
    d, e = _as_tridiagonal(diag, off)
    return int(kernels.sturm_count(d, e * e, float(x), _pivmin(e)))


def bisection_eigenvalues(diag, off, first: int = 0, count: int | None = None) -> np.ndarray:
    """Eigenvalues with 0-based ascending indices ``first .. first+count-1``."""
    d, e = _as_tridiagonal(diag, off)
    n = len(d)
    if count is None:
        count = n - first
    if first < 0 or count < 0 or first + count > n:
        raise ValidationError(f"eigenvalue indices {first}..{first + count - 1} out of range for n={n}")
    lo, hi = gershgorin(d, e)
    return np.asarray(
        kernels.bisect_eigenvalues(d, e * e, int(first), int(count), lo, hi, _pivmin(e))
    )


def matvec(diag, off, v):
    v = np.asarray(v, dtype=float)
    out = diag * v
    out[:-1] += off * v[1:]
    out[1:] += off * v[:-1]
    return out


def _start_vector(n):
    # deterministic, not orthogonal to any low mode of the operators used here
    i = np.arange(n, dtype=float)
    return 1.0 + 0.5 * np.sin(0.7 * i + 0.3) + 0.25 * np.cos(1.3 * i)


@dataclass
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float
    rayleigh: float
    converged: bool
    iterations: int


def inverse_iteration(diag, off, shift: float, orthogonal_to=(), max_iter: int = 100,
                      tol: float = 1e-8) -> EigenPair:
    """Eigenvector for an (already accurate) eigenvalue ``shift``.

    Converged when ``||(T - shift) v|| <= tol * ||v||`` with ``||v|| = 1``.
    Vectors in ``orthogonal_to`` are projected out at each step, which keeps
    nearly-degenerate clusters apart.
    """
    d, e = _as_tridiagonal(diag, off)
    n = len(d)
    norm = max(tridiagonal_norm(d, e), SAFMIN)
    pivmin = EPS * norm
    v = _start_vector(n)
    v /= np.linalg.norm(v)
    converged = False
    resid = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        w = np.asarray(kernels.shifted_solve(d, e, float(shift), v, pivmin))
        for q in orthogonal_to:
            w -= np.dot(q, w) * q
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0.0:
            w = _start_vector(n) + it
            nw = np.linalg.norm(w)
        v = w / nw
        resid = float(np.linalg.norm(matvec(d, e, v) - shift * v))
        if resid <= tol and it >= 2:
            converged = True
            break
    # fix the sign so output is deterministic
    k = int(np.argmax(np.abs(v)))
    if v[k] < 0:
        v = -v
    rq = float(np.dot(v, matvec(d, e, v)))
    return EigenPair(float(shift), v, resid, rq, converged, it)


@dataclass
class TridiagonalEigen:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns
    residuals: np.ndarray
    rayleigh: np.ndarray
    flagged: list = field(default_factory=list)


def smallest_eigenpairs(diag, off, count: int, tol: float = 1e-8) -> TridiagonalEigen:
    """The ``count`` smallest eigenpairs of a symmetric tridiagonal matrix."""
    d, e = _as_tridiagonal(diag, off)
    values = bisection_eigenvalues(d, e, 0, count)
    vecs, res, rq, flagged = [], [], [], []
    for i, lam in enumerate(values):
        pair = inverse_iteration(d, e, lam, orthogonal_to=vecs[:i], tol=tol)
        if not pair.converged:
            flagged.append(i)
        vecs.append(pair.vector)
        res.append(pair.residual)
        rq.append(pair.rayleigh)
    return TridiagonalEigen(
        values,
        np.column_stack(vecs) if vecs else np.zeros((len(d), 0)),
        np.asarray(res),
        np.asarray(rq),
        flagged,
    )
