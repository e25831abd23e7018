"""Hermite polynomials and the eigenfunctions of the 1-D Gaussian soliton.

Convention: probabilists' polynomials ``He_p`` (orthogonal for
``exp(-x**2/2)``), evaluated at ``sqrt(|rho|) * y``.  On the line with
potential ``f(y) = rho*y**2/2`` the drift Laplacian ``u'' - f'u'`` has

* shrinker (``rho > 0``): ``u = He_p(sqrt(rho) y)``, eigenvalue ``rho*p``;
* expander (``rho < 0``): ``u = exp(rho*y**2/2) He_p(sqrt(-rho) y)``,
  eigenvalue ``-rho*(1 + p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .eigensolver import bisection_eigenvalues
from .errors import ValidationError

MAX_DEGREE = 60
SQRT_2PI = math.sqrt(2.0 * math.pi)


def he_eval(p: int, x):
    """``He_p(x)`` by the three-term recurrence; ``x`` may be an array."""
    if int(p) != p or p < 0:
        raise ValidationError(f"Hermite degree must be a nonnegative integer, got {p!r}")
    if p > MAX_DEGREE:
        raise ValidationError(f"Hermite degree {p} exceeds the limit {MAX_DEGREE}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if p == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for j in range(1, p):
        prev, cur = cur, x * cur - j * prev
    return cur if cur.ndim else float(cur)


def he_derivative(p: int, x, order: int = 1):
    """Derivatives from ``He_p' = p He_{p-1}`` (no differencing)."""
    coeff = 1
    for j in range(order):
        if p - j <= 0:
            return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        coeff *= p - j
    return coeff * he_eval(p - order, x)


@dataclass(frozen=True)
class GaussianEigenfunction:
    mode: str
    rho: float
    degree: int

    def __post_init__(self):
        if self.mode not in ("shrinker", "expander"):
            raise ValidationError(f"mode must be 'shrinker' or 'expander', got {self.mode!r}")
        if not math.isfinite(self.rho):
            raise ValidationError("rho must be finite")
        if self.mode == "shrinker" and not self.rho > 0:
            raise ValidationError(f"shrinker mode needs rho > 0, got {self.rho}")
        if self.mode == "expander" and not self.rho < 0:
            raise ValidationError(f"expander mode needs rho < 0, got {self.rho}")
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValidationError(f"degree must be a nonnegative integer, got {self.degree!r}")
        if self.degree > MAX_DEGREE:
            raise ValidationError(f"Hermite degree {self.degree} exceeds the limit {MAX_DEGREE}")

    @property
    def scale(self) -> float:
        return math.sqrt(abs(self.rho))

    @property
    def eigenvalue(self) -> float:
        if self.mode == "shrinker":
            return self.rho * self.degree
        return -self.rho * (1 + self.degree)

    def derivatives(self, y):
        """``(u, u', u'')`` at ``y``, from the Hermite derivative identity."""
        y = np.asarray(y, dtype=float)
        a = self.scale
        p = self.degree
        x = a * y
        h0 = he_eval(p, x)
        h1 = a * he_derivative(p, x, 1)
        h2 = a * a * he_derivative(p, x, 2)
        if self.mode == "shrinker":
            return h0, h1, h2
        rho = self.rho
        g0 = np.exp(0.5 * rho * y * y)
        g1 = rho * y * g0
        g2 = (rho + rho * rho * y * y) * g0
        return g0 * h0, g1 * h0 + g0 * h1, g2 * h0 + 2.0 * g1 * h1 + g0 * h2

    def __call__(self, y):
        return eigenfunction_eval(self, y)


def eigenfunction_eval(e: GaussianEigenfunction, y):
    u = e.derivatives(y)[0]
    return u if np.ndim(u) else float(u)


def residual_radius(rho: float, p_max: int) -> float:
    """Grid half-width covering the classically allowed region of mode ``p_max``."""
    return max(8.0, 2.0 * math.sqrt((2 * p_max + 1) / abs(rho)))


def drift_residual(e: GaussianEigenfunction, grid=None, points: int = 2001) -> float:
    """``max |u'' - rho*y*u' + nu*u| / max |u|`` over the grid."""
    radius = residual_radius(e.rho, e.degree)
    if grid is None:
        grid = np.linspace(-radius, radius, points)
    grid = np.asarray(grid, dtype=float)
    if grid.min() > -radius * (1 - 1e-12) or grid.max() < radius * (1 - 1e-12):
        raise ValidationError(f"grid must span at least [-{radius:g}, {radius:g}]")
    u, du, d2u = e.derivatives(grid)
    drift = d2u - e.rho * grid * du
    return float(np.max(np.abs(drift + e.eigenvalue * u)) / np.max(np.abs(u)))


@lru_cache(maxsize=None)
def _gauss_hermite(n: int):
    # Jacobi matrix of the monic He recurrence: zero diagonal, sqrt(j) off-diagonal
    off = np.sqrt(np.arange(1, n, dtype=float))
    nodes = bisection_eigenvalues(np.zeros(n), off)
    nodes = 0.5 * (nodes - nodes[::-1])  # exact symmetry of the rule
    # Eigenvector of the Jacobi matrix at each node, from its own recurrence
    # (orthonormal polynomial values); weight = mu_0 * v_0**2 / |v|**2.
    total = np.ones(n)
    prev = np.zeros(n)
    cur = np.ones(n)
    for j in range(n - 1):
        prev, cur = cur, (nodes * cur - math.sqrt(j) * prev) / math.sqrt(j + 1)
        total += cur * cur
    weights = SQRT_2PI / total
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_hermite(n: int):
    """Nodes and weights with ``sum w g(x) ~ integral g(x) exp(-x**2/2) dx``."""
    if int(n) != n or n < 1:
        raise ValidationError(f"number of nodes must be a positive integer, got {n!r}")
    return _gauss_hermite(int(n))


def weighted_inner_product(e1: GaussianEigenfunction, e2: GaussianEigenfunction,
                           nodes: int | None = None) -> float:
    """``integral u1 u2 exp(-f) dy`` with ``f = rho*y**2/2``.

    In both modes the integrand is a polynomial in ``sqrt(|rho|) y`` times
    ``exp(-|rho| y**2 / 2)``, so Gauss-Hermite with ``p1 + p2 + 2`` nodes is
    exact up to rounding.
    """
    if e1.mode != e2.mode or e1.rho != e2.rho:
        raise ValidationError("inner product needs eigenfunctions of the same mode and rho")
    minimum = e1.degree + e2.degree + 2
    n = minimum if nodes is None else int(nodes)
    if n < minimum:
        raise ValidationError(f"need at least {minimum} quadrature nodes, got {n}")
    x, w = gauss_hermite(n)
    a = e1.scale
    y = x / a
    integrand = e1(y) * e2(y) * np.exp(-0.5 * e1.rho * y * y)
    # divide out the quadrature weight exp(-x**2/2) = exp(-|rho| y**2 / 2)
    integrand = integrand * np.exp(0.5 * abs(e1.rho) * y * y)
    return float(np.dot(w, integrand) / a)


def weighted_norm(e: GaussianEigenfunction) -> float:
    return math.sqrt(weighted_inner_product(e, e))
