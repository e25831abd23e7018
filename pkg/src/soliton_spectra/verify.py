"""Finite-difference checks on the Gaussian fibre ``f(y) = rho y^2 / 2``.

Three positive operators are discretised on ``N`` interior points of
``[-R, R]`` with Dirichlet ends:

``drift``
    ``-Delta_f`` as a conservative stencil with face weights
    ``exp(-(f_i + f_{i+1})/2)``; self-adjoint for node weights ``exp(-f) h``.
``schrodinger``
    ``-d^2/dy^2 - V_h`` with the standard second difference and the discrete
    potential ``V_h = (2 - exp(-D+/2) - exp(-D-/2)) / h^2``
    (``D+- = f_{i+-1} - f_i``), a second-order approximation of
    ``V = (1/2) f'' - (1/4) f'^2``.
``conjugate``
    ``-Delta_{-f} - c_h`` with face weights ``exp((f_i + f_{i+1})/2)`` and
    ``c_h = 2 (sinh(D+/2) + sinh(D-/2)) / h^2``, approximating
    ``Delta f = n rho - S``.

The matrices are related by the diagonal similarities ``exp(-f/2)`` and
``exp(f)``, so their eigenvalues agree to rounding, while each converges to
the continuum spectrum at ``O(h^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .eigensolver import matvec, smallest_eigenpairs
from .errors import ValidationError
from .hermite import GaussianEigenfunction, residual_radius
from .rigid import SolitonModel, schrodinger_value
from .factors import trivial_factor, FactorSpectrum
from .spectra import ScalarValue, SpectralLine

FORMS = ("drift", "schrodinger", "conjugate")
MIN_POINTS = 64


@dataclass(frozen=True)
class DiscretizedOperator:
    form: str
    rho: float
    n: int
    k: int
    radius: float
    nodes: np.ndarray
    lower: np.ndarray  # A[i+1, i]
    diag: np.ndarray
    upper: np.ndarray  # A[i, i+1]
    log_weight: np.ndarray  # log of the node measure
    zeroth_order: np.ndarray  # discrete potential / shift term, for reporting

    @property
    def size(self) -> int:
        return len(self.diag)

    @property
    def h(self) -> float:
        return 2.0 * self.radius / (self.size + 1)

    @property
    def weight(self) -> np.ndarray:
        return np.exp(self.log_weight)

    @property
    def diagonal(self) -> np.ndarray:
        return self.diag

    @property
    def off_diagonal(self) -> np.ndarray:
        """Off-diagonal of the symmetrised matrix, ``-sqrt(A[i,i+1] A[i+1,i])``."""
        return -np.sqrt(self.lower * self.upper)

    def apply(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = self.diag * u
        out[:-1] += self.upper * u[1:]
        out[1:] += self.lower * u[:-1]
        return out

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.upper, 1) + np.diag(self.lower, -1)


def _grid(R: float, N: int):
    h = 2.0 * R / (N + 1)
    y = -R + h * np.arange(1, N + 1)
    ext = np.concatenate(([-R], y, [R]))
    return y, ext, h


def assemble(form: str, rho: float, n: int, k: int, R: float, N: int) -> DiscretizedOperator:
    """Matrix of the positive operator ``-L`` for ``form`` on ``N`` interior points."""
    if form not in FORMS:
        raise ValidationError(f"form must be one of {FORMS}, got {form!r}")
    if isinstance(N, bool) or int(N) != N or N < MIN_POINTS:
        raise ValidationError(f"N must be an integer >= {MIN_POINTS}, got {N!r}")
    if not (math.isfinite(R) and R > 0):
        raise ValidationError(f"R must be positive, got {R!r}")
    if not math.isfinite(rho):
        raise ValidationError(f"rho must be finite, got {rho!r}")
    if int(n) != n or int(k) != k or k < 0 or n - k != 1:
        raise ValidationError(
            f"the discretised fibre is one-dimensional: need n - k = 1, got n={n}, k={k}"
        )
    N = int(N)
    y, ext, h = _grid(float(R), N)
    f = 0.5 * rho * ext * ext
    dp = f[2:] - f[1:-1]  # f_{i+1} - f_i
    dm = f[:-2] - f[1:-1]  # f_{i-1} - f_i
    h2 = h * h
    fi = f[1:-1]
    if form == "drift":
        diag = (np.exp(-0.5 * dp) + np.exp(-0.5 * dm)) / h2
        upper = -np.exp(-0.5 * dp[:-1]) / h2
        lower = -np.exp(0.5 * dp[:-1]) / h2
        log_w = -fi + math.log(h)
        zeroth = np.zeros(N)
    elif form == "schrodinger":
        potential = (2.0 - np.exp(-0.5 * dp) - np.exp(-0.5 * dm)) / h2
        diag = 2.0 / h2 - potential
        upper = np.full(N - 1, -1.0 / h2)
        lower = upper.copy()
        log_w = np.full(N, math.log(h))
        zeroth = potential
    else:
        shift = 2.0 * (np.sinh(0.5 * dp) + np.sinh(0.5 * dm)) / h2
        diag = (np.exp(0.5 * dp) + np.exp(0.5 * dm)) / h2 - shift
        upper = -np.exp(0.5 * dp[:-1]) / h2
        lower = -np.exp(-0.5 * dp[:-1]) / h2
        log_w = fi + math.log(h)
        zeroth = shift
    return DiscretizedOperator(form, float(rho), int(n), int(k), float(R), y,
                               lower, diag, upper, log_w, zeroth)


def continuum_potential(rho: float, n: int, k: int, y) -> np.ndarray:
    """Continuum ``V = (2 n rho - S - C)/4 - rho f / 2`` with ``S = C = k rho``."""
    if k == 0:
        factor = trivial_factor(rho)
    else:
        factor = FactorSpectrum("einstein", k, rho, (SpectralLine(ScalarValue.rational(0), 1),), 1.0)
    return schrodinger_value(SolitonModel(factor, n, rho), np.abs(np.asarray(y)))


@dataclass
class EigenResult:
    eigenvalues: np.ndarray
    residuals: np.ndarray
    rayleigh: np.ndarray
    vectors: np.ndarray  # eigenvectors of the symmetrised matrix (columns)
    form: str
    radius: float
    size: int
    flagged: list = field(default_factory=list)

    @property
    def h(self) -> float:
        return 2.0 * self.radius / (self.size + 1)


def eigen_smallest(op: DiscretizedOperator, count: int) -> EigenResult:
    """``count`` smallest eigenvalues by Sturm bisection, certified by inverse iteration."""
    if int(count) != count or count < 1 or count > op.size // 4:
        raise ValidationError(f"count must be in [1, N/4] = [1, {op.size // 4}], got {count!r}")
    res = smallest_eigenpairs(op.diagonal, op.off_diagonal, int(count))
    return EigenResult(res.eigenvalues, res.residuals, res.rayleigh, res.eigenvectors,
                       op.form, op.radius, op.size, list(res.flagged))


def max_relative_deviation(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))))


def equivalence_check(rho: float, n: int, k: int, R: float, N: int, count: int,
                      tol: float = 1e-10) -> dict:
    """Smallest eigenvalues of the three forms on the same grid, compared pairwise."""
    results = {form: eigen_smallest(assemble(form, rho, n, k, R, N), count) for form in FORMS}
    deviations = {}
    for i, a in enumerate(FORMS):
        for b in FORMS[i + 1:]:
            deviations[f"{a}/{b}"] = max_relative_deviation(results[a].eigenvalues, results[b].eigenvalues)
    worst = max(deviations.values())
    return {
        "rho": rho, "n": n, "k": k, "radius": R, "N": N, "count": count,
        "eigenvalues": {form: results[form].eigenvalues.tolist() for form in FORMS},
        "deviations": deviations,
        "max_deviation": worst,
        "tolerance": tol,
        "passed": worst <= tol,
    }


def analytic_fibre_eigenvalue(rho: float, p: int) -> float:
    return rho * p if rho > 0 else -rho * (1 + p)


@dataclass
class ConvergenceReport:
    rho: float
    radius: float
    grids: list
    targets: list
    errors: list  # errors[p][g]
    ratios: list  # ratios[p][g] for consecutive grids (None when below noise)
    finest_ratios: list
    skipped: list
    truncation_shift: float
    ratio_window: tuple = (3.6, 4.4)

    @property
    def passed(self) -> bool:
        lo, hi = self.ratio_window
        return all(r is None or lo <= r <= hi for r in self.finest_ratios)


NOISE_FLOOR = 1e-12


def convergence_study(rho: float, p_max: int, grids, radius: float | None = None,
                      form: str = "drift") -> ConvergenceReport:
    """Errors against ``rho p`` (shrinker) / ``-rho (1 + p)`` (expander) on a
    sequence of grids, with the observed refinement ratios ``e(h)/e(h/2)``.

    ``truncation_shift`` compares the finest grid with the same spacing on
    ``[-2R, 2R]``: an empirical measure of the Dirichlet truncation error.
    """
    grids = [int(g) for g in grids]
    if any(b <= a for a, b in zip(grids, grids[1:])):
        raise ValidationError("grids must be strictly increasing")
    if any(g < MIN_POINTS for g in grids):
        raise ValidationError(f"every grid needs N >= {MIN_POINTS}")
    if rho == 0:
        raise ValidationError("rho must be nonzero")
    R = residual_radius(rho, p_max) if radius is None else float(radius)
    count = p_max + 1
    targets = [analytic_fibre_eigenvalue(rho, p) for p in range(count)]
    values = []
    for N in grids:
        values.append(eigen_smallest(assemble(form, rho, 1, 0, R, N), count).eigenvalues)
    errors = [[abs(values[g][p] - targets[p]) for g in range(len(grids))] for p in range(count)]
    ratios = []
    for p in range(count):
        row = []
        for g in range(len(grids) - 1):
            e1, e2 = errors[p][g], errors[p][g + 1]
            row.append(None if e1 < NOISE_FLOOR or e2 < NOISE_FLOOR else e1 / e2)
        ratios.append(row)
    finest = [row[-1] if row else None for row in ratios]
    skipped = [p for p, r in enumerate(finest) if r is None]
    Nf = grids[-1]
    wide = eigen_smallest(assemble(form, rho, 1, 0, 2 * R * (2 * Nf + 3) / (2 * Nf + 2), 2 * Nf + 2), count)
    shift = float(np.max(np.abs(wide.eigenvalues - values[-1])))
    return ConvergenceReport(rho, R, grids, targets, errors, ratios, finest, skipped, shift)


# --- conjugation identity ------------------------------------------------


@dataclass(frozen=True)
class PolyGauss:
    """``P(y) exp(c y^2 / 2)``."""

    poly: Polynomial
    c: float

    def d(self) -> "PolyGauss":
        y = Polynomial([0.0, 1.0])
        return PolyGauss(self.poly.deriv() + self.c * y * self.poly, self.c)

    def times_poly(self, q) -> "PolyGauss":
        return PolyGauss(self.poly * q, self.c)

    def __add__(self, other: "PolyGauss") -> "PolyGauss":
        if other.c != self.c:
            raise ValueError("exponents differ")
        return PolyGauss(self.poly + other.poly, self.c)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return self.poly(y) * np.exp(0.5 * self.c * y * y)


def _drift_laplacian(u: PolyGauss, a: float) -> PolyGauss:
    """``u'' - F' u'`` for ``F = a y^2 / 2``."""
    y = Polynomial([0.0, 1.0])
    du = u.d()
    return du.d() + du.times_poly(-a * y)


def default_test_functions():
    out = []
    for d in range(7):
        coeffs = np.polynomial.hermite_e.herme2poly([0] * d + [1])
        for c in (0.0, -1.0, -2.0):
            out.append((tuple(coeffs), c))
    return out


def conjugation_sides(F_coef: float, H_coef: float, coeffs, c: float):
    """Both sides of the identity for ``u = P(y) exp(c y^2/2)``.

    Returns ``(lhs, drift_term, zeroth_term)`` as :class:`PolyGauss`; the
    right side is ``drift_term + zeroth_term``.  The left side is
    differentiated as written (multiply by ``e^H``, apply ``Delta_F``,
    multiply by ``e^{-H}``).
    """
    y = Polynomial([0.0, 1.0])
    aF, aH = float(F_coef), float(H_coef)
    u = PolyGauss(Polynomial(coeffs), float(c))
    w = PolyGauss(u.poly, u.c + aH)  # e^H u
    lhs = PolyGauss(_drift_laplacian(w, aF).poly, u.c)  # times e^{-H}
    drift_term = _drift_laplacian(u, aF - 2 * aH)
    zeroth = aH + (aH - aF) * aH * y * y  # Delta H + <grad(H - F), grad H>
    return lhs, drift_term, u.times_poly(zeroth)


def conjugation_residual(F_coef: float, H_coef: float, test_functions=None, grid=None) -> float:
    """Relative residual of ``e^{-H} Delta_F (e^H u) = Delta_{F-2H} u + (Delta H +
    <grad(H-F), grad H>) u`` for ``F = F_coef y^2/2``, ``H = H_coef y^2/2``,
    maximised over the grid and the test functions ``(coeffs, c)``.
    """
    if test_functions is None:
        test_functions = default_test_functions()
    if grid is None:
        grid = np.linspace(-6.0, 6.0, 241)
    grid = np.asarray(grid, dtype=float)
    worst = 0.0
    for coeffs, c in test_functions:
        lhs, drift_term, zeroth_term = conjugation_sides(F_coef, H_coef, coeffs, c)
        left = lhs(grid)
        a, b = drift_term(grid), zeroth_term(grid)
        scale = max(np.max(np.abs(left)), np.max(np.abs(a)), np.max(np.abs(b)), np.finfo(float).tiny)
        worst = max(worst, float(np.max(np.abs(left - (a + b))) / scale))
    return worst


def conjugation_matrix(rhos=(-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)):
    """Quadratic-profile pairs ``(F_coef, H_coef, label)`` used by the checks,
    including ``(f, f/2)`` and ``(f, f)`` for each ``rho``."""
    pairs = [(0.0, 0.0, "F=H=0")]
    coefs = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
    pairs += [(a, b, f"F={a:g}y^2/2,H={b:g}y^2/2") for a in coefs for b in coefs if (a, b) != (0.0, 0.0)]
    for rho in rhos:
        pairs.append((rho, rho / 2, f"F=f,H=f/2 (rho={rho:g})"))
        pairs.append((rho, rho, f"F=H=f (rho={rho:g})"))
    return pairs


def hermite_rayleigh_quotient(op: DiscretizedOperator, p: int) -> float:
    """Rayleigh quotient of the analytic eigenfunction restricted to the grid,
    in the weighted inner product of the drift form."""
    if op.form != "drift":
        raise ValidationError("hermite_rayleigh_quotient needs the drift form")
    mode = "shrinker" if op.rho > 0 else "expander"
    u = GaussianEigenfunction(mode, op.rho, p)(op.nodes)
    w = op.weight
    return float(np.dot(w * u, op.apply(u)) / np.dot(w * u, u))


def weighted_symmetry_defect(op: DiscretizedOperator, seed: int = 0) -> float:
    """``|<Au, v>_w - <u, Av>_w| / (|A| |u|_w |v|_w)`` for random vectors."""
    rng = np.random.default_rng(seed)
    u = rng.normal(size=op.size)
    v = rng.normal(size=op.size)
    w = op.weight
    lhs = np.dot(w * op.apply(u), v)
    rhs = np.dot(w * u, op.apply(v))
    norm = np.max(np.abs(op.diag)) + 2 * np.max(np.abs(op.off_diagonal))
    denom = norm * math.sqrt(np.dot(w * u, u) * np.dot(w * v, v))
    return float(abs(lhs - rhs) / denom)


def symmetric_matvec(op: DiscretizedOperator, v):
    return matvec(op.diagonal, op.off_diagonal, v)


__all__ = [
    "DiscretizedOperator", "EigenResult", "ConvergenceReport", "assemble", "eigen_smallest",
    "equivalence_check", "convergence_study", "conjugation_residual", "conjugation_sides",
    "conjugation_matrix", "continuum_potential", "hermite_rayleigh_quotient", "weighted_symmetry_defect",
]
