"""Rigid gradient Ricci solitons ``N^k x R^m`` with ``f = (rho/2)|y|^2``.

The drift-Laplacian spectrum is the sum of the factor spectrum and the
spectrum of the Gaussian factor:

* shrinker: ``lambda = mu_j + rho * P``
* expander: ``lambda = mu_j + |rho| * (m + P)``

where ``P`` is the total Hermite degree; the degree-``P`` block has
multiplicity ``C(P+m-1, m-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import IncompleteSpectrumError, ValidationError
from .factors import FactorSpectrum
from .spectra import (
    DiscreteSpectrum,
    ScalarValue,
    SpectralLine,
    close,
    enumerate_up_to,
    merge_lines,
    minkowski_sum,
)


@dataclass(frozen=True)
class SolitonModel:
    factor: FactorSpectrum
    n: int
    rho: float

    def __post_init__(self):
        problems = []
        if isinstance(self.n, bool) or int(self.n) != self.n:
            problems.append(f"n must be an integer, got {self.n!r}")
        elif self.n <= self.factor.dim:
            problems.append(
                f"n = {self.n} must exceed the factor dimension k = {self.factor.dim}"
            )
        if not math.isfinite(self.rho) or self.rho == 0:
            problems.append(f"rho must be finite and nonzero, got {self.rho!r}")
        elif not close(self.factor.rho, self.rho):
            problems.append(
                f"factor Einstein constant {self.factor.rho!r} does not match rho = {self.rho!r}"
            )
        if (
            math.isfinite(self.rho) and self.rho < 0
            and not self.factor.is_point
            and not math.isfinite(self.factor.complete_below)
        ):
            problems.append("expander factor spectrum needs a finite complete_below")
        if problems:
            raise ValidationError("; ".join(problems), problems)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def k(self) -> int:
        return self.factor.dim

    @property
    def m(self) -> int:
        return self.n - self.factor.dim

    @property
    def is_shrinker(self) -> bool:
        return self.rho > 0

    @property
    def kind(self) -> str:
        return "shrinker" if self.is_shrinker else "expander"

    @property
    def offset(self) -> float:
        """Bottom of the Gaussian factor's spectrum."""
        return 0.0 if self.is_shrinker else abs(self.rho) * self.m

    def certified_bound(self) -> float:
        return self.factor.complete_below + self.offset

    def describe(self) -> str:
        return f"{self.factor.name} x R^{self.m} ({self.kind}, rho={self.rho:g}, n={self.n})"


@dataclass(frozen=True)
class EigenfunctionDescriptor:
    """Factor eigenfunction index, Hermite total degree, one multi-index."""

    factor_index: int
    degree: int
    multi_index: tuple

    def __post_init__(self):
        if sum(self.multi_index) != self.degree or any(p < 0 for p in self.multi_index):
            raise ValidationError(f"multi-index {self.multi_index} does not have total degree {self.degree}")

    @classmethod
    def representative(cls, factor_index: int, degree: int, m: int) -> "EigenfunctionDescriptor":
        return cls(factor_index, degree, (degree,) + (0,) * (m - 1))

    def label(self) -> str:
        return f"v_{self.factor_index}*H{list(self.multi_index)}"


def degree_block_multiplicity(degree: int, m: int) -> int:
    """Number of multi-indices in ``N^m`` with total ``degree``."""
    return comb(degree + m - 1, m - 1)


def gaussian_block(m: int, rho: float, cutoff: float) -> DiscreteSpectrum:
    """Spectrum of the ``m``-dimensional Gaussian soliton below ``cutoff``.

    Line ``P`` is the total-degree-``P`` block; its index equals ``P``.
    """
    if m < 1:
        raise ValidationError(f"Gaussian dimension must be >= 1, got {m}")
    unit = abs(rho)
    base = 0 if rho > 0 else m
    lines = []
    P = 0
    limit = Fraction(cutoff) if math.isfinite(cutoff) else None
    if limit is None:
        raise ValidationError("Gaussian block needs a finite cutoff")
    while Fraction(base + P) * Fraction(unit) < limit:
        lines.append(SpectralLine(ScalarValue.rational(base + P, unit), degree_block_multiplicity(P, m), ((0, P),)))
        P += 1
    return DiscreteSpectrum(tuple(lines), cutoff)


def rigid_spectrum(model: SolitonModel, cutoff: float) -> DiscreteSpectrum:
    """All eigenvalues below ``cutoff`` with multiplicities and ``(j, P)`` provenance."""
    cutoff = float(cutoff)
    if math.isnan(cutoff):
        raise ValidationError("cutoff must be a number")
    bound = model.certified_bound()
    if cutoff > bound:
        raise IncompleteSpectrumError(
            f"incomplete spectrum: cutoff {cutoff!r} exceeds the certified bound {bound!r} "
            f"(factor complete_below {model.factor.complete_below!r} + {model.offset!r})",
            bound,
        )
    factor = model.factor.to_discrete()
    block = gaussian_block(model.m, model.rho, cutoff)
    if not block.lines:
        return DiscreteSpectrum((), cutoff)
    total = minkowski_sum(factor, block)
    # minkowski_sum certifies min(bound, cutoff) == cutoff here
    return merge_lines(total.lines, cutoff)


def first_lines(model: SolitonModel, count: int) -> list[SpectralLine]:
    """The first ``count`` distinct lines, choosing the cutoff automatically."""
    bound = model.certified_bound()
    unit = abs(model.rho)
    cutoff = model.offset + unit * (count + 1)
    while True:
        use = min(cutoff, bound)
        spec = rigid_spectrum(model, use)
        if len(spec) >= count or use >= bound:
            return enumerate_up_to(spec, count)
        cutoff *= 2


@dataclass(frozen=True)
class SecondEigenvalue:
    value: ScalarValue
    multiplicity: int
    case: str  # "gaussian" | "mixed" | "factor"


def second_eigenvalue_case(model: SolitonModel) -> SecondEigenvalue:
    """Second distinct eigenvalue of a rigid expander by comparing the
    factor's ``lambda_2`` with ``-rho``.

    * ``lambda_2^N > -rho``: ``-rho(m + 1)`` with multiplicity ``m``
    * ``lambda_2^N = -rho``: same value, multiplicity ``mult(lambda_2^N) + m``
    * ``lambda_2^N < -rho``: ``lambda_2^N - rho*m`` with multiplicity ``mult(lambda_2^N)``
    """
    if model.rho >= 0:
        raise ValidationError(
            "second_eigenvalue_case is for expanders (rho < 0); use rigid_spectrum for shrinkers"
        )
    second = model.factor.second
    if second is None:
        raise ValidationError("factor spectrum has no certified second eigenvalue")
    unit = abs(model.rho)
    m = model.m
    threshold = ScalarValue.rational(1, unit)
    gaussian_value = ScalarValue.rational(m + 1, unit)
    if second.value == threshold:
        return SecondEigenvalue(gaussian_value, second.multiplicity + m, "mixed")
    if second.value.value() > unit:
        return SecondEigenvalue(gaussian_value, m, "gaussian")
    return SecondEigenvalue(second.value + ScalarValue.rational(m, unit), second.multiplicity, "factor")


# --- soliton identities on rigid models ----------------------------------


def sample_points(m: int, count: int, radius: float, seed: int = 0) -> np.ndarray:
    """Deterministic points in ``R^m``: the origin, a radial ray, and random
    points in the ball of the given radius."""
    rng = np.random.default_rng(seed)
    ray = np.zeros((count // 2, m))
    ray[:, 0] = np.linspace(0.0, radius, count // 2)
    rest = count - len(ray)
    pts = rng.normal(size=(rest, m))
    pts *= (radius * rng.random(rest) / np.maximum(np.linalg.norm(pts, axis=1), 1e-300))[:, None]
    return np.vstack([ray, pts])


@dataclass(frozen=True)
class NormalizationReport:
    constant: float
    max_deviation: float
    scale: float
    samples: int

    @property
    def constant_to_machine_precision(self) -> bool:
        return bool(self.max_deviation <= 64 * np.finfo(float).eps * max(1.0, self.scale))


def scalar_curvature(model: SolitonModel) -> float:
    return model.k * model.rho


def normalization_constant(model: SolitonModel, samples: int = 1000, radius: float = 10.0,
                           seed: int = 0) -> NormalizationReport:
    """``C`` in ``S + |grad f|^2 - 2 rho f = C``; equals ``k*rho``.

    Checked pointwise: ``S = k rho``, ``grad f = rho y``, ``f = rho |y|^2 / 2``.
    """
    rho = model.rho
    S = scalar_curvature(model)
    y = sample_points(model.m, samples, radius, seed)
    grad = rho * y
    f = 0.5 * rho * np.sum(y * y, axis=1)
    values = S + np.sum(grad * grad, axis=1) - 2.0 * rho * f
    C = float(model.k * rho) + 0.0  # no -0 for a point factor
    scale = float(np.max(np.abs(2.0 * rho * f))) + abs(S)
    return NormalizationReport(C, float(np.max(np.abs(values - C))), scale, len(values))


def soliton_equation_residual(model: SolitonModel) -> float:
    """``max |Ric + Hess f - rho g|`` for the product metric (block diagonal)."""
    n, k, rho = model.n, model.k, model.rho
    ric = np.diag([rho] * k + [0.0] * model.m)
    hess = np.diag([0.0] * k + [rho] * model.m)
    return float(np.max(np.abs(ric + hess - rho * np.eye(n))))


@dataclass(frozen=True)
class PotentialProfile:
    radii: np.ndarray
    values: np.ndarray
    v0: float
    v_end: float
    decreasing: bool
    diverges: bool


def schrodinger_value(model: SolitonModel, r):
    """``V = (2 n rho - S - C)/4 - rho f / 2`` at ``|y| = r``."""
    rho = model.rho
    S = scalar_curvature(model)
    C = model.k * rho
    f = 0.5 * rho * np.asarray(r, dtype=float) ** 2
    return 0.25 * (2 * model.n * rho - S - C) - 0.5 * rho * f


def schrodinger_potential(model: SolitonModel, y_radius: float, samples: int) -> PotentialProfile:
    """Potential of the Schrodinger form along ``|y| in [0, y_radius]``.

    ``diverges`` is reported when the profile is strictly decreasing and has
    dropped by more than 1 at ``y_radius``.
    """
    if int(samples) != samples or samples < 2:
        raise ValidationError(f"samples must be an integer >= 2, got {samples!r}")
    if not (math.isfinite(y_radius) and y_radius > 0):
        raise ValidationError(f"y_radius must be positive, got {y_radius!r}")
    radii = np.linspace(0.0, float(y_radius), int(samples))
    values = schrodinger_value(model, radii)
    decreasing = bool(np.all(np.diff(values) < 0))
    v0, v_end = float(values[0]), float(values[-1])
    return PotentialProfile(radii, values, v0, v_end, decreasing, decreasing and v_end < v0 - 1.0)


def potential_growth_check(model: SolitonModel, radius: float, samples: int = 200) -> dict:
    """Quadratic growth of the potential along the Euclidean factor.

    On the rigid model the distance from ``(x0, 0)`` along the fibre is
    ``r = |y|``, so ``-f / r^2`` (expander) or ``f / r^2`` (shrinker) is
    exactly ``|rho| / 2``; evaluated in rational arithmetic.
    """
    if not math.isfinite(radius) or radius <= 0:
        raise ValidationError(f"radius must be positive, got {radius!r}")
    rho = Fraction(model.rho)
    R = Fraction(radius)
    ratios = []
    upper_ok = True
    lower_ok = True
    for i in range(1, samples + 1):
        r = R * i / samples
        f = rho / 2 * r * r
        g = -f if rho < 0 else f
        ratios.append(g / (r * r))
        # c1 = c2 = 0
        bound = abs(rho) / 2 * r * r
        upper_ok &= g <= bound
        if rho > 0:
            lower_ok &= bound <= g
    expected = abs(rho) / 2
    report = {
        "kind": model.kind,
        "expected_ratio": float(expected),
        "ratio_min": float(min(ratios)),
        "ratio_max": float(max(ratios)),
        "ratio_exact": all(q == expected for q in ratios),
        "upper_bound_holds": bool(upper_ok),
        "c1": 0.0,
        "c2": 0.0,
    }
    if rho < 0:
        # Ric >= eta g with eta = min(rho, 0) = rho on the product
        eta = rho
        coefficient = eta - rho / 2
        report["lower_coefficient"] = float(coefficient)
        report["lower_bound"] = "vacuous" if coefficient <= 0 else "holds"
    else:
        report["lower_bound"] = "holds" if lower_ok else "fails"
    return report
