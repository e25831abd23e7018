"""Eigenvalue data model and the product-spectrum enumerator.

Eigenvalues of product manifolds are sums of factor eigenvalues, so most of
the bookkeeping here is about adding values without losing multiplicities:
values that are exact rational multiples of ``|rho|`` are kept as
:class:`fractions.Fraction` coefficients, anything user-supplied is carried
as a float and compared with a relative tolerance.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import IncompleteSpectrumError, ValidationError

REL_TOL = 1e-9


def close(x: float, y: float) -> bool:
    """Tolerance predicate used for inexact eigenvalues."""
    return abs(x - y) <= REL_TOL * max(1.0, abs(x), abs(y))


@dataclass(frozen=True, eq=False)
class ScalarValue:
    """``exact * unit + numeric`` where ``unit`` is ``|rho|``.

    ``exact`` is a rational coefficient; ``numeric`` holds anything that is
    only known in floating point (e.g. an ingested hyperbolic-surface
    eigenvalue).  The value is exact when ``numeric == 0``.
    """

    exact: Fraction = Fraction(0)
    numeric: float = 0.0
    unit: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "exact", Fraction(self.exact))
        object.__setattr__(self, "numeric", float(self.numeric))
        object.__setattr__(self, "unit", float(self.unit))
        if not (math.isfinite(self.numeric) and math.isfinite(self.unit)) or self.unit <= 0:
            raise ValidationError(f"non-finite or invalid scalar value {self!r}")

    @classmethod
    def rational(cls, coefficient, unit: float = 1.0) -> "ScalarValue":
        return cls(Fraction(coefficient), 0.0, unit)

    @classmethod
    def real(cls, x: float) -> "ScalarValue":
        return cls(Fraction(0), float(x), 1.0)

    @property
    def is_exact(self) -> bool:
        return self.numeric == 0.0

    def value(self) -> float:
        return float(self.exact) * self.unit + self.numeric

    __float__ = value

    def as_fraction(self) -> Fraction:
        """Exact rational of the represented double-precision quantities."""
        return self.exact * Fraction(self.unit) + Fraction(self.numeric)

    def __add__(self, other: "ScalarValue") -> "ScalarValue":
        if not isinstance(other, ScalarValue):
            return NotImplemented
        if self.exact == 0:
            return ScalarValue(other.exact, self.numeric + other.numeric, other.unit)
        if other.exact == 0 or self.unit == other.unit:
            return ScalarValue(self.exact + other.exact, self.numeric + other.numeric, self.unit)
        # incompatible units: fold the second operand into the numeric part
        return ScalarValue(self.exact, self.numeric + other.value(), self.unit)

    def __eq__(self, other):
        if not isinstance(other, ScalarValue):
            return NotImplemented
        if self.is_exact and other.is_exact and (
            self.unit == other.unit or self.exact == 0 or other.exact == 0
        ):
            return self.as_fraction() == other.as_fraction()
        return close(self.value(), other.value())

    __hash__ = None

    def __lt__(self, other: "ScalarValue") -> bool:
        return self.value() < other.value()

    def __repr__(self):
        if self.is_exact:
            return f"ScalarValue({self.exact}*{self.unit:g})"
        return f"ScalarValue({self.exact}*{self.unit:g}+{self.numeric!r})"

    def __str__(self):
        return f"{self.value():.15g}"


def as_scalar(x) -> ScalarValue:
    if isinstance(x, ScalarValue):
        return x
    if isinstance(x, (int, Fraction)):
        return ScalarValue.rational(x)
    return ScalarValue.real(x)


@dataclass(frozen=True)
class SpectralLine:
    """One eigenvalue with multiplicity.

    ``provenance`` is a tuple of ``(factor_index, gaussian_degree)`` pairs;
    more than one pair means several sources coincide at this value.
    """

    value: ScalarValue
    multiplicity: int
    provenance: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "value", as_scalar(self.value))
        if isinstance(self.multiplicity, bool) or int(self.multiplicity) != self.multiplicity:
            raise ValidationError(f"multiplicity must be an integer, got {self.multiplicity!r}")
        if self.multiplicity < 1:
            raise ValidationError(f"multiplicity must be positive, got {self.multiplicity}")
        object.__setattr__(self, "multiplicity", int(self.multiplicity))
        prov = tuple(tuple(int(v) for v in p) for p in self.provenance)
        object.__setattr__(self, "provenance", prov)

    def sort_key(self):
        return (self.value.value(), self.provenance)


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Sorted multiset of eigenvalues, complete below ``complete_below``."""

    lines: tuple = ()
    complete_below: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        cb = float(self.complete_below)
        if math.isnan(cb):
            raise ValidationError("complete_below must be a number")
        object.__setattr__(self, "complete_below", cb)
        for prev, cur in zip(self.lines, self.lines[1:]):
            if not prev.value < cur.value or prev.value == cur.value:
                raise ValidationError(
                    f"spectrum lines not strictly increasing at {cur.value}"
                )
        for line in self.lines:
            if not _below(line.value, cb):
                raise ValidationError(
                    f"line {line.value} is not below complete_below={cb!r}"
                )

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __getitem__(self, i):
        return self.lines[i]

    def minimum(self) -> ScalarValue:
        if not self.lines:
            raise ValidationError("empty spectrum has no minimum")
        return self.lines[0].value

    def values(self) -> list[float]:
        return [line.value.value() for line in self.lines]

    def multiplicities(self) -> list[int]:
        return [line.multiplicity for line in self.lines]

    def total_multiplicity(self) -> int:
        return sum(self.multiplicities())


def _below(value: ScalarValue, cutoff: float) -> bool:
    if math.isinf(cutoff):
        return cutoff > 0
    return value.as_fraction() < Fraction(cutoff)


def merge_lines(lines: Iterable[SpectralLine], cutoff: float) -> DiscreteSpectrum:
    """Collapse equal values (summing multiplicities), sort, and truncate.

    Lines with value ``>= cutoff`` are dropped; the result is certified
    complete below ``cutoff`` only if the input was.
    """
    cutoff = float(cutoff)
    if math.isnan(cutoff):
        raise ValidationError("cutoff must be a number")
    kept = []
    for line in lines:
        if not isinstance(line, SpectralLine):
            raise ValidationError(f"expected SpectralLine, got {type(line).__name__}")
        if _below(line.value, cutoff):
            kept.append(line)
    kept.sort(key=SpectralLine.sort_key)

    merged = []
    group = []
    for line in kept:
        if group and not (line.value == group[0].value):
            merged.append(_combine(group))
            group = []
        group.append(line)
    if group:
        merged.append(_combine(group))
    return DiscreteSpectrum(tuple(merged), cutoff)


def _combine(group: Sequence[SpectralLine]) -> SpectralLine:
    if len(group) == 1:
        return group[0]
    # prefer an exact representative so rational bookkeeping survives merging
    rep = next((g.value for g in group if g.value.is_exact), group[0].value)
    prov = tuple(sorted({p for g in group for p in g.provenance}))
    return SpectralLine(rep, sum(g.multiplicity for g in group), prov)


def minkowski_sum(a: DiscreteSpectrum, b: DiscreteSpectrum) -> DiscreteSpectrum:
    """Spectrum of a product: all sums ``x + y`` with product multiplicities.

    Sums are generated lazily in increasing order from a heap frontier over
    index pairs.  The output provenance ``(i, j)`` indexes the input lines.
    Completeness: a missing line of ``a`` (at or above ``a.complete_below``)
    can only produce sums ``>= a.complete_below + min(b)``, and symmetrically.
    """
    if not a.lines or not b.lines:
        raise ValidationError("minkowski_sum of an empty spectrum is undefined")
    cutoff = min(
        a.complete_below + b.minimum().value(),
        b.complete_below + a.minimum().value(),
    )
    if math.isnan(cutoff):
        cutoff = math.inf

    def entry(i, j):
        total = a.lines[i].value + b.lines[j].value
        return (total.value(), i, j, total)

    frontier = [entry(0, 0)]
    seen = {(0, 0)}
    out = []
    while frontier:
        _, i, j, total = heapq.heappop(frontier)
        if not _below(total, cutoff):
            # neighbours are no smaller, so this branch of the frontier is done
            continue
        out.append(
            SpectralLine(total, a.lines[i].multiplicity * b.lines[j].multiplicity, ((i, j),))
        )
        for ni, nj in ((i + 1, j), (i, j + 1)):
            if ni < len(a.lines) and nj < len(b.lines) and (ni, nj) not in seen:
                seen.add((ni, nj))
                heapq.heappush(frontier, entry(ni, nj))
    return merge_lines(out, cutoff)


def enumerate_up_to(s: DiscreteSpectrum, k: int) -> list[SpectralLine]:
    """First ``k`` distinct lines of ``s``; refuses to read past the cutoff."""
    if int(k) != k or k < 1:
        raise ValidationError(f"k must be a positive integer, got {k!r}")
    if len(s.lines) < k:
        raise IncompleteSpectrumError(
            f"incomplete spectrum: only {len(s.lines)} lines are certified below "
            f"complete_below={s.complete_below!r}, requested {k}",
            s.complete_below,
        )
    return list(s.lines[:k])


def brute_force_sum(a: DiscreteSpectrum, b: DiscreteSpectrum) -> DiscreteSpectrum:
    """All pairwise sums by a double loop; oracle for :func:`minkowski_sum`."""
    cutoff = min(
        a.complete_below + b.minimum().value(),
        b.complete_below + a.minimum().value(),
    )
    lines = [
        SpectralLine(x.value + y.value, x.multiplicity * y.multiplicity, ((i, j),))
        for i, x in enumerate(a.lines)
        for j, y in enumerate(b.lines)
    ]
    return merge_lines(lines, cutoff)


def random_spectrum(rng, max_lines: int = 8, exact: bool = True) -> DiscreteSpectrum:
    """Random truncated spectrum on a quarter-integer lattice (ties are likely).

    With ``exact=False`` the values are floats, exercising the tolerance path.
    """
    count = int(rng.integers(1, max_lines + 1))
    steps = np.sort(rng.choice(np.arange(0, 4 * max_lines + 4), size=count, replace=False))
    lines = []
    for i, s in enumerate(steps):
        value = ScalarValue.rational(Fraction(int(s), 4)) if exact else ScalarValue.real(int(s) / 4)
        lines.append(SpectralLine(value, int(rng.integers(1, 6)), ((i, 0),)))
    cb = int(steps[-1]) / 4 + float(rng.integers(1, 9)) / 4
    return DiscreteSpectrum(tuple(lines), cb)


def same_lines(a: DiscreteSpectrum, b: DiscreteSpectrum) -> bool:
    return len(a) == len(b) and all(
        x.value == y.value and x.multiplicity == y.multiplicity for x, y in zip(a, b)
    )


def product_oracle(trials: int = 100, seed: int = 0) -> dict:
    """Compare :func:`minkowski_sum` with the brute-force double loop on random
    truncated pairs, and check ``min(a + b) == min a + min b``."""
    rng = np.random.default_rng(seed)
    mismatches = []
    additivity_failures = []
    for t in range(int(trials)):
        exact = bool(t % 4)
        a = random_spectrum(rng, exact=exact)
        b = random_spectrum(rng, exact=exact)
        fast = minkowski_sum(a, b)
        if not same_lines(fast, brute_force_sum(a, b)):
            mismatches.append(t)
        if not fast.minimum() == a.minimum() + b.minimum():
            additivity_failures.append(t)
    return {
        "trials": int(trials),
        "seed": int(seed),
        "mismatches": mismatches,
        "additivity_failures": additivity_failures,
        "passed": not mismatches and not additivity_failures,
    }
