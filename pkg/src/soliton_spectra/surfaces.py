"""Upper bounds for the first nonzero eigenvalue of closed hyperbolic surfaces.

Both bounds are stated for ``lambda_2 * Area`` and normalised with
Gauss-Bonnet, ``rho * Area = 4 pi (1 - genus)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ValidationError

SQRT15 = math.sqrt(15.0)
GUARD = 1e-12
SUFFICIENT_GENUS = 46


@dataclass(frozen=True)
class SurfaceData:
    genus: int
    rho: float

    def __post_init__(self):
        if isinstance(self.genus, bool) or int(self.genus) != self.genus or self.genus < 2:
            raise ValidationError(f"genus must be an integer >= 2, got {self.genus!r}")
        if not (math.isfinite(self.rho) and self.rho < 0):
            raise ValidationError(f"hyperbolic surface needs rho < 0, got {self.rho!r}")
        object.__setattr__(self, "genus", int(self.genus))

    @property
    def area(self) -> float:
        return 4.0 * math.pi * (self.genus - 1) / (-self.rho)


def yang_yau_bound(s: SurfaceData) -> float:
    """``lambda_2 <= 8 pi floor((g+3)/2) / Area``."""
    g = s.genus
    return 2.0 * (-s.rho) * ((g + 3) // 2) / (g - 1)


def kv_numerator(genus: int) -> float:
    """``g + (33 - 4 sqrt 15) ceil(5g/6) + 4 (41 - 5 sqrt 15)``, exact ceiling."""
    ceil = -((-5 * genus) // 6)
    return genus + (33.0 - 4.0 * SQRT15) * ceil + 4.0 * (41.0 - 5.0 * SQRT15)


def kv_bound(s: SurfaceData) -> float:
    """Karpukhin-Vinokurov bound normalised by the surface area."""
    g = s.genus
    return (-s.rho) * kv_numerator(g) / (2.0 * (13.0 - SQRT15) * (g - 1))


def kv_bound_relaxed(s: SurfaceData) -> float:
    """KV bound with ``ceil(5g/6)`` replaced by ``5g/6 + 1`` (monotone in genus)."""
    g = s.genus
    num = g + (33.0 - 4.0 * SQRT15) * (5.0 * g / 6.0 + 1.0) + 4.0 * (41.0 - 5.0 * SQRT15)
    return (-s.rho) * num / (2.0 * (13.0 - SQRT15) * (g - 1))


@dataclass
class GenusRow:
    genus: int
    yang_yau: float
    kv: float
    best: float
    kv_below: bool
    margin: float
    within_guard: bool


@dataclass
class ThresholdReport:
    rho: float
    gamma_max: int
    rows: list = field(default_factory=list)
    sufficient_threshold: int = SUFFICIENT_GENUS
    sufficient_holds: bool = False
    relaxed_holds: bool = False
    minimal_genus: int | None = None
    first_genus_below: int | None = None
    failing_below_minimal: list = field(default_factory=list)
    yang_yau_always_above: bool = False
    guard_flagged: list = field(default_factory=list)


def genus_threshold(rho: float, gamma_max: int) -> ThresholdReport:
    """Scan ``genus in [2, gamma_max]`` for ``kv_bound < -rho``.

    ``minimal_genus`` is the smallest genus from which every genus up to
    ``gamma_max`` satisfies the strict inequality with the exact ceiling.
    Comparisons use a guard band of ``GUARD * |rho|``; genera whose margin
    falls inside it are listed in ``guard_flagged``.
    """
    if not (math.isfinite(rho) and rho < 0):
        raise ValidationError(f"rho must be negative, got {rho!r}")
    if isinstance(gamma_max, bool) or int(gamma_max) != gamma_max or gamma_max < SUFFICIENT_GENUS:
        raise ValidationError(f"gamma_max must be an integer >= {SUFFICIENT_GENUS}, got {gamma_max!r}")
    report = ThresholdReport(float(rho), int(gamma_max))
    target = -rho
    guard = GUARD * abs(rho)
    for g in range(2, int(gamma_max) + 1):
        s = SurfaceData(g, rho)
        yy = yang_yau_bound(s)
        kv = kv_bound(s)
        margin = target - kv
        row = GenusRow(g, yy, kv, min(yy, kv), margin > guard, margin, abs(margin) <= guard)
        report.rows.append(row)
        if row.within_guard or abs(yy - target) <= guard:
            report.guard_flagged.append(g)

    report.sufficient_holds = all(r.kv_below for r in report.rows if r.genus >= SUFFICIENT_GENUS)
    report.relaxed_holds = all(
        kv_bound_relaxed(SurfaceData(g, rho)) < target - guard
        for g in range(SUFFICIENT_GENUS, int(gamma_max) + 1)
    )
    report.yang_yau_always_above = all(r.yang_yau > target + guard for r in report.rows)
    below = [r.genus for r in report.rows if r.kv_below]
    report.first_genus_below = below[0] if below else None
    minimal = None
    for r in reversed(report.rows):
        if not r.kv_below:
            break
        minimal = r.genus
    report.minimal_genus = minimal
    if minimal is not None:
        report.failing_below_minimal = [r.genus for r in report.rows if r.genus < minimal and not r.kv_below]
    return report
