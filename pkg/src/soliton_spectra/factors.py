"""Laplace spectra of compact Einstein factors.

Round spheres are analytic.  Anything else (hyperbolic surfaces such as the
Bolza surface) is ingested from a JSON spectrum file::

    {"name": "bolza", "dim": 2, "rho": -1.0,
     "eigenvalues": [{"value": 0.0, "multiplicity": 1},
                     {"value": 3.8, "multiplicity": 3}],
     "complete_below": 4.0}
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import ValidationError
from .spectra import DiscreteSpectrum, ScalarValue, SpectralLine

LICHNEROWICZ_SLACK = 1e-9

_TOP_KEYS = {"name", "dim", "rho", "eigenvalues", "complete_below"}
_OPTIONAL_TOP_KEYS = {"provenance"}
_LINE_KEYS = {"value", "multiplicity"}
_OPTIONAL_LINE_KEYS = {"index", "factor_index", "gaussian_degree", "description"}


@dataclass(frozen=True)
class FactorSpectrum:
    name: str
    dim: int
    rho: float
    lines: tuple
    complete_below: float

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        problems = _factor_problems(self)
        if problems:
            raise ValidationError("; ".join(problems), problems)

    def to_discrete(self) -> DiscreteSpectrum:
        return DiscreteSpectrum(self.lines, self.complete_below)

    @property
    def is_point(self) -> bool:
        return self.dim == 0

    @property
    def second(self) -> SpectralLine | None:
        """Smallest nonzero eigenvalue line, if certified."""
        return self.lines[1] if len(self.lines) > 1 else None


def _factor_problems(fs: FactorSpectrum) -> list[str]:
    problems = []
    if not isinstance(fs.name, str):
        problems.append("name must be a string")
    if isinstance(fs.dim, bool) or not isinstance(fs.dim, int) or fs.dim < 0:
        problems.append(f"dim must be a nonnegative integer, got {fs.dim!r}")
    elif fs.dim == 0 and len(fs.lines) != 1:
        problems.append("a 0-dimensional (point) factor has exactly one eigenvalue 0")
    if not isinstance(fs.rho, (int, float)) or isinstance(fs.rho, bool) or not math.isfinite(fs.rho):
        problems.append(f"rho must be a finite number, got {fs.rho!r}")
    cb = fs.complete_below
    if cb is None:
        problems.append("complete_below is missing")
    elif not isinstance(cb, (int, float)) or isinstance(cb, bool) or math.isnan(cb):
        problems.append(f"complete_below must be a number, got {cb!r}")

    lines = fs.lines
    if not lines:
        problems.append("eigenvalue list is empty (mu_0 = 0 is required)")
        return problems
    for i, line in enumerate(lines):
        if not isinstance(line, SpectralLine):
            problems.append(f"line {i} is not a SpectralLine")
            return problems
    first = lines[0]
    if not (first.value.value() == 0.0):
        problems.append(f"mu_0 must be 0 (connected factor), got {first.value}")
    elif first.multiplicity != 1:
        problems.append(f"mu_0 = 0 must have multiplicity 1, got {first.multiplicity}")
    for i, line in enumerate(lines):
        if line.value.value() < 0:
            problems.append(f"eigenvalue {i} is negative: {line.value}")
    for i in range(1, len(lines)):
        if not lines[i - 1].value.value() < lines[i].value.value():
            problems.append(
                f"eigenvalues not strictly increasing at index {i} "
                f"({lines[i - 1].value} then {lines[i].value})"
            )
    if isinstance(cb, (int, float)) and not isinstance(cb, bool) and not math.isnan(cb):
        for i, line in enumerate(lines):
            if math.isfinite(cb) and not line.value.as_fraction() < Fraction(cb):
                problems.append(f"eigenvalue {i} = {line.value} is not below complete_below={cb!r}")
    if (
        isinstance(fs.rho, (int, float)) and fs.rho > 0
        and isinstance(fs.dim, int) and fs.dim >= 2 and len(lines) > 1
    ):
        bound = fs.dim * fs.rho / (fs.dim - 1)
        mu1 = lines[1].value.value()
        if mu1 < bound - LICHNEROWICZ_SLACK:
            problems.append(
                f"Lichnerowicz bound violated: mu_1 = {mu1!r} < k*rho/(k-1) = {bound!r}"
            )
    return problems


def sphere_eigenvalue(j: int, k: int) -> Fraction:
    """Coefficient of ``rho`` in the ``j``-th eigenvalue of the round ``S^k``
    with ``Ric = rho g``."""
    return Fraction(j * (j + k - 1), k - 1)


def sphere_multiplicity(j: int, k: int) -> int:
    """Dimension of degree-``j`` spherical harmonics on ``S^k``."""
    return comb(j + k, k) - (comb(j + k - 2, k) if j >= 2 else 0)


def sphere_spectrum(k: int, rho: float, cutoff: float) -> FactorSpectrum:
    """Spectrum of the round ``S^k`` normalised to ``Ric = rho g``, below ``cutoff``."""
    if isinstance(k, bool) or int(k) != k or k < 2:
        raise ValidationError(f"sphere dimension must be an integer >= 2, got {k!r}")
    k = int(k)
    if not (isinstance(rho, (int, float)) and math.isfinite(rho) and rho > 0):
        raise ValidationError(f"sphere factor needs rho > 0, got {rho!r}")
    if not (math.isfinite(cutoff) and cutoff > 0):
        raise ValidationError(f"cutoff must be a positive finite number, got {cutoff!r}")
    limit = Fraction(cutoff)
    unit = Fraction(rho)
    lines = []
    j = 0
    while sphere_eigenvalue(j, k) * unit < limit:
        lines.append(
            SpectralLine(ScalarValue.rational(sphere_eigenvalue(j, k), rho), sphere_multiplicity(j, k), ((j, 0),))
        )
        j += 1
    return FactorSpectrum(f"S^{k}", k, float(rho), tuple(lines), float(cutoff))


def trivial_factor(rho: float) -> FactorSpectrum:
    """One-point factor ``{0 (x1)}``: the pure Gaussian soliton."""
    return FactorSpectrum("point", 0, float(rho), (SpectralLine(ScalarValue.rational(0), 1, ((0, 0),)),), math.inf)


def hyperbolic_bottom(k: int, rho: float) -> float:
    """Bottom of the spectrum of ``-Laplacian`` on ``H^k`` with ``Ric = rho g``."""
    if isinstance(k, bool) or int(k) != k or k < 2:
        raise ValidationError(f"dimension must be an integer >= 2, got {k!r}")
    if not (math.isfinite(rho) and rho < 0):
        raise ValidationError(f"hyperbolic space needs rho < 0, got {rho!r}")
    return -(k - 1) * rho / 4.0


# --- file format ---------------------------------------------------------


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def parse_factor_spectrum(doc: dict) -> FactorSpectrum:
    """Validate a decoded spectrum document; report every problem at once."""
    if not isinstance(doc, dict):
        raise ValidationError("spectrum document must be a JSON object")
    problems = []
    for key in sorted(_TOP_KEYS - doc.keys()):
        problems.append(f"missing field {key!r}")
    for key in sorted(doc.keys() - _TOP_KEYS - _OPTIONAL_TOP_KEYS):
        problems.append(f"unknown field {key!r}")
    name = doc.get("name", "")
    dim = doc.get("dim")
    rho = doc.get("rho")
    cb = doc.get("complete_below")
    if "name" in doc and not isinstance(name, str):
        problems.append("name must be a string")
    if "dim" in doc and (isinstance(dim, bool) or not isinstance(dim, int) or dim < 1):
        problems.append(f"dim must be a positive integer, got {dim!r}")
    if "rho" in doc and not (_is_number(rho) and math.isfinite(rho)):
        problems.append(f"rho must be a finite number, got {rho!r}")
    if "complete_below" in doc and not (_is_number(cb) and math.isfinite(cb)):
        problems.append(f"complete_below must be a finite number, got {cb!r}")

    entries = doc.get("eigenvalues", [])
    lines = []
    if not isinstance(entries, list):
        problems.append("eigenvalues must be an array")
        entries = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            problems.append(f"eigenvalues[{i}] must be an object")
            continue
        for key in sorted(_LINE_KEYS - entry.keys()):
            problems.append(f"eigenvalues[{i}] missing {key!r}")
        for key in sorted(entry.keys() - _LINE_KEYS - _OPTIONAL_LINE_KEYS):
            problems.append(f"eigenvalues[{i}] has unknown field {key!r}")
        value = entry.get("value")
        mult = entry.get("multiplicity")
        ok = True
        if "value" in entry and not (_is_number(value) and math.isfinite(value)):
            problems.append(f"eigenvalues[{i}].value must be a finite number")
            ok = False
        if "multiplicity" in entry and (isinstance(mult, bool) or not isinstance(mult, int) or mult < 1):
            problems.append(f"eigenvalues[{i}].multiplicity must be a positive integer")
            ok = False
        if ok and "value" in entry and "multiplicity" in entry:
            lines.append(SpectralLine(ScalarValue.real(float(value)), mult, ((i, 0),)))

    if not problems:
        try:
            return FactorSpectrum(name, dim, float(rho), tuple(lines), float(cb))
        except ValidationError as exc:
            problems.extend(exc.problems)
    else:
        # still run the invariant checks on what could be parsed
        try:
            FactorSpectrum(
                name if isinstance(name, str) else "",
                dim if isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1 else 1,
                float(rho) if _is_number(rho) and math.isfinite(rho) else 0.0,
                tuple(lines),
                float(cb) if _is_number(cb) and math.isfinite(cb) else math.inf,
            )
        except ValidationError as exc:
            problems.extend(p for p in exc.problems if p not in problems)
    raise ValidationError("invalid spectrum file: " + "; ".join(problems), problems)


def load_factor_spectrum(source) -> FactorSpectrum:
    """Load a spectrum file from a path, an open file, a JSON string or a dict."""
    if isinstance(source, dict):
        return parse_factor_spectrum(source)
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, (str, os.PathLike)) and not str(source).lstrip().startswith("{"):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = str(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"spectrum file is not valid JSON: {exc}") from exc
    return parse_factor_spectrum(doc)


def factor_document(fs: FactorSpectrum) -> dict:
    return {
        "name": fs.name,
        "dim": fs.dim,
        "rho": fs.rho,
        "eigenvalues": [
            {"value": line.value.value(), "multiplicity": line.multiplicity}
            for line in fs.lines
        ],
        "complete_below": fs.complete_below,
    }


def dump_factor_spectrum(fs: FactorSpectrum) -> str:
    """Serialise with shortest round-trip float repr (reload is bit-exact)."""
    return json.dumps(factor_document(fs), indent=2) + "\n"


def write_factor_spectrum(fs: FactorSpectrum, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_factor_spectrum(fs))
