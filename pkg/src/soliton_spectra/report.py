"""Result tables in CSV (RFC 4180) and JSON."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .errors import ValidationError
from .rigid import EigenfunctionDescriptor, SolitonModel
from .spectra import DiscreteSpectrum

SPECTRUM_COLUMNS = ("index", "value", "multiplicity", "factor_index", "gaussian_degree", "description")
FORMATS = ("csv", "json")


def fmt(x) -> str:
    """15 significant digits; integers and booleans as themselves."""
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        out = format(x, ".15g")
        return "0" if out == "-0" else out
    return str(x)


def round15(x: float) -> float:
    return float(format(x, ".15g"))


def spectrum_rows(spectrum: DiscreteSpectrum, model: SolitonModel | None = None) -> list[dict]:
    """One row per distinct eigenvalue, indexed from 1; provenance ``(j, P)``
    pairs become parallel lists."""
    rows = []
    m = model.m if model is not None else 1
    for i, line in enumerate(spectrum, start=1):
        pairs = line.provenance
        labels = [EigenfunctionDescriptor.representative(j, P, m).label() for j, P in pairs]
        rows.append({
            "index": i,
            "value": line.value.value(),
            "multiplicity": line.multiplicity,
            "factor_index": [j for j, _ in pairs],
            "gaussian_degree": [P for _, P in pairs],
            "description": "; ".join(labels),
        })
    return rows


def _cell(x) -> str:
    if isinstance(x, (list, tuple)):
        return ";".join(fmt(v) for v in x)
    return fmt(x)


def _json_value(x):
    if isinstance(x, float):
        return round15(x) if math.isfinite(x) else fmt(x)
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    return x


def emit_table(rows, format: str = "csv", columns=SPECTRUM_COLUMNS, meta: dict | None = None) -> str:
    """Render ``rows`` (a list of dicts).

    JSON for spectrum rows mirrors the factor-file schema: the rows go under
    ``eigenvalues`` and ``meta`` supplies ``name``, ``dim``, ``rho`` and
    ``complete_below``.
    """
    if format not in FORMATS:
        raise ValidationError(f"format must be one of {FORMATS}, got {format!r}")
    rows = list(rows)
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(c, "")) for c in columns])
        return buf.getvalue()
    doc = dict(meta or {})
    key = "eigenvalues" if tuple(columns) == SPECTRUM_COLUMNS else "rows"
    doc[key] = [{c: row[c] for c in columns if c in row} for row in rows]
    return json.dumps(_json_value(doc), indent=2, ensure_ascii=False) + "\n"


def spectrum_document_meta(model: SolitonModel, cutoff: float) -> dict:
    return {
        "name": model.describe(),
        "dim": model.n,
        "rho": model.rho,
        "complete_below": cutoff,
        "provenance": {
            "factor": model.factor.name,
            "factor_dim": model.k,
            "gaussian_dim": model.m,
            "kind": model.kind,
        },
    }


def write_output(text: str, path=None, stream=None) -> None:
    """Write to ``path`` or to ``stream``; ``OSError`` propagates."""
    if path is None:
        stream.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
