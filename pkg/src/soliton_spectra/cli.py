"""Command-line front end.

Exit status: 0 on success, 2 on invalid input, 1 on internal errors or a
failed verification.  Every failure prints one line ``error: <reason>`` on
standard error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

from . import hermite, rigid, surfaces, verify
from .errors import ValidationError
from .factors import load_factor_spectrum, sphere_spectrum
from .report import (
    FORMATS,
    emit_table,
    fmt,
    spectrum_document_meta,
    spectrum_rows,
    write_output,
)
from .spectra import DiscreteSpectrum, product_oracle

SEED_ENV = "SOLITON_SPECTRA_SEED"


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)


def env_seed(default: int = 0) -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _finite(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return x


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="soliton-spectra", description="Drift-Laplacian spectra of rigid gradient Ricci solitons.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def model_args(sp):
        sp.add_argument("--factor", required=True, help="sphere:k=K or file:PATH")
        sp.add_argument("--rho", type=_finite, required=True)
        sp.add_argument("--n", type=int, required=True)

    def output_args(sp):
        sp.add_argument("--format", choices=FORMATS, default="csv")
        sp.add_argument("--output", default=None)

    sp = sub.add_parser("spectrum", help="eigenvalues with multiplicities")
    model_args(sp)
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--cutoff", type=_finite)
    group.add_argument("--count", type=int)
    output_args(sp)

    sp = sub.add_parser("second", help="second eigenvalue of an expander and its case")
    model_args(sp)

    sp = sub.add_parser("bounds", help="genus thresholds for the KV and Yang-Yau bounds")
    sp.add_argument("--rho", type=_finite, default=-1.0)
    sp.add_argument("--gamma-max", type=int, default=200)
    output_args(sp)

    sp = sub.add_parser("verify", help="numerical checks")
    vsub = sp.add_subparsers(dest="check", parser_class=_Parser)
    v = vsub.add_parser("hermite")
    v.add_argument("--p-max", type=int, default=20)
    v.add_argument("--rho", type=_finite, default=1.0)
    v = vsub.add_parser("oscillator")
    v.add_argument("--rho", type=_finite, default=-1.0)
    v.add_argument("--p-max", type=int, default=4)
    v.add_argument("--grids", type=_int_list, default=[512, 1024, 2048])
    v.add_argument("--radius", type=_finite, default=None)
    v.add_argument("--form", choices=verify.FORMS, default="drift")
    v = vsub.add_parser("equivalence")
    v.add_argument("--rho", type=_finite, default=-1.0)
    v.add_argument("--n", type=int, default=1)
    v.add_argument("--k", type=int, default=0)
    v.add_argument("--grid", type=int, default=2048)
    v.add_argument("--radius", type=_finite, default=12.0)
    v.add_argument("--count", type=int, default=5)
    vsub.add_parser("conjugation")
    v = vsub.add_parser("product-oracle")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("identities", help="normalization constant, potential profile, growth check")
    model_args(sp)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--radius", type=_finite, default=10.0)
    return p


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required")
    if args.command == "verify" and args.check is None:
        raise UsageError("verify needs a check: hermite, oscillator, equivalence, conjugation, product-oracle")
    options = {k: v for k, v in vars(args).items() if k != "command"}
    return RunConfig(args.command, options)


# --- model construction --------------------------------------------------


def factor_cutoff_for(rho: float, n: int, k: int, cutoff: float | None, count: int | None) -> float:
    """Sphere truncation large enough that the requested output is certified."""
    m = n - k
    offset = 0.0 if rho > 0 else abs(rho) * m
    if cutoff is not None:
        return max(cutoff - offset, 0.0) + abs(rho)
    return abs(rho) * (count + 2)


def parse_factor_source(source: str, rho: float, n: int, cutoff=None, count=None):
    kind, sep, rest = source.partition(":")
    if not sep:
        raise ValidationError(f"factor source must be sphere:k=K or file:PATH, got {source!r}")
    if kind == "sphere":
        key, eq, value = rest.partition("=")
        if key != "k" or not eq:
            raise ValidationError(f"sphere source must look like sphere:k=K, got {source!r}")
        try:
            k = int(value)
        except ValueError:
            raise ValidationError(f"sphere dimension must be an integer, got {value!r}") from None
        return sphere_spectrum(k, rho, factor_cutoff_for(rho, n, k, cutoff, count if count else 2))
    if kind == "file":
        if not rest:
            raise ValidationError("file source needs a path")
        try:
            return load_factor_spectrum(rest)
        except FileNotFoundError:
            raise ValidationError(f"spectrum file not found: {rest}") from None
    raise ValidationError(f"unknown factor source {kind!r} (expected sphere or file)")


def build_model(opts: dict, cutoff=None, count=None) -> rigid.SolitonModel:
    factor = parse_factor_source(opts["factor"], opts["rho"], opts["n"], cutoff, count)
    return rigid.SolitonModel(factor, opts["n"], opts["rho"])


# --- subcommands ---------------------------------------------------------


def cmd_spectrum(opts, out) -> int:
    cutoff, count = opts["cutoff"], opts["count"]
    if count is not None and count < 1:
        raise ValidationError(f"count must be positive, got {count}")
    model = build_model(opts, cutoff, count)
    if cutoff is not None:
        spec = rigid.rigid_spectrum(model, cutoff)
    else:
        lines = rigid.first_lines(model, count)
        cutoff = model.certified_bound()
        spec = DiscreteSpectrum(tuple(lines), cutoff)
    rows = spectrum_rows(spec, model)
    text = emit_table(rows, opts["format"], meta=spectrum_document_meta(model, cutoff))
    write_output(text, opts["output"], out)
    return 0


def cmd_second(opts, out) -> int:
    model = build_model(opts, count=2)
    result = rigid.second_eigenvalue_case(model)
    lines = rigid.first_lines(model, 2)
    enumerated = lines[1]
    agrees = enumerated.value == result.value and enumerated.multiplicity == result.multiplicity
    out.write(f"model: {model.describe()}\n")
    out.write(f"lambda_1: {fmt(lines[0].value.value())} (x{lines[0].multiplicity})\n")
    out.write(f"lambda_2: {fmt(result.value.value())} (x{result.multiplicity})\n")
    out.write(f"case: {result.case}\n")
    out.write(f"matches enumeration: {fmt(agrees)}\n")
    return 0 if agrees else 1


def cmd_bounds(opts, out) -> int:
    report = surfaces.genus_threshold(opts["rho"], opts["gamma_max"])
    columns = ("genus", "yang_yau", "kv", "best", "kv_below")
    rows = [{c: getattr(r, c) for c in columns} for r in report.rows]
    summary = {
        f"all γ≥{report.sufficient_threshold}: kv < −ρ": report.sufficient_holds,
        f"relaxed ceiling, all γ≥{report.sufficient_threshold}: kv < −ρ": report.relaxed_holds,
        "minimal genus (exact ceiling)": report.minimal_genus,
        "yang_yau > −ρ for all γ": report.yang_yau_always_above,
        "kv(46)/(−ρ)": surfaces.kv_bound(surfaces.SurfaceData(46, opts["rho"])) / -opts["rho"],
        "guard-band genera": ",".join(str(g) for g in report.guard_flagged) or "none",
    }
    if opts["format"] == "json":
        text = emit_table(rows, "json", columns, meta={"rho": opts["rho"], "summary": summary})
    else:
        text = emit_table(rows, "csv", columns)
        text += "".join(f"# {k}: {fmt(v)}\n" for k, v in summary.items())
    write_output(text, opts["output"], out)
    return 0


def _verify_hermite(opts, out) -> bool:
    p_max, rho = opts["p_max"], opts["rho"]
    if rho == 0:
        raise ValidationError("rho must be nonzero")
    worst_res = 0.0
    worst_orth = 0.0
    for mode, r in (("shrinker", abs(rho)), ("expander", -abs(rho))):
        funcs = [hermite.GaussianEigenfunction(mode, r, p) for p in range(p_max + 1)]
        norms = [hermite.weighted_norm(e) for e in funcs]
        for p, e in enumerate(funcs):
            worst_res = max(worst_res, hermite.drift_residual(e))
            for q in range(p):
                ip = hermite.weighted_inner_product(e, funcs[q])
                worst_orth = max(worst_orth, abs(ip) / (norms[p] * norms[q]))
    out.write(f"max orthogonality defect: {fmt(worst_orth)}\n")
    out.write(f"max drift residual: {fmt(worst_res)}\n")
    return worst_orth <= 1e-10 and worst_res <= 1e-8


def _verify_oscillator(opts, out) -> bool:
    rep = verify.convergence_study(opts["rho"], opts["p_max"], opts["grids"], opts["radius"], opts["form"])
    out.write(f"rho: {fmt(rep.rho)}  radius: {fmt(rep.radius)}  form: {opts['form']}\n")
    out.write("p,target," + ",".join(f"error_N{N}" for N in rep.grids) + ",finest_ratio\n")
    for p, target in enumerate(rep.targets):
        ratio = rep.finest_ratios[p]
        out.write(f"{p},{fmt(target)}," + ",".join(fmt(e) for e in rep.errors[p])
                  + f",{'skipped' if ratio is None else fmt(ratio)}\n")
    out.write(f"truncation shift (R -> 2R, same h): {fmt(rep.truncation_shift)}\n")
    out.write(f"ratios within [3.6, 4.4]: {fmt(rep.passed)}\n")
    return rep.passed


def _verify_equivalence(opts, out) -> bool:
    rep = verify.equivalence_check(opts["rho"], opts["n"], opts["k"], opts["radius"], opts["grid"], opts["count"])
    for form, values in rep["eigenvalues"].items():
        out.write(f"{form}: " + ",".join(fmt(v) for v in values) + "\n")
    for pair, dev in rep["deviations"].items():
        out.write(f"deviation {pair}: {fmt(dev)}\n")
    out.write(f"max deviation: {fmt(rep['max_deviation'])}\n")
    out.write(f"within 1e-10: {fmt(rep['passed'])}\n")
    return rep["passed"]


def _verify_conjugation(opts, out) -> bool:
    worst = 0.0
    for F, H, label in verify.conjugation_matrix():
        r = verify.conjugation_residual(F, H)
        worst = max(worst, r)
        out.write(f"{label}: {fmt(r)}\n")
    out.write(f"max relative residual: {fmt(worst)}\n")
    return worst <= 1e-9


def _verify_product(opts, out) -> bool:
    seed = opts["seed"] if opts["seed"] is not None else env_seed()
    rep = product_oracle(opts["trials"], seed)
    out.write(f"trials: {rep['trials']}  seed: {rep['seed']}\n")
    out.write(f"minkowski_sum mismatches: {len(rep['mismatches'])}\n")
    out.write(f"lambda_min additivity failures: {len(rep['additivity_failures'])}\n")
    return rep["passed"]


CHECKS = {
    "hermite": _verify_hermite,
    "oscillator": _verify_oscillator,
    "equivalence": _verify_equivalence,
    "conjugation": _verify_conjugation,
    "product-oracle": _verify_product,
}


def cmd_verify(opts, out) -> int:
    ok = CHECKS[opts["check"]](opts, out)
    if not ok:
        raise VerificationFailed(f"verify {opts['check']} failed")
    return 0


def cmd_identities(opts, out) -> int:
    model = build_model(opts)
    norm = rigid.normalization_constant(model, opts["samples"], opts["radius"], env_seed())
    profile = rigid.schrodinger_potential(model, opts["radius"], 200)
    growth = rigid.potential_growth_check(model, opts["radius"])
    out.write(f"model: {model.describe()}\n")
    out.write(f"normalization constant C: {fmt(norm.constant)}\n")
    out.write(f"max deviation over {norm.samples} samples: {fmt(norm.max_deviation)}\n")
    out.write(f"constant to machine precision: {fmt(norm.constant_to_machine_precision)}\n")
    out.write(f"soliton equation residual: {fmt(rigid.soliton_equation_residual(model))}\n")
    out.write(f"V(0): {fmt(profile.v0)}  V({fmt(opts['radius'])}): {fmt(profile.v_end)}\n")
    out.write(f"potential decreasing: {fmt(profile.decreasing)}  diverges: {fmt(profile.diverges)}\n")
    for key, value in growth.items():
        out.write(f"growth {key}: {fmt(value)}\n")
    return 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "second": cmd_second,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "identities": cmd_identities,
}


def _one_line(message) -> str:
    return " ".join(str(message).split())


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        config = parse_config(argv)
    except UsageError as exc:
        stderr.write(f"error: {_one_line(exc)}\n")
        stderr.write(_one_line(build_parser().format_usage()) + "\n")
        return 2
    try:
        return COMMANDS[config.subcommand](config.options, stdout)
    except ValidationError as exc:
        stderr.write(f"error: {_one_line(exc)}\n")
        return 2
    except VerificationFailed as exc:
        stderr.write(f"error: {_one_line(exc)}\n")
        return 1
    except OSError as exc:
        stderr.write(f"error: {_one_line(exc)}\n")
        return 1
    except Exception as exc:  # internal error
        stderr.write(f"error: internal: {type(exc).__name__}: {_one_line(exc)}\n")
        return 1


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
