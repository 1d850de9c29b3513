"""``wgschwarz`` command-line entry point."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import parse_config, serialize
from .cross_section import Rectangle
from .errors import ConfigError, DomainError, WgSchwarzError
from .modal import build_mode_catalog
from .schwarz import limiting_radius, schwarz_block
from .svg import Series, render
from .sweep import (
    SweepConfig,
    dictionary_report,
    nilpotency_sweep,
    scalability_table,
    simulate,
    sweep_finite_N,
    sweep_limiting_spectrum,
)
from .transmission import TransmissionKind, transmission_symbol

log = logging.getLogger("wgschwarz")

COMMANDS = ("modes", "limspec", "radius", "simulate", "table", "dictionary", "nilpotency")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CHECK = 0, 2, 3, 4

HEADERS = {
    "modes": ["family", "index", "r", "beta_re", "beta_im", "kappa_re", "kappa_im", "lambda_re", "lambda_im",
              "classification", "rho_limit"],
    "limspec": ["r", "family", "a_re", "a_im", "b_re", "b_im", "rho_limit", "outside_theorem", "skipped"],
    "radius": ["r", "family", "N", "rho", "rho_limit", "outside_theorem", "near_nilpotent", "skipped"],
    "simulate": ["N", "method", "iteration", "residual"],
    "dictionary": ["r", "pair", "a_residual", "b_residual", "rho_a", "rho_b", "rho_difference", "skipped"],
    "nilpotency": ["family", "r", "N", "a_abs", "degree", "bounded"],
}


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return "none"
    return str(v)


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


# -- command bodies: each returns (files {name: text}, check_ok) ------------------------------------------

def cmd_modes(config: SweepConfig, want_svg: bool):
    section = config.cross_section() or Rectangle(1.0, 1.0)
    rows = []
    for m in build_mode_catalog(section, config.k, config.max_modes, config.cutoff_tol):
        if m.family not in config.families:
            continue
        lam = transmission_symbol(config.transmission, m).lam
        rho = limiting_radius(schwarz_block(m, lam, config.L, config.delta))
        rows.append([m.family.value, m.index, float(m.r), m.beta.real, m.beta.imag, m.kappa.real, m.kappa.imag,
                     lam.real, lam.imag, m.classification.value, rho])
    files = {"modes.csv": to_csv(HEADERS["modes"], rows)}
    return files, True


def cmd_limspec(config: SweepConfig, want_svg: bool):
    res = sweep_limiting_spectrum(config)
    rows = [[r["r"], r["family"], r["a"].real, r["a"].imag, r["b"].real, r["b"].imag, r["rho_limit"],
             r["outside_theorem"], r["skipped"]] for r in res.rows]
    files = {"limspec.csv": to_csv(HEADERS["limspec"], rows)}
    if want_svg:
        series = []
        for fam in config.families:
            pts = [r for r in res.rows if r["family"] == fam.value]
            series.append(Series(f"{fam.value} limit", [p["r"] for p in pts], [p["rho_limit"] for p in pts], True))
        files["limspec.svg"] = render(series, f"limiting spectrum, {config.transmission.label()}", "r", "rho")
    ok = True
    if config.k.imag > 0:
        vals = [r["rho_limit"] for r in res.rows if not r["skipped"]]
        ok = bool(vals) and max(vals) < 1 - 1e-3
    if config.transmission.kind is TransmissionKind.DTN:
        ok = ok and all(r["outside_theorem"] for r in res.rows if not r["skipped"])
    return files, ok


def cmd_radius(config: SweepConfig, want_svg: bool):
    res = sweep_finite_N(config)
    rows = [[r["r"], r["family"], r["N"], r["rho"], r["rho_limit"], r["outside_theorem"], r["near_nilpotent"],
             r["skipped"]] for r in res.rows]
    files = {"radius.csv": to_csv(HEADERS["radius"], rows)}
    if want_svg:
        for fam in config.families:
            series = []
            for N in config.N_list:
                pts = [r for r in res.rows if r["family"] == fam.value and r["N"] == N]
                series.append(Series(f"N={N}", [p["r"] for p in pts], [p["rho"] for p in pts]))
            pts = [r for r in res.rows if r["family"] == fam.value and r["N"] == config.N_list[0]]
            series.append(Series("limit", [p["r"] for p in pts], [p["rho_limit"] for p in pts], True))
            files[f"radius_{fam.value}.svg"] = render(
                series, f"spectral radius, {fam.value}, {config.transmission.label()}", "r", "rho")
    # evanescent points well past cut-off must approach the limit
    ok = True
    n_lo, n_hi = min(config.N_list), max(config.N_list)
    by_key = {(r["family"], r["r"], r["N"]): r for r in res.rows if not r["skipped"]}
    for (fam, rv, N), row in by_key.items():
        if N != n_hi or rv < abs(config.k) + 0.5 or row["outside_theorem"] or n_lo == n_hi:
            continue
        far = abs(row["rho"] - row["rho_limit"])
        near = abs(by_key[(fam, rv, n_lo)]["rho"] - row["rho_limit"])
        ok = ok and far <= 0.05 and far < near
    return files, ok


def cmd_simulate(config: SweepConfig, want_svg: bool):
    res = simulate(config)
    rows = [[r["N"], r["method"], r["iteration"], r["residual"]] for r in res.rows]
    files = {"simulate.csv": to_csv(HEADERS["simulate"], rows),
             "simulate_summary.json": json.dumps({str(k): v for k, v in res.metadata.items()}, indent=2,
                                                 sort_keys=True) + "\n"}
    if want_svg:
        series = []
        for N in config.N_list:
            for method in ("fixed_point", "gmres"):
                pts = [r for r in res.rows if r["N"] == N and r["method"] == method]
                series.append(Series(f"{method} N={N}", [p["iteration"] for p in pts],
                                     [math.log10(p["residual"]) if p["residual"] > 0 else math.nan for p in pts],
                                     method == "gmres"))
        files["simulate.svg"] = render(series, "residual history", "iteration", "log10 residual")
    ok = True
    if config.transmission.kind is TransmissionKind.DTN:
        ok = all(m["fixed_point_converged"] and m["fixed_point_iterations"] <= N for N, m in res.metadata.items())
    return files, ok


def cmd_table(config: SweepConfig, want_svg: bool):
    res = scalability_table(config)
    header = ["sigma", "k_re", "k_im", "mode_family", "mode_r"] + [f"N{N}" for N in config.N_list]
    grouped: dict = {}
    for r in res.rows:
        key = (r["sigma"], r["k"].real, r["k"].imag)
        grouped.setdefault(key, []).append(r)
    rows = []
    ok = True
    for (sigma, kr, ki), group in grouped.items():
        its = [g["iterations"] if g["converged"] else "DNC" for g in group]
        rows.append([sigma, kr, ki, group[-1]["mode_family"], float(group[-1]["mode_r"])] + its)
        if config.transmission.kind is TransmissionKind.DTN:
            ok = ok and all(g["converged"] and g["iterations"] <= g["N"] for g in group)
        if sigma == "k":
            counts = [g["iterations"] for g in group if g["converged"]]
            ok = ok and len(counts) == len(group) and max(counts) - min(counts) <= 4
    files = {"table.csv": to_csv(header, rows),
             "table_meta.json": json.dumps(res.metadata, indent=2, sort_keys=True) + "\n"}
    if want_svg:
        series = [Series(f"sigma={s} k={kr:g}", [float(N) for N in config.N_list],
                         [float(g["iterations"]) if g["converged"] else math.nan for g in group])
                  for (s, kr, _), group in grouped.items()]
        files["table.svg"] = render(series, "GMRES iterations", "N", "iterations")
    return files, ok


def cmd_dictionary(config: SweepConfig, want_svg: bool):
    res = dictionary_report(config)
    rows = [[r["r"], r["pair"], r["a_residual"], r["b_residual"], r["rho_a"], r["rho_b"], r["rho_difference"],
             r["skipped"]] for r in res.rows]
    files = {"dictionary.csv": to_csv(HEADERS["dictionary"], rows)}
    if want_svg:
        pts = [r for r in res.rows if r["pair"] == "te/tm"]
        files["dictionary.svg"] = render(
            [Series("te", [p["r"] for p in pts], [p["rho_a"] for p in pts]),
             Series("tm", [p["r"] for p in pts], [p["rho_b"] for p in pts], True)],
            "limiting radius, te vs tm", "r", "rho")
    good = [r for r in res.rows if not r["skipped"]]
    ok = all(r["a_residual"] < 1e-12 and r["b_residual"] < 1e-12 and r["rho_difference"] < 1e-13 for r in good)
    return files, ok


def cmd_nilpotency(config: SweepConfig, want_svg: bool):
    res = nilpotency_sweep(config)
    rows = [[r["family"], r["r"], r["N"], r["a_abs"], r["degree"], r["degree"] is not None and r["degree"] <= r["N"]]
            for r in res.rows]
    files = {"nilpotency.csv": to_csv(HEADERS["nilpotency"], rows)}
    ok = all(row[-1] for row in rows) if config.transmission.kind is TransmissionKind.DTN else True
    return files, ok


DISPATCH = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# -- argument handling -----------------------------------------------------------------------------------

def _csv_list(cast):
    def parse(text):
        try:
            return tuple(cast(v.strip()) for v in text.split(",") if v.strip())
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wgschwarz", description="Per-mode Schwarz convergence analysis for waveguides.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path)
    p.add_argument("--k", type=float, dest="k")
    p.add_argument("--k-im", type=float, dest="k_im")
    p.add_argument("--k-list", type=_csv_list(float), dest="k_list")
    p.add_argument("--L", type=float, dest="L")
    p.add_argument("--delta", type=float)
    p.add_argument("--N-list", type=_csv_list(int), dest="N_list")
    p.add_argument("--N", type=int, dest="N_single", help="single N (shorthand for --N-list N)")
    p.add_argument("--mode", choices=("weak", "strong"), dest="scaling")
    p.add_argument("--total-length", type=float, dest="total_length")
    p.add_argument("--transmission", choices=[t.value for t in TransmissionKind], dest="kind")
    p.add_argument("--pml-sigma", type=float, dest="pml_sigma")
    p.add_argument("--pml-len", type=float, dest="pml_len")
    p.add_argument("--families", type=_csv_list(str))
    p.add_argument("--r-min", type=float, dest="r_min")
    p.add_argument("--r-max", type=float, dest="r_max")
    p.add_argument("--r-step", type=float, dest="r_step")
    p.add_argument("--section")
    p.add_argument("--sigma-list", type=_csv_list(str), dest="sigma_list")
    p.add_argument("--initial", choices=("unit", "random"))
    p.add_argument("--mode-r", type=float, dest="mode_r")
    p.add_argument("--max-modes", type=int, dest="max_modes")
    p.add_argument("--seed", type=int)
    p.add_argument("--svg", action="store_true")
    p.add_argument("--check", action="store_true")
    p.add_argument("--dry-run", action="store_true")
    p.add_argument("--out", type=Path, default=Path("."))
    return p


OVERRIDE_KEYS = ("k", "k_im", "k_list", "L", "delta", "N_list", "scaling", "total_length", "kind", "pml_sigma",
                 "pml_len", "families", "r_min", "r_max", "r_step", "section", "sigma_list", "initial", "mode_r",
                 "max_modes", "seed")


def resolve(args: argparse.Namespace) -> SweepConfig:
    overrides = {k: getattr(args, k) for k in OVERRIDE_KEYS}
    if args.N_single is not None:
        if args.N_list is not None:
            raise ConfigError("give either --N or --N-list, not both")
        overrides["N_list"] = (args.N_single,)
    return parse_config(args.config, overrides)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve(args)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.dry_run:
        print(serialize(config), end="")
        print(f"# would run {args.command}, writing into {args.out}")
        return EXIT_OK
    try:
        files, ok = DISPATCH[args.command](config, args.svg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WgSchwarzError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    args.out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in files.items():
        (args.out / name).write_text(text, encoding="utf-8")
        written.append(name)
    manifest = {
        "command": args.command,
        "config": serialize(config),
        "seed": config.seed,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "files": written + ["manifest.json"],
    }
    (args.out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    for name in written:
        print(args.out / name)
    if args.check:
        print(f"check {args.command}: {'PASS' if ok else 'FAIL'}")
        if not ok:
            return EXIT_CHECK
    return EXIT_OK


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
