"""Command-line entry point: ``nlifo spectrum|interferogram|verify``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import PRESETS, build_scenario, load_config, load_preset
from .dispersion import idler_eta
from .errors import ConfigError, NlifoError
from .interferometry import CONFIGURATIONS as INTERFEROGRAM_CONFIGURATIONS
from .interferometry import sweep_opd, visibility_analytic, visibility_numeric
from .spectra import OSCILLATION_COLUMNS, SPECTRUM_CONFIGURATIONS, compute_spectrum
from .twinbeam import vacuum_moments

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_fmt(v) for v in row] for row in rows)


def _write_meta(path: Path, meta: dict):
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _scenario(args):
    if args.config and args.preset:
        raise ConfigError("use either --config or --preset, not both")
    if args.preset:
        cfg = load_preset(args.preset)
    elif args.config:
        cfg = load_config(args.config)
    else:
        raise ConfigError("one of --config PATH or --preset NAME is required")
    return build_scenario(cfg)


def _base_meta(scenario, configuration):
    d = scenario.config.dispersion
    return {
        "configuration": configuration,
        "version": __version__,
        "dispersion_model": d.model,
        "dispersion_label": d.label,
        "pma_offset_rad_per_m": d.pma_offset,
        "gamma_mag_per_m": scenario.src.gamma_mag,
        "n_peak": scenario.n_peak,
    }


def run_spectrum(args) -> int:
    scenario = _scenario(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    columns = compute_spectrum(scenario, args.configuration)
    lam = scenario.grid.signal_wavelengths(scenario.src)
    raw = np.asarray(columns.pop("value"), dtype=float)
    peak = float(np.max(raw))
    if not peak > 0:
        raise NlifoError("cannot normalize null spectrum")
    header = ["lambda_m", "value", "value_raw"]
    data = [lam, raw / peak, raw]
    for name, values in columns.items():
        header.append(name)
        data.append(np.asarray(values, dtype=float))
    _write_csv(out / f"{args.configuration}_spectrum.csv", header, zip(*data))
    meta = _base_meta(scenario, args.configuration)
    meta["normalization_max"] = peak
    meta["raw_columns"] = [h for h in header[2:] if h not in OSCILLATION_COLUMNS]
    if args.configuration == "su11":
        meta["pi_conventions"] = {
            "osc_general": "cos(Phi + Psi), constant +pi kept",
            "osc_general_no_pi": "cos(Phi + Psi - pi), constant +pi dropped",
            "osc_gain_approx": "cos(Phi + tanh(gL)/g Sigma + pi)",
            "osc_gain_approx_no_pi": "cos(Phi + tanh(gL)/g Sigma)",
        }
    _write_meta(out / f"{args.configuration}_spectrum.meta.json", meta)

    from .plotting import plot_spectrum

    curves = {args.configuration: raw / peak}
    if "idler" in columns:
        idl = np.asarray(columns["idler"], dtype=float)
        if idl.max() > 0:
            curves["idler (conjugate axis)"] = idl / idl.max()
    plot_spectrum(lam, curves, out / f"{args.configuration}_spectrum.svg", args.configuration)
    print(f"wrote {args.configuration}_spectrum.csv and .svg to {out}")
    return EXIT_OK


def run_interferogram(args) -> int:
    scenario = _scenario(args)
    if scenario.opd_range.n < 2:
        raise ConfigError("need ≥2 OPD points for visibility")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    name = args.configuration
    ifg = sweep_opd(scenario, name, scenario.opd_range)
    opd_col = np.repeat(ifg.opd_axis, ifg.wavelength_axis.size)
    lam_col = np.tile(ifg.wavelength_axis, ifg.opd_axis.size)
    rows = np.column_stack([opd_col, lam_col, ifg.values.ravel(), ifg.raw.ravel()])
    _write_csv(out / f"{name}_interferogram.csv", ["opd_m", "lambda_m", "intensity", "intensity_raw"], rows)
    trace = visibility_numeric(ifg)
    _write_csv(out / f"{name}_visibility.csv", ["lambda_m", "visibility"], zip(trace.wavelength_axis, trace.v))
    meta = _base_meta(scenario, name)
    meta.update(normalization_max=ifg.scale, opd_points=int(ifg.opd_axis.size), visibility_undefined_bins=trace.n_undefined)
    _write_meta(out / f"{name}_interferogram.meta.json", meta)

    from .plotting import plot_interferogram, plot_visibility

    reference = None
    if name in ("su11", "ic_bbs"):
        w = scenario.grid.omega
        n_v = vacuum_moments(scenario.model, scenario.src, w).n_s
        eta = idler_eta(scenario.loss, scenario.src, w)
        reference = {"analytic": visibility_analytic("su11" if name == "su11" else "ic", n_v, eta)}
    plot_interferogram(ifg, out / f"{name}_interferogram.svg", name)
    plot_visibility(trace, out / f"{name}_visibility.svg", name, reference)
    print(f"wrote {name} interferogram ({ifg.opd_axis.size} OPD x {ifg.wavelength_axis.size} bins) to {out}")
    return EXIT_OK


def run_verify(args) -> int:
    from .oracle import verify_identity_suite

    if args.draws < 0:
        raise ConfigError("--draws must be non-negative")
    report = verify_identity_suite(args.seed, args.draws)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "verify_report.txt").write_text(report.text(), encoding="utf-8")
    (out / "verify_report.csv").write_text(report.csv(), encoding="utf-8")
    sys.stdout.write(report.text())
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlifo", description="Twin-beam spectra and nonlinear-interferometer scans.")
    parser.add_argument("--version", action="version", version=f"nlifo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, choices, default):
        p.add_argument("--config", metavar="PATH", help="scenario TOML file")
        p.add_argument("--preset", choices=PRESETS, help="shipped scenario instead of --config")
        p.add_argument("--configuration", choices=choices, default=default, metavar="NAME",
                       help=f"one of: {', '.join(choices)} (default {default})")
        p.add_argument("--out", metavar="DIR", default=".", help="output directory")

    add_common(sub.add_parser("spectrum", help="single-configuration spectrum"), SPECTRUM_CONFIGURATIONS, "vacuum")
    add_common(sub.add_parser("interferogram", help="OPD sweep and visibility"), INTERFEROGRAM_CONFIGURATIONS, "su11")
    v = sub.add_parser("verify", help="randomized analytic-versus-pipeline identity battery")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--draws", type=int, default=256)
    v.add_argument("--out", metavar="DIR", default=".")
    return parser


_RUNNERS = {"spectrum": run_spectrum, "interferogram": run_interferogram, "verify": run_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return _RUNNERS[args.command](args)
    except ConfigError as exc:
        print(f"nlifo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NlifoError as exc:
        print(f"nlifo: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"nlifo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
