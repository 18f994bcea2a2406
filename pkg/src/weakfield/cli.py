"""Command-line driver.

Subcommands: ``capacity`` (baseline table), ``point`` (single rate
evaluation), ``sweep`` (grid run to CSV), ``summary`` (headline scalars from a
CSV), ``figures`` (per-figure CSV slices).  Exit codes: 0 success, 1
configuration error, 2 numeric error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys

import numpy as np

from . import baselines
from .detectors import DetectorConfig
from .errors import BracketError, ConfigurationError, NumericError, SchemaError
from .experiments import (
    EXPERIMENTS,
    QuadratureCounts,
    SweepConfig,
    emit_csv,
    read_rows,
    run_experiment,
    summarize,
    write_figure_slices,
)
from .information import DetectorKind, RateResult, mutual_information, ratio_and_gain
from .modulation import ModulationKind, ModulationScheme, build_rule
from .optimize import OptimizerSettings, optimize_z


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakfield",
        description="Information rates of weak-field homodyne receivers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", help="print the baseline capacity table")
    cap.add_argument("--min", type=float, default=1e-5)
    cap.add_argument("--max", type=float, default=10.0)
    cap.add_argument("--points", type=int, default=41)

    point = sub.add_parser("point", help="evaluate one mutual-information point")
    point.add_argument("--detector", choices=["wh", "hl", "dw"], required=True)
    point.add_argument("--M", type=int, required=True)
    point.add_argument("--nS", type=float, required=True)
    point.add_argument("--z", type=float, default=None, help="LO amplitude (shot-noise units)")
    point.add_argument("--optimize-z", action="store_true")
    group = point.add_mutually_exclusive_group()
    group.add_argument("--nu", type=float, default=None, help="Gamma modulation shape")
    group.add_argument("--bpsk", action="store_true")
    point.add_argument("--nodes", type=int, default=64)

    sweep = sub.add_parser("sweep", help="run an experiment grid and write CSV")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", default=None, help="overrides output_path from the config")

    summary = sub.add_parser("summary", help="recompute headline scalars from a CSV")
    summary.add_argument("--in", dest="input", required=True)

    figures = sub.add_parser("figures", help="write per-figure CSV slices")
    figures.add_argument("--in", dest="input", required=True)
    figures.add_argument("--out", dest="outdir", required=True)

    return parser


def _cmd_capacity(args) -> int:
    if args.min <= 0 or args.min > args.max or args.points < 2:
        raise ConfigurationError("need 0 < min <= max and points >= 2")
    grid = np.logspace(math.log10(args.min), math.log10(args.max), args.points)
    print(f"{'n_S':>12} {'C_SH':>12} {'C_DH':>12} {'C_H':>12} {'C_DD':>12}")
    for n_s in grid:
        print(
            f"{n_s:12.6g} {baselines.shannon_sh(n_s):12.6g} "
            f"{baselines.shannon_dh(n_s):12.6g} {baselines.holevo(n_s):12.6g} "
            f"{baselines.dd_upper_bound(n_s):12.6g}"
        )
    return 0


def _point_scheme(args) -> ModulationScheme:
    if args.detector == "dw":
        if args.nu is not None or args.bpsk:
            raise ConfigurationError("non-Gaussian modulation is single-quadrature only")
        return ModulationScheme(ModulationKind.GAUSSIAN_BI, args.nS)
    if args.bpsk:
        return ModulationScheme(ModulationKind.BPSK_UNI, args.nS)
    if args.nu is not None:
        if args.nu == 0.5:
            return ModulationScheme(ModulationKind.GAUSSIAN_UNI, args.nS)
        return ModulationScheme(ModulationKind.GAMMA_UNI, args.nS, nu=args.nu)
    return ModulationScheme(ModulationKind.GAUSSIAN_UNI, args.nS)


def _cmd_point(args) -> int:
    scheme = _point_scheme(args)
    rule = build_rule(scheme, args.nodes)
    kind = DetectorKind(args.detector)
    if args.optimize_z:
        z_opt, bits = optimize_z(kind, args.M, scheme, rule)
    else:
        if args.z is None:
            raise ConfigurationError("either --z or --optimize-z is required")
        z_opt = args.z
        bits = mutual_information(kind, DetectorConfig(args.M, args.z), scheme, rule)
    rate = RateResult.from_rate(bits, z_opt, scheme, kind, args.M, nu_opt=args.nu)
    result = {
        "detector": args.detector,
        "M": rate.M,
        "n_S": args.nS,
        "modulation": scheme.kind.value,
        "z": rate.z_opt,
        "bits_per_use": rate.bits_per_use,
    }
    if args.nS > 0:
        ratio_base = "DH" if args.detector == "dw" else "SH"
        ratio, gain = ratio_and_gain(rate.bits_per_use, args.nS, ratio_base)
        result.update(
            pie=rate.pie_bits_per_photon, ratio=ratio, ratio_baseline=ratio_base, gain=gain
        )
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def load_sweep_config(path) -> SweepConfig:
    """Parse the flat key=value config file (INI sections) into a SweepConfig."""
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as handle:
        parser.read_file(handle)
    if not parser.has_section("sweep") or not parser.has_option("sweep", "experiment"):
        raise ConfigurationError(f"{path}: missing [sweep] experiment=<name>")
    experiment = parser.get("sweep", "experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigurationError(f"{path}: unknown experiment {experiment!r}")

    overrides = {}
    for key, caster in (
        ("n_s_min", float),
        ("n_s_max", float),
        ("n_s_points", int),
        ("threads", int),
        ("output_path", str),
    ):
        if parser.has_option("sweep", key):
            overrides[key] = caster(parser.get("sweep", key))
    if parser.has_option("sweep", "m_list"):
        overrides["m_list"] = tuple(
            int(v) for v in parser.get("sweep", "m_list").split(",") if v.strip()
        )

    counts = {}
    if parser.has_section("quadrature"):
        for key in ("uni", "bi_axis", "gamma"):
            if parser.has_option("quadrature", key):
                counts[key] = parser.getint("quadrature", key)
    if counts:
        overrides["counts"] = QuadratureCounts(**counts)

    optimizer = {}
    if parser.has_section("optimizer"):
        for key, caster in (
            ("z2_min", float),
            ("z2_max", float),
            ("coarse_points", int),
            ("refine_tol", float),
        ):
            if parser.has_option("optimizer", key):
                optimizer[key] = caster(parser.get("optimizer", key))
    if optimizer:
        overrides["optimizer"] = OptimizerSettings(**optimizer)

    try:
        return SweepConfig.with_defaults(experiment, **overrides)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc


def _cmd_sweep(args) -> int:
    config = load_sweep_config(args.config)
    target = args.out or config.output_path
    if target is None:
        raise ConfigurationError("no output path: pass --out or set output_path in the config")
    rows = run_experiment(config)
    emit_csv(rows, target)
    print(f"wrote {len(rows)} rows to {target}")
    return 0


def _cmd_summary(args) -> int:
    rows = read_rows(args.input)
    print(summarize(rows))
    return 0


def _cmd_figures(args) -> int:
    rows = read_rows(args.input)
    written = write_figure_slices(rows, args.outdir)
    for name in written:
        print(f"wrote {args.outdir}/{name}")
    return 0


_COMMANDS = {
    "capacity": _cmd_capacity,
    "point": _cmd_point,
    "sweep": _cmd_sweep,
    "summary": _cmd_summary,
    "figures": _cmd_figures,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigurationError, SchemaError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (NumericError, BracketError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
