#!/usr/bin/env python3
"""Run the full reproduction suite: all experiments, figure slices, summary.

Writes one CSV per experiment plus a combined ``all.csv`` under the output
directory, slices the combined CSV into fig*.csv files, and prints the
headline-scalar summary.  ``--quick`` shrinks every grid for a fast smoke run.
"""

import argparse
import sys
import time
from pathlib import Path

from weakfield.experiments import (
    EXPERIMENTS,
    SweepConfig,
    emit_csv,
    run_experiment,
    summarize,
    write_figure_slices,
)

QUICK_OVERRIDES = {
    "baselines": dict(n_s_points=21),
    "single_quadrature": dict(n_s_points=9, m_list=(1, 5)),
    "photon_starved": dict(n_s_points=7, m_list=(1, 5)),
    "double_quadrature": dict(n_s_points=9, m_list=(1, 5)),
    "gains": dict(n_s_points=9, m_list=(5,)),
    "ngm": dict(n_s_points=7, m_list=(5,)),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=Path, default=Path("results"))
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--quick", action="store_true", help="small grids for a smoke run")
    parser.add_argument(
        "--experiments", nargs="*", default=list(EXPERIMENTS), choices=EXPERIMENTS
    )
    args = parser.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    all_rows = []
    for experiment in args.experiments:
        overrides = dict(QUICK_OVERRIDES.get(experiment, {})) if args.quick else {}
        overrides["threads"] = args.threads
        config = SweepConfig.with_defaults(experiment, **overrides)
        started = time.perf_counter()
        rows = run_experiment(config)
        elapsed = time.perf_counter() - started
        path = args.outdir / f"{experiment}.csv"
        emit_csv(rows, path)
        print(f"{experiment}: {len(rows)} rows in {elapsed:.1f}s -> {path}")
        all_rows.extend(rows)

    combined = args.outdir / "all.csv"
    emit_csv(all_rows, combined)
    print(f"combined -> {combined}")

    slices_dir = args.outdir / "figures"
    written = write_figure_slices(all_rows, slices_dir)
    print(f"figure slices -> {slices_dir} ({', '.join(written)})")

    print("\n=== summary ===")
    print(summarize(all_rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
