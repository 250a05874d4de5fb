"""Scenario execution front end.

    wisebeam run   --config desk.toml --method wise --out results/
    wisebeam sweep --config desk.toml --deltas 1.4142 0.9 0.7 --out sweep/

Every run directory receives a manifest, the iteration history, beampattern,
spectrum, and correlation tables, and a metrics JSON.  Exit codes: 0 the run
converged, 2 the iteration cap was hit, 3 the scenario is infeasible, 1 for
bad arguments or an invalid scenario file.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import baselines, scenario as scen, spatial, spectral, wise
from .metrics import correlation_level_db

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MAX_ITERS = 2
EXIT_INFEASIBLE = 3


def _load_scenario(path: str, seed: int, delta: float | None = None):
    text = Path(path).read_text()
    s = scen.parse_scenario(text)
    if s.similarity.kind == "random":
        # bare "random" references draw from the run seed
        text = text.replace('reference = "random"', f'reference = "random:{seed}"')
        s = scen.parse_scenario(text)
    if delta is not None:
        s = s.with_delta(delta)
    return s


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _emit_artifacts(outdir: Path, s, result, method: str, seed: int, started: float):
    outdir.mkdir(parents=True, exist_ok=True)
    ams = spatial.build_angle_matrices(s)
    bins = spectral.stopband_bins(s.n, s.mask.stopbands)
    grid = scen.angle_grid(s.angles.grid_step_deg)

    wise.write_history_csv(result, outdir / "history.csv")
    _write_csv(
        outdir / "beampattern.csv",
        "theta_deg,power_linear,power_db",
        spatial.beampattern_table(result.waveform, grid, s.array.spacing_ratio),
    )
    _write_csv(
        outdir / "spectrum.csv",
        "antenna,bin,normalized_frequency,magnitude,magnitude_db,in_stopband,gamma",
        spectral.spectrum_table(result.waveform, bins, s.mask.mask_level),
    )
    tables, _ = correlation_level_db(result.waveform)
    corr_rows = []
    n = s.n
    for (m1, m2), levels in sorted(tables.items()):
        for i, level in enumerate(levels):
            corr_rows.append((m1, m2, i - (n - 1), float(level)))
    _write_csv(outdir / "correlation.csv", "m1,m2,lag,level_db", corr_rows)

    metrics = result.metrics.to_dict()
    metrics.update(
        {
            "converged": result.converged,
            "termination_reason": result.reason,
            "iterations": len(result.history) - 1,
            "projection_delta": result.projection_delta,
        }
    )
    for key, value in result.extras.items():
        metrics[key] = value
    with open(outdir / "metrics.json", "w") as fh:
        json.dump(metrics, fh, indent=2, sort_keys=True)
        fh.write("\n")

    artifacts = ["history.csv", "beampattern.csv", "spectrum.csv", "correlation.csv", "metrics.json"]
    manifest = {
        "scenario": scen.scenario_snapshot(s),
        "method": method,
        "output_dir": str(outdir),
        "seed": seed,
        "started_unix": started,
        "finished_unix": time.time(),
        "checksums": {name: _sha256(outdir / name) for name in artifacts},
    }
    with open(outdir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return metrics


def _execute(s, method: str):
    if method == "sdr":
        return baselines.sdr_round(s)
    return wise.run(s)


def _exit_code(result) -> int:
    if result.converged:
        return EXIT_OK
    if result.reason == "max_iters":
        return EXIT_MAX_ITERS
    return EXIT_INFEASIBLE


def _run_single(config_path: str, method: str, outdir: str, seed: int, delta: float | None):
    """Worker for both cmd_run and sweep entries (picklable for --jobs)."""
    started = time.time()
    s = _load_scenario(config_path, seed, delta)
    try:
        result = _execute(s, method)
    except wise.InfeasibleScenario:
        Path(outdir).mkdir(parents=True, exist_ok=True)
        with open(Path(outdir) / "metrics.json", "w") as fh:
            json.dump({"converged": False, "termination_reason": "infeasible"}, fh, indent=2)
            fh.write("\n")
        return EXIT_INFEASIBLE, None
    metrics = _emit_artifacts(Path(outdir), s, result, method, seed, started)
    return _exit_code(result), metrics


def cmd_run(args) -> int:
    if not Path(args.config).is_file():
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, _ = _run_single(args.config, args.method, args.out, args.seed, None)
    except scen.ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


def cmd_sweep_delta(args) -> int:
    if not Path(args.config).is_file():
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return EXIT_USAGE
    try:
        scen.parse_scenario(Path(args.config).read_text())
    except scen.ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out = Path(args.out)
    jobs = []
    for delta in args.deltas:
        subdir = out / f"delta_{delta:g}"
        jobs.append((args.config, args.method, str(subdir), args.seed, float(delta)))

    results = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_single_star, jobs))
    else:
        results = [_run_single(*job) for job in jobs]

    rows = []
    for delta, (code, metrics) in zip(args.deltas, results):
        if metrics is None:
            continue
        rows.append(
            (
                float(delta),
                metrics["islr_db"],
                metrics["cross_peak_db"],
                metrics["similarity_distance"],
                metrics["mask_excess"],
            )
        )
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "trend.csv", "delta,islr_db,peak_cross_db,similarity_distance,mask_excess", rows)

    codes = [code for code, _ in results]
    if EXIT_INFEASIBLE in codes:
        return EXIT_INFEASIBLE
    if EXIT_MAX_ITERS in codes:
        return EXIT_MAX_ITERS
    return EXIT_OK


def _run_single_star(job):
    return _run_single(*job)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wisebeam", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one scenario")
    run_p.add_argument("--config", required=True, help="scenario TOML file")
    run_p.add_argument("--method", choices=("wise", "sdr"), default="wise")
    run_p.add_argument("--out", default="results", help="output directory")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--jobs", type=int, default=1, help="accepted for symmetry; run is single")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="run the scenario across similarity radii")
    sweep_p.add_argument("--config", required=True)
    sweep_p.add_argument("--method", choices=("wise", "sdr"), default="wise")
    sweep_p.add_argument("--out", default="sweep", help="output directory")
    sweep_p.add_argument("--seed", type=int, default=0)
    sweep_p.add_argument("--jobs", type=int, default=1)
    sweep_p.add_argument("--deltas", type=float, nargs="+", required=True)
    sweep_p.set_defaults(func=cmd_sweep_delta)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
