"""Command-line entry point: ``topotrack {synth,track,batch,gridsearch,plot}``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 batch solver
did not converge (result files are still written).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import experiments, plotting
from .config import ConfigError, ExperimentConfig, load_config
from .io import DataError
from .synth import GenerationError

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NOT_CONVERGED = 0, 2, 3, 4

log = logging.getLogger("topotrack")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topotrack",
                                     description="Online graph topology tracking from smooth signals.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML experiment configuration")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("--out", type=Path, help="output directory (overrides output_dir)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="format of result tables (default: csv)")
    common.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("synth", parents=[common], help="track a generated scenario, compare methods")
    sub.add_parser("track", parents=[common], help="track a recorded signal file")
    sub.add_parser("batch", parents=[common], help="solve the batch problem on a file")
    sub.add_parser("gridsearch", parents=[common], help="tune alpha and beta by F-measure")
    sub.add_parser("plot", parents=[common], help="re-render figures from result tables in --out")
    return parser


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        cfg = cfg.with_seed(args.seed)
    return cfg


def replot(out_dir: Path) -> list[Path]:
    """Regenerate every figure whose source table exists in ``out_dir``."""
    out_dir = Path(out_dir)
    made = []
    for suffix in ("csv", "json"):
        records = out_dir / f"records.{suffix}"
        if records.exists():
            switches = _switch_times(out_dir)
            plotting.plot_tracking_error(records, out_dir / "error.svg", switches)
            made.append(out_dir / "error.svg")
        weights = out_dir / f"weights.{suffix}"
        if weights.exists():
            plotting.plot_weight_evolution(weights, out_dir / "weights.svg")
            made.append(out_dir / "weights.svg")
    for edges in sorted(out_dir.glob("snapshot_t*_edges.csv")):
        stem = edges.name[: -len("_edges.csv")]
        cent = out_dir / f"{stem}_centrality.csv"
        if cent.exists():
            svg = out_dir / f"{stem}.svg"
            plotting.plot_graph_snapshot(edges, cent, svg, title=f"t = {stem[len('snapshot_t'):]}")
            made.append(svg)
    return made


def _switch_times(out_dir: Path):
    summary = out_dir / "summary.json"
    if not summary.exists():
        return ()
    with open(summary) as fh:
        segments = json.load(fh).get("segments", [])
    return tuple(seg["first"] - 1 for seg in segments[1:])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _load(args)
        out = args.out or cfg.output_dir
        if args.command == "synth":
            res = experiments.run_synth(cfg, out, args.format)
            for method, errs in res.errors.items():
                print(f"{method}: final tracking error {errs[-1]:.4g}")
        elif args.command == "track":
            res = experiments.run_track(cfg, out, args.format)
            print(f"tracked {res.total_weight.size} samples, {len(res.snapshots)} snapshots")
        elif args.command == "batch":
            report = experiments.run_batch(cfg, out)
            status = "converged" if report.converged else "did NOT converge"
            print(f"batch solve {status} after {report.iterations} iterations")
            if not report.converged:
                return EXIT_NOT_CONVERGED
        elif args.command == "gridsearch":
            best, _ = experiments.run_gridsearch(cfg, out, args.format)
            print(f"best alpha={best.alpha:g} beta={best.beta:g} (F={best.score:.4f})")
        elif args.command == "plot":
            made = replot(out)
            if not made:
                raise DataError(f"{out}: no result tables to plot")
            for path in made:
                print(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GenerationError as exc:
        print(f"config error: scenario cannot be generated: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
