"""Command line front end: ``proclab <experiment> [flags]``.

Every experiment takes the same flag set; irrelevant flags are simply
ignored by the runner. Reports go to --out as CSV or JSON; a human
summary goes to stdout. The ``rates`` subcommand instead prints its
sweep table as CSV on stdout (so it can be piped) and moves the summary
to stderr.

Exit codes: 0 all checked rows pass, 1 at least one fails, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError
from .experiments import EXPERIMENTS, config_from_file, make_config, run_experiment
from .rates import rates_table_text

__all__ = ["main", "build_parser"]

# literal tuple: arithmetic like 0.1 * k would drag in representation
# noise and the h column prints through repr
_H_SWEEP = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


def _grid_arg(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be t_min:t_max:count, got {text!r}")
    try:
        return (float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be t_min:t_max:count, got {text!r}") from None


def _n_list_arg(text: str):
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"n-list must be comma-separated ints, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proclab",
        description="Run a proclab experiment and write its pass/fail report.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="experiment")
    for name in EXPERIMENTS:
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--config", help="flat JSON config file; flags override its values")
        sp.add_argument("--hurst", type=float)
        sp.add_argument("--n-paths", type=int, dest="n_paths")
        sp.add_argument("--grid", type=_grid_arg, help="t_min:t_max:count")
        sp.add_argument("--seed", type=int, help="0 draws OS entropy (non-reproducible)")
        sp.add_argument("--replicates", type=int)
        sp.add_argument("--gamma", type=float)
        sp.add_argument("--rho", type=float)
        sp.add_argument("--kappa", type=float)
        sp.add_argument("--n-list", type=_n_list_arg, dest="n_list", help="e.g. 64,128,256")
        sp.add_argument("--alpha-grid", type=int, dest="alpha_grid_size")
        sp.add_argument("--out", dest="out_path", help="report file path")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--workers", type=int)
        sp.add_argument("--method", choices=("auto", "cholesky", "circulant"))
    return parser


_OVERRIDE_KEYS = (
    "hurst",
    "n_paths",
    "grid",
    "seed",
    "replicates",
    "gamma",
    "rho",
    "kappa",
    "n_list",
    "alpha_grid_size",
    "out_path",
    "format",
    "workers",
    "method",
)


def _summary(report, stream) -> None:
    for r in report.rows:
        verdict = "info" if r.passed is None else ("pass" if r.passed else "FAIL")
        bits = [f"{r.name:<36s}", f"{r.estimate:.6g}"]
        if r.std_error is not None:
            bits.append(f"se={r.std_error:.3g}")
        if r.target is not None:
            bits.append(f"target={r.target:.6g}")
        if r.tol is not None:
            bits.append(f"tol={r.tol:.3g}")
        print("  " + "  ".join(bits) + f"  [{verdict}]", file=stream)
    repro = "yes" if report.reproducible else "no"
    print(
        f"{report.experiment}: {'PASS' if report.passed else 'FAIL'}"
        f"  seed={report.seed}  reproducible={repro}  {report.seconds:.2f}s",
        file=stream,
    )
    if report.underpowered:
        print("warning: run is underpowered; enlarge n_paths before trusting it", file=stream)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    overrides = {k: getattr(ns, k) for k in _OVERRIDE_KEYS}
    try:
        if ns.config:
            cfg = config_from_file(ns.experiment, ns.config, **overrides)
        else:
            cfg = make_config(ns.experiment, **overrides)
        report = run_experiment(cfg)
    except ConfigError as exc:
        print(f"proclab: error: {exc}", file=sys.stderr)
        return 2
    if ns.experiment == "rates":
        sys.stdout.write(rates_table_text(_H_SWEEP))
        _summary(report, sys.stderr)
    else:
        _summary(report, sys.stdout)
    if cfg.out_path:
        report.write(cfg.out_path, cfg.format)
        stream = sys.stderr if ns.experiment == "rates" else sys.stdout
        print(f"wrote {cfg.out_path}", file=stream)
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
