"""Command-line entry point: every subcommand prints or writes one table.

Shared options may also come from a flat ``key = value`` file passed with
``--config``; flags given on the command line win over the file.
"""
from __future__ import annotations

import argparse
import configparser
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import EmptySupport, GridDegenerate, InfeasibleRadius, OutsideAlternative, SolverFailure
from .harness import (
    ExperimentSpec,
    Table,
    adaptive_power_experiment,
    asymptotics_table,
    calibrate_d_scale,
    lower_bound_diagnostic,
    null_calibration,
    rate_sweep,
    sharp_asymptotics_experiment,
    solve_table,
    svd_verify,
)
from .lattice import ModelParams
from .radon_oracle import QuadratureSpec

log = logging.getLogger("radon_minimax")


def _floats(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if x.strip()]


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


# name -> (type, default, help); every entry is also a valid config key
SHARED = {
    "p": (float, 1.0, "smoothness p"),
    "L": (float, 1.0, "ellipsoid scale L"),
    "eps": (float, 1e-3, "noise level"),
    "r": (float, 1e-3, "radius of the removed ball"),
    "alpha": (float, 0.05, "test level"),
    "trials": (int, 10_000, "Monte Carlo trials"),
    "seed": (int, 0, "master seed"),
    "normalized": (_bool, False, "drop the 1/L and 1/pi factors"),
    "format": (str, "csv", "output format: csv or json"),
    "out": (str, None, "write the table here instead of stdout"),
}


# rates on the smoothness grid are stated in normalized units
NORMALIZED_FIRST = ("adaptive", "lower-bound")


def read_config(path) -> dict:
    """Flat ``key = value`` pairs; ``#`` starts a comment line."""
    text = Path(path).read_text()
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    cp.optionxform = str  # keep ``L`` distinct from ``l``
    cp.read_string("[run]\n" + text)
    out = {}
    for key, raw in cp["run"].items():
        key = key.replace("-", "_")
        if key not in SHARED:
            raise ValueError(f"unknown config key {key!r}")
        out[key] = SHARED[key][0](raw)
    return out


def _shared_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    for name, (typ, default, text) in SHARED.items():
        flag = f"--{name}"
        if name == "normalized":
            parent.add_argument(flag, nargs="?", const=True, type=_bool, default=None, help=text)
        elif name == "format":
            parent.add_argument(flag, choices=("csv", "json"), default=None, help=text)
        else:
            parent.add_argument(flag, type=typ, default=None, help=f"{text} (default {default})")
    parent.add_argument("--config", help="flat key = value file with defaults for the options above")
    parent.add_argument("-v", "--verbose", action="store_true")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _shared_parser()
    ap = argparse.ArgumentParser(prog="radon-minimax", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[parent], help="solve the extreme problem")
    s.add_argument("--sequence", action="store_true", help="include the extreme sequence in the metadata")

    s = sub.add_parser("asymptotics", parents=[parent], help="exact lattice sums against leading order")
    s.add_argument("--p-list", type=_floats, default=None, help="comma separated p values (default --p)")
    s.add_argument("--A-list", type=_floats, default=[1e-3, 1e-4, 1e-5, 1e-6])

    s = sub.add_parser("simulate", parents=[parent], help="null calibration or sharp-asymptotics run")
    s.add_argument("--mode", choices=("sharp-asymptotics", "null-calibration"), default="sharp-asymptotics")
    s.add_argument("--u-targets", type=_floats, default=None,
                   help="retune eps so that u_eps hits each value (sharp-asymptotics only)")
    s.add_argument("--h", type=float, default=None, help="exponential-moment argument (null-calibration)")

    s = sub.add_parser("rate-sweep", parents=[parent], help="total error at r = c * eps^(4p/(4p+3))")
    s.add_argument("--c-values", type=_floats, default=[0.2, 0.35, 0.6, 1.0, 1.7, 3.0, 5.0])

    s = sub.add_parser("adaptive", parents=[parent], help="adaptive test errors over a smoothness grid")
    s.add_argument("--p-min", type=float, default=0.5)
    s.add_argument("--p-max", type=float, default=2.0)
    s.add_argument("--p-true", type=_floats, default=[0.6, 1.0, 1.8])
    s.add_argument("--D-scale", type=float, default=None, help="radius multiplier (default: calibrated)")

    s = sub.add_parser("lower-bound", parents=[parent], help="second-moment bound for the band mixture")
    s.add_argument("--p-min", type=float, default=0.5)
    s.add_argument("--p-max", type=float, default=2.0)
    s.add_argument("--d", type=float, default=1e-4)
    s.add_argument("--radius-scale", type=float, default=1.0)

    s = sub.add_parser("svd-verify", parents=[parent], help="quadrature check of the Radon SVD")
    s.add_argument("--max-degree", type=int, default=6)
    s.add_argument("--nodes", type=int, default=32, help="quadrature nodes per dimension")
    return ap


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill shared options; a flag beats the config file, which beats the built-in default."""
    conf = read_config(args.config) if args.config else {}
    for name, (_, default, _) in SHARED.items():
        if name == "normalized" and args.command in NORMALIZED_FIRST:
            default = True
        if getattr(args, name) is None:
            setattr(args, name, conf.get(name, default))
    return args


def _spec(args, mode: str, params: ModelParams | None = None) -> ExperimentSpec:
    params = params or ModelParams(p=args.p, L=args.L, normalized=args.normalized)
    return ExperimentSpec(params, args.eps, args.r, args.alpha, args.trials, args.seed, mode)


def run(args: argparse.Namespace) -> Table:
    cmd = args.command
    if cmd == "solve":
        return solve_table(_spec(args, "sharp-asymptotics"), with_sequence=args.sequence)
    if cmd == "asymptotics":
        return asymptotics_table(args.p_list or [args.p], args.A_list)
    if cmd == "simulate":
        spec = _spec(args, args.mode)
        if args.mode == "null-calibration":
            return null_calibration(spec, args.h)
        return sharp_asymptotics_experiment(spec, args.u_targets)
    if cmd == "rate-sweep":
        return rate_sweep(_spec(args, "rate-sweep"), args.c_values)
    if cmd == "adaptive":
        params = ModelParams(p=args.p_max, L=args.L, normalized=args.normalized)
        D = args.D_scale
        if D is None:
            D = calibrate_d_scale(args.eps, args.p_min, args.p_max, args.p_true, params)
            log.info("calibrated D_scale = %.6g", D)
        spec = _spec(args, "adaptive-power", params)
        tab = None
        for pt in args.p_true:
            part = adaptive_power_experiment(spec, pt, args.p_min, args.p_max, D)
            if tab is None:
                tab = part
            else:
                tab.rows.extend(part.rows)
        return tab
    if cmd == "lower-bound":
        params = ModelParams(p=args.p_max, L=args.L, normalized=args.normalized)
        _, tab = lower_bound_diagnostic(args.eps, args.p_min, args.p_max, args.d, params,
                                        detail=True, radius_scale=args.radius_scale)
        return tab
    if cmd == "svd-verify":
        return svd_verify(args.max_degree, QuadratureSpec(args.nodes, args.nodes, args.nodes))
    raise ValueError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args = resolve(args)
        text = run(args).dump(args.format)
    except (ValueError, EmptySupport, InfeasibleRadius, GridDegenerate,
            OutsideAlternative, SolverFailure, OSError) as exc:
        print(f"radon-minimax: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
