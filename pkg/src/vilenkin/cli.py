"""Command-line entry point.

`vilenkin <experiment> [options]` runs one of the experiment drivers and
writes deterministic CSV or JSON records.  The exit code is 0 exactly when
every checked invariant of the chosen experiment passes.  Two extra
subcommands, `transform` and `kernel`, expose the fast transform and the
partial-sum kernels for ad-hoc use on grid files.
"""

from __future__ import annotations

import argparse
import sys

from .group import parse_base_spec
from .harness import ExperimentConfig, emit, render_csv, render_json, run_experiment
from .kernels import dirichlet
from .transform import (
    Spectrum1D,
    Spectrum2D,
    forward,
    forward2d,
    inverse,
    inverse2d,
    load_grid,
    save_grid,
)


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--base", default="2x5", help="generator spec, e.g. 2x5 or 2,3x4")
    sp.add_argument("--depth", type=int, default=None, help="grid depth (default: base depth)")
    sp.add_argument("--p", type=float, default=0.5, help="quasi-norm exponent in (0, 1]")
    sp.add_argument("--alpha", type=float, default=1.0, help="cone aperture exponent")
    sp.add_argument("--eps", default="0.25,0.5,1.0", help="comma list of epsilon exponents")
    sp.add_argument("--samples", type=int, default=20, help="random samples per depth")
    sp.add_argument("--seed", type=int, default=0, help="RNG seed")
    sp.add_argument(
        "--weight-mode",
        choices=("cone-power", "log-weighted"),
        default="cone-power",
        help="weight family for the strong-sum functional",
    )
    sp.add_argument("--diagonal", action="store_true", help="restrict the sum to the diagonal")
    sp.add_argument(
        "--family",
        choices=("thm1b", "thm3b", "thm4b", "random-atom"),
        default="random-atom",
        help="input family for sharpness/convergence runs",
    )
    sp.add_argument("--phi", default=None, help="weight shape: 'log' or 'pow:<theta>'")
    sp.add_argument("--out", default=None, help="write records to this path")
    sp.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
    sp.add_argument("--config", default=None, help="key=value file of option overrides")
    sp.add_argument("--drift-factor", type=float, default=2.0)
    sp.add_argument("--growth-floor", type=float, default=1.5)


# expected value types of config-file / CLI options (everything else is a string)
_OPTION_TYPES = {
    "depth": int,
    "n": int,
    "samples": int,
    "seed": int,
    "p": float,
    "alpha": float,
    "drift_factor": float,
    "growth_floor": float,
    "diagonal": bool,
}


def _apply_config_file(args: argparse.Namespace, path: str) -> None:
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SystemExit(f"cannot read config file {path}: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SystemExit(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key in ("format", "fmt"):
            key = "fmt"
        if not hasattr(args, key):
            raise SystemExit(f"{path}:{lineno}: unknown option {key!r}")
        cast = _OPTION_TYPES.get(key, str)
        try:
            if cast is bool:
                setattr(args, key, value.lower() in ("1", "true", "yes"))
            else:
                setattr(args, key, cast(value))
        except ValueError as exc:
            raise SystemExit(f"{path}:{lineno}: bad value for {key!r}: {exc}")


def _parse_eps(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.split(","))


def _config_from_args(experiment: str, args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        experiment=experiment,
        base=args.base,
        depth=args.depth,
        p=args.p,
        alpha=args.alpha,
        eps=_parse_eps(args.eps),
        weight_mode=args.weight_mode,
        diagonal=args.diagonal,
        family=args.family,
        phi=args.phi,
        samples=args.samples,
        seed=args.seed,
        out=args.out,
        fmt=args.fmt,
        drift_factor=args.drift_factor,
        growth_floor=args.growth_floor,
    )


def _run_experiment_command(experiment: str, args: argparse.Namespace) -> int:
    cfg = _config_from_args(experiment, args)
    try:
        result = run_experiment(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        emit(result, cfg.fmt, args.out)
    else:
        text = render_csv(result) if cfg.fmt == "csv" else render_json(result)
        sys.stdout.write(text)
    status = "PASS" if result.passed else "FAIL"
    print(f"{experiment}: {status}", file=sys.stderr)
    return 0 if result.passed else 1


def _run_transform(args: argparse.Namespace) -> int:
    try:
        obj = load_grid(args.input)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    two_dim = obj.values.ndim == 2
    if args.direction == "forward":
        out = forward2d(obj, mode=args.mode) if two_dim else forward(obj, mode=args.mode)
    elif two_dim:
        out = inverse2d(Spectrum2D(obj.base, obj.depth, obj.values), mode=args.mode)
    else:
        out = inverse(Spectrum1D(obj.base, obj.depth, obj.values), mode=args.mode)
    save_grid(args.out, out)
    return 0


def _run_kernel(args: argparse.Namespace) -> int:
    base = parse_base_spec(args.base)
    depth = args.depth if args.depth is not None else base.depth
    try:
        kernel = dirichlet(args.n, base, depth, method=args.method)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    save_grid(args.out, kernel)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vilenkin",
        description="experiments for two-dimensional Vilenkin-Fourier analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("strong-sum", "sharpness", "convergence", "lemma1"):
        sp = sub.add_parser(name)
        _add_common(sp)

    tp = sub.add_parser("transform", help="apply the fast transform to a grid file")
    tp.add_argument("--input", required=True)
    tp.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    tp.add_argument("--mode", choices=("fast", "naive"), default="fast")
    tp.add_argument("--out", required=True)
    tp.add_argument("--config", default=None)

    kp = sub.add_parser("kernel", help="evaluate a partial-sum kernel on a grid")
    kp.add_argument("--base", default="2x5")
    kp.add_argument("--depth", type=int, default=None)
    kp.add_argument("--n", type=int, required=True)
    kp.add_argument("--method", choices=("direct", "closed"), default="closed")
    kp.add_argument("--out", required=True)
    kp.add_argument("--config", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        _apply_config_file(args, args.config)
    if args.command == "transform":
        return _run_transform(args)
    if args.command == "kernel":
        return _run_kernel(args)
    return _run_experiment_command(args.command, args)


if __name__ == "__main__":
    sys.exit(main())
