"""Command-line front end.

Exit codes: 0 when the requested work ran (a rejection is a result, not an
error), 2 for malformed input files, 3 for invalid flags or configs, 4 when a
kernel value is not finite.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__, _accel, rng
from .api import iid_test
from .bootstrap import PATHS, BootstrapConfig
from .dgp import ALL_PARAMS, MODELS, DgpSpec, generate_array
from .kernel import InputError, Kernel, KernelEvaluationError, ObservationSet
from .limits import gamma_table

EXIT_INPUT = 2
EXIT_FLAGS = 3
EXIT_NUMERIC = 4

NORMAL_METHOD = "inverse-cdf (scipy.special.ndtri) of 53-bit midpoint uniforms"

log = logging.getLogger("odsup")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text):
    try:
        return rng.check_seed(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _threads(args):
    value = args.threads if args.threads is not None else os.environ.get("ODSUP_THREADS")
    if value is None:
        return None
    try:
        value = int(value)
    except ValueError:
        raise UsageError(f"invalid thread count {value!r}") from None
    if value < 1:
        raise UsageError("thread count must be >= 1")
    return value


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_csv(path, header=False):
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2, dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if data.size == 0:
        raise InputError(f"{path} holds no observations")
    return data


def load_observations(args):
    data = read_csv(args.input, args.header)
    if args.matrix_kind is None:
        return ObservationSet.from_vectors(data), Kernel(args.kernel)
    if args.matrix_kind == "kernel":
        obs = ObservationSet.from_kernel_matrix(data)
        if args.kernel == "const":
            return obs, Kernel("const")
        return obs, Kernel("precomputed")
    obs = ObservationSet.from_distance_matrix(data)
    if args.kernel == "const":
        return obs, Kernel("const")
    return obs, Kernel("of_distance", args.kernel)


def build_report(obs, kernel, result, cfg):
    """JSON-ready report; key order and content are fixed for a given input."""
    grid = result.grid
    return {
        "version": __version__,
        "n": obs.n,
        "p": obs.p if obs.p is not None else "matrix",
        "kernel": kernel.descriptor,
        "T_n": grid.T,
        "c_alpha": result.critical_value,
        "p_value": result.p_value,
        "reject": result.reject,
        "B": cfg.B,
        "alpha": cfg.alpha,
        "seed": cfg.seed,
        "argmax_k": grid.argmax_k,
        "argmax_t": grid.argmax_t,
        "bootstrap_path": cfg.path,
        "p_value_correction": "plus-one" if cfg.plus_one else "none",
        "degenerate_bootstrap": result.bootstrap.degenerate,
        "rng_scheme": rng.RNG_SCHEME,
        "normal_method": NORMAL_METHOD,
    }


def cmd_test(args):
    _accel.set_threads(_threads(args))
    try:
        cfg = BootstrapConfig(B=args.B, alpha=args.alpha, seed=args.seed, path=args.path,
                              plus_one=args.plus_one)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    obs, kernel = load_observations(args)
    result = iid_test(obs, kernel, cfg)
    _write(json.dumps(build_report(obs, kernel, result, cfg), indent=2) + "\n", args.out)
    return 0


def cmd_simulate(args):
    params = {name: getattr(args, name) for name in ALL_PARAMS if getattr(args, name) is not None}
    try:
        spec = DgpSpec(model=args.model, n=args.n, p=args.p, params=params, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    X = generate_array(spec)
    lines = "\n".join(",".join(f"{v:.17g}" for v in row) for row in X)
    _write(lines + "\n", args.out)
    return 0


def cmd_power(args):
    from . import mc

    try:
        if args.config is not None:
            config = mc.load_config(args.config)
        else:
            config = mc.load_config(mc.preset_path("table2-full" if args.full else args.preset))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad power config: {exc}") from None
    _accel.set_threads(_threads(args))
    table = mc.run_config(config, workers=args.workers, limit=args.limit)
    _write(table.to_csv(), args.out)
    if args.markdown:
        _write(table.to_markdown(), args.markdown)
    if args.meta:
        _write(json.dumps(table.metadata, indent=2) + "\n", args.meta)
    return 0


def cmd_gamma(args):
    if args.n % args.grid:
        raise UsageError("--n must be a multiple of --grid")
    lines = ["s,t,gamma,gamma_finite_n,error"]
    for s, t, lim, fin, err in gamma_table(args.grid, args.n, args.centered):
        lines.append(f"{s:.17g},{t:.17g},{lim:.17g},{fin:.17g},{err:.6e}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def build_parser():
    parser = _Parser(prog="odsup", description="Nonparametric test of the IID hypothesis.")
    parser.add_argument("--version", action="version", version=f"odsup {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test", help="run the IID test on a CSV file")
    p.add_argument("input", help="CSV: one observation per row, or an n x n matrix")
    p.add_argument("--header", action="store_true", help="skip the first line")
    p.add_argument("--kernel", choices=("expneg", "invquartic", "const"), default="expneg",
                   help="vector kernel, or the transform applied to a distance matrix; "
                        "ignored for --matrix-kind kernel except 'const'")
    p.add_argument("--matrix-kind", choices=("kernel", "distance"), default=None)
    p.add_argument("--B", type=_positive_int, default=300)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--path", choices=PATHS, default="fast")
    p.add_argument("--plus-one", action="store_true",
                   help="report (1 + #exceed) / (B + 1) instead of the plain p-value")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="write a simulated sample as CSV")
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=5)
    for name in ALL_PARAMS:
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("power", help="Monte Carlo rejection proportions over a model grid")
    p.add_argument("config", nargs="?", default=None, help="TOML grid config")
    p.add_argument("--preset", default="table2-desk", help="shipped config name")
    p.add_argument("--full", action="store_true",
                   help="run the full n=400/800 grid with 1000 repetitions (hours)")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--limit", type=_positive_int, default=None, help="run only the first K cells")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV output (default stdout)")
    p.add_argument("--markdown", default=None)
    p.add_argument("--meta", default=None, help="JSON file for run metadata")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("gamma", help="limit covariance vs finite-n weights, as CSV")
    p.add_argument("--grid", type=_positive_int, default=20)
    p.add_argument("--n", type=_positive_int, default=1000)
    p.add_argument("--centered", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gamma)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"odsup: error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except InputError as exc:
        print(f"odsup: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KernelEvaluationError as exc:
        print(f"odsup: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
