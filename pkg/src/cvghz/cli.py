"""Command-line front end: deterministic CSV sweeps and the oracle self-check.

Examples::

    cvghz tangle --ops sub:A,B --r 0:1:200
    cvghz mk --ops add:A,B,C --r 0.01:2:200 --threads 4
    cvghz thresholds --task fidelity --gain unit --ops sub:A,C
    cvghz contour --ops sub:A,B,C --r 0.3 --alpha 1 --grid -4:4:0.05 --out contour.csv
"""

from __future__ import annotations

import argparse
import csv
import io
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .entanglement import tangle_of_state
from .fock import FockTruncationError
from .ghz import (
    DEFAULT_GAIN,
    DEFAULT_TRANSMITTANCE,
    MODE_LABELS,
    GHZParams,
    parse_scheme,
    photon_operated_ghz,
    scheme_label,
)
from .nonlocality import NoViolationError, b3_curve, max_b3_over_r, threshold_efficiency
from .oracle import DEFAULT_SEED, run_oracle_suite
from .phasespace import ZeroProbabilityError
from .teleportation import NoCrossingError, epr_sum, fidelity_curve, output_wigner, threshold_squeezing

EXIT_FLAGS = 2
EXIT_PHYSICS = 3

FIDELITY_SCHEMES = ("none",) + tuple(
    f"{kind}:{modes}" for kind in ("sub", "add") for modes in ("A", "B", "C", "A,B", "B,C", "A,C", "A,B,C")
)
MK_SCHEMES = ("none", "sub:A", "sub:A,B", "sub:A,B,C", "add:A", "add:A,B", "add:A,B,C")


def sweep_range(text):
    """``min:max:steps`` (inclusive, ``steps >= 2``) or a single value."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"expected min:max:steps or a number, got {text!r}")
    if len(parts) != 3 or not lo < hi or steps < 2:
        raise argparse.ArgumentTypeError(f"need min < max and steps >= 2, got {text!r}")
    return np.linspace(lo, hi, steps)


def grid_range(text):
    """``min:max:step`` with a positive step."""
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected min:max:step, got {text!r}")
    if not lo < hi or step <= 0:
        raise argparse.ArgumentTypeError(f"need min < max and step > 0, got {text!r}")
    return np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)


def scheme_text(text):
    try:
        parse_scheme(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))
    return text


def mode_pair(text):
    labels = [s.strip().upper() for s in text.split(",")]
    if len(labels) != 2 or any(s not in MODE_LABELS for s in labels) or labels[0] == labels[1]:
        raise argparse.ArgumentTypeError(f"pair must be two distinct modes from {MODE_LABELS}, got {text!r}")
    return tuple(MODE_LABELS.index(s) for s in labels)


def gain_value(text):
    if text in ("unit", "optimal"):
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"gain must be unit, optimal or a number, got {text!r}")


def complex_value(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def fraction(text):
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1], got {text!r}")
    return value


def transmittance(text):
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"transmittance must lie in (0, 1), got {text!r}")
    return value


def positive(text):
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _add_common(p, r_default):
    p.add_argument("--ops", type=scheme_text, default="none", help="photon operations, e.g. sub:A,C or add:B (default none)")
    p.add_argument("--r", type=sweep_range, default=sweep_range(r_default), help=f"squeezing sweep min:max:steps (default {r_default})")
    p.add_argument("--t", type=transmittance, default=DEFAULT_TRANSMITTANCE, help="subtraction splitter transmittance")
    p.add_argument("--s", type=positive, default=DEFAULT_GAIN, help="addition amplifier gain parameter")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--threads", type=int, default=1, help="worker threads (output is unchanged)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized checks")
    p.add_argument("--config", help="key=value file supplying flag defaults")


def build_parser():
    parser = argparse.ArgumentParser(prog="cvghz", description="Photon-operated CV GHZ states: sweeps as CSV.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ghz-cov", help="GHZ covariance entries a, b, c, d versus r")
    _add_common(p, "0:1:11")

    p = sub.add_parser("tangle", help="Gaussian tangle versus r")
    _add_common(p, "0.01:1:100")

    p = sub.add_parser("mk", help="maximized |B3| versus r")
    _add_common(p, "0.01:2:200")
    p.add_argument("--eta", type=fraction, default=1.0, help="detector efficiency")

    p = sub.add_parser("mk-noise", help="|B3| maximized over r and x versus detector efficiency")
    _add_common(p, "0.005:2:200")
    p.add_argument("--eta", type=sweep_range, default=sweep_range("0.6:1:9"), help="efficiency sweep min:max:steps")

    p = sub.add_parser("fidelity", help="teleportation fidelity versus r")
    _add_common(p, "0.01:1:100")
    p.add_argument("--gain", type=gain_value, default="unit", help="unit, optimal or a fixed number")

    p = sub.add_parser("epr", help="EPR-type variance sum versus r")
    _add_common(p, "0.01:1:100")
    p.add_argument("--pair", type=mode_pair, default=(0, 2), help="mode pair for the x difference (default A,C)")

    p = sub.add_parser("contour", help="teleported output Wigner function on a grid")
    _add_common(p, "0.3")
    p.add_argument("--gain", type=gain_value, default="unit")
    p.add_argument("--alpha", type=complex_value, default=1.0, help="coherent input amplitude, e.g. 1 or 1+0.5j")
    p.add_argument("--grid", type=grid_range, default=grid_range("-4:4:0.05"), help="min:max:step for both x and p")

    p = sub.add_parser("thresholds", help="threshold squeezing or efficiency per scheme")
    _add_common(p, "0.001:2:400")
    p.add_argument("--task", choices=("fidelity", "mk-noise"), default="fidelity")
    p.add_argument("--gain", choices=("unit", "optimal"), default="unit")
    p.add_argument("--all", action="store_true", help="every standard scheme (ignores --ops)")

    p = sub.add_parser("oracle-check", help="Fock-space cross-check of the phase-space results")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--config")
    return parser


def read_config(path):
    """Turn ``key = value`` lines into flag tokens (``#`` starts a comment)."""
    tokens = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key = key.strip().replace("_", "-")
            value = value.strip()
            if value.lower() == "true":
                tokens.append(f"--{key}")
            else:
                tokens.append(f"--{key}={value}")
    return tokens


def expand_config(argv, commands):
    """Insert config-file tokens right after the subcommand so explicit flags win."""
    argv = list(argv)
    path = None
    for k, tok in enumerate(argv):
        if tok == "--config" and k + 1 < len(argv):
            path = argv[k + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return argv
    cmd = next((k for k, tok in enumerate(argv) if tok in commands), None)
    if cmd is None:
        return argv
    return argv[:cmd + 1] + read_config(path) + argv[cmd + 1:]


VALUE_FLAGS = ("--r", "--grid", "--eta", "--alpha", "--gain", "--s", "--t")
_NEGATIVE = re.compile(r"^-[\d.]")


def glue_negative_values(argv):
    """Rewrite ``--grid -4:4:0.05`` as ``--grid=-4:4:0.05`` so argparse does not see a flag."""
    out, k = [], 0
    while k < len(argv):
        tok = argv[k]
        if tok in VALUE_FLAGS and k + 1 < len(argv) and _NEGATIVE.match(argv[k + 1]):
            out.append(f"{tok}={argv[k + 1]}")
            k += 2
        else:
            out.append(tok)
            k += 1
    return out


def format_value(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.9g" % (float(v) + 0.0)  # + 0.0 turns -0.0 into 0.0


def write_csv(header, rows, out=None):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def parallel_map(fn, items, threads):
    """Ordered map; the thread count never changes the result order."""
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def nan_on_zero(fn, width):
    """Wrap a sweep-point function so zero-probability points become ``nan`` rows."""
    def wrapped(x):
        try:
            return fn(x)
        except ZeroProbabilityError:
            return (np.nan,) * width
    return wrapped


def _ops(args, text=None):
    return parse_scheme(args.ops if text is None else text, transmittance=args.t, gain=args.s)


def cmd_ghz_cov(args):
    rows = []
    for r in args.r:
        a, b, c, d = GHZParams.biased(r).entries()
        rows.append((r, a, b, c, d))
    return ["r", "a", "b", "c", "d"], rows


def cmd_tangle(args):
    ops = _ops(args)
    point = nan_on_zero(lambda r: (tangle_of_state(photon_operated_ghz(r, ops)),), 1)
    values = parallel_map(point, args.r, args.threads)
    return ["r", "tangle"], [(r, *v) for r, v in zip(args.r, values)]


def cmd_mk(args):
    ops = _ops(args)
    rows = parallel_map(lambda r: b3_curve(ops, [r], args.eta)[0], args.r, args.threads)
    return ["r", "x", "b3"], rows


def cmd_mk_noise(args):
    ops = _ops(args)
    r_range = (float(args.r[0]), float(args.r[-1]))

    def point(eta):
        return max_b3_over_r(ops, eta, r_range=r_range, n_r=len(args.r))

    values = parallel_map(point, args.eta, args.threads)
    return ["eta", "r", "x", "b3"], [(eta, *v) for eta, v in zip(args.eta, values)]


def cmd_fidelity(args):
    ops = _ops(args)
    point = nan_on_zero(lambda r: fidelity_curve(ops, r, args.gain), 2)
    values = parallel_map(point, args.r, args.threads)
    return ["r", "g", "fidelity"], [(r, *v) for r, v in zip(args.r, values)]


def cmd_epr(args):
    ops = _ops(args)
    point = nan_on_zero(lambda r: (epr_sum(photon_operated_ghz(r, ops), args.pair),), 1)
    values = parallel_map(point, args.r, args.threads)
    return ["r", "epr"], [(r, *v) for r, v in zip(args.r, values)]


def cmd_contour(args):
    if len(args.r) != 1:
        raise argparse.ArgumentTypeError("contour takes a single --r value")
    state = photon_operated_ghz(args.r[0], _ops(args))
    if args.gain == "optimal":
        from .teleportation import optimal_gain
        g = optimal_gain(state)[0]
    else:
        g = 1.0 if args.gain == "unit" else args.gain
    xs = ps = args.grid
    w = output_wigner(state, g, args.alpha, xs, ps)
    rows = [(x, p, w[i, j]) for i, x in enumerate(xs) for j, p in enumerate(ps)]
    return ["x", "p", "W"], rows


def cmd_thresholds(args):
    if args.all:
        schemes = FIDELITY_SCHEMES if args.task == "fidelity" else MK_SCHEMES
    else:
        schemes = (args.ops,)
    r_range, n_grid = (float(args.r[0]), float(args.r[-1])), len(args.r)

    def point(text):
        ops = _ops(args, text)
        try:
            if args.task == "fidelity":
                return threshold_squeezing(ops, args.gain, r_range=r_range, n_grid=n_grid)
            return threshold_efficiency(ops)
        except (NoCrossingError, NoViolationError):
            if args.all:
                return np.nan
            raise

    values = parallel_map(point, schemes, args.threads)
    label = "r_threshold" if args.task == "fidelity" else "eta_threshold"
    gain = args.gain if args.task == "fidelity" else ""
    rows = [(scheme_label(_ops(args, s)), args.task, gain, v) for s, v in zip(schemes, values)]
    return ["scheme", "task", "gain", label], rows


def cmd_oracle_check(args):
    checks = run_oracle_suite(threads=args.threads, seed=args.seed)
    rows = [(c.name, c.error, c.tol, c.passed) for c in checks]
    return ["check", "error", "tol", "passed"], rows


COMMANDS = {
    "ghz-cov": cmd_ghz_cov,
    "tangle": cmd_tangle,
    "mk": cmd_mk,
    "mk-noise": cmd_mk_noise,
    "fidelity": cmd_fidelity,
    "epr": cmd_epr,
    "contour": cmd_contour,
    "thresholds": cmd_thresholds,
    "oracle-check": cmd_oracle_check,
}


def run(argv=None):
    """Parse ``argv``, emit CSV and return the exit code."""
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        argv = glue_negative_values(expand_config(argv, COMMANDS))
    except (OSError, ValueError) as err:
        print(f"cvghz: error: {err}", file=sys.stderr)
        return EXIT_FLAGS
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return int(stop.code or 0)
    if getattr(args, "threads", 1) < 1:
        print("cvghz: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_FLAGS
    try:
        header, rows = COMMANDS[args.command](args)
    except argparse.ArgumentTypeError as err:
        print(f"cvghz: error: {err}", file=sys.stderr)
        return EXIT_FLAGS
    except (ZeroProbabilityError, NoCrossingError, NoViolationError, FockTruncationError,
            np.linalg.LinAlgError, ValueError) as err:
        print(f"cvghz: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_PHYSICS
    write_csv(header, rows, args.out)
    if args.command == "oracle-check" and not all(row[-1] for row in rows):
        return 1
    return 0


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
