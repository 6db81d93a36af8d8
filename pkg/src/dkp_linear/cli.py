"""Command-line front end.

Exit codes: 0 success, 1 computational or check failure, 2 usage error.
Numbers are written with 12 significant digits so that repeated runs are
byte-identical.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import checks, spectrum
from .spectrum import Parity

ROOT_TOL = spectrum.QUANTIZATION_TOL
ZETA_MATCH_RTOL = 1e-8
UNITS = "hbar=c=1; energies in units of m; lengths in units of lambda_C=1/m"


class UsageError(Exception):
    pass


class ComputationError(Exception):
    pass


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(format(v, ".12g")) if math.isfinite(v) else None
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_json_value(x) for x in v]
    return v


def render_csv(columns: dict, note: str = UNITS) -> str:
    buf = io.StringIO()
    buf.write(f"# {note}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns.keys())
    rows = zip(*[np.atleast_1d(c) if not isinstance(c, list) else c for c in columns.values()])
    for row in rows:
        w.writerow(fmt(v) for v in row)
    return buf.getvalue()


def render_json(record: dict) -> str:
    out = {k: _json_value(v) for k, v in record.items()}
    return json.dumps(out, indent=2, allow_nan=False) + "\n"


def read_csv(text: str) -> dict[str, list[str]]:
    """Parse output of ``render_csv`` back into string columns."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    cols: dict[str, list[str]] = {h: [] for h in header}
    for row in reader:
        for h, v in zip(header, row):
            cols[h].append(v)
    return cols


# -- option handling ---------------------------------------------------------


def _parity(s: str) -> Parity:
    try:
        return Parity(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parity must be 'even' or 'odd', got {s!r}")


def _sign(s: str) -> int:
    if s in ("+", "+1", "1", "plus"):
        return 1
    if s in ("-", "-1", "minus"):
        return -1
    raise argparse.ArgumentTypeError(f"sign must be + or -, got {s!r}")


def _x_max(s: str):
    if s == "auto":
        return "auto"
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("x-max must be positive or 'auto'")
    return v


def _positive_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


# dest -> (converter, default); options default to None on the command line so
# that a config file can fill whatever the flags leave unset
OPTIONS = {
    "m": (_positive_float, 1.0),
    "format": (str, None),
    "output": (str, None),
    "n": (int, None),
    "parity": (_parity, None),
    "root_index": (int, None),
    "sign": (_sign, 1),
    "zeta": (_positive_float, None),
    "lam": (_positive_float, None),
    "samples": (int, 501),
    "x_max": (_x_max, "auto"),
    "scaled": (lambda s: s.lower() in ("1", "true", "yes"), False),
    "scope": (str, "all"),
    "max_n": (int, 100),
    "workers": (int, None),
}
CONFIG_ALIASES = {"lambda": "lam", "max-n": "max_n", "root-index": "root_index", "x-max": "x_max"}


def load_config(path: str) -> dict:
    cfg = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = CONFIG_ALIASES.get(key, key)
        if key not in OPTIONS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            cfg[key] = OPTIONS[key][0](value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}")
    return cfg


def _global_flags(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    parser.add_argument("--m", type=_positive_float, help="mass (default 1)")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--output", help="write to this file instead of stdout")
    parser.add_argument("--config", help="key=value file supplying defaults for unset flags")
    return parser


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; the
    # subcommand copies are suppressed when absent so they do not clobber
    # values given before it
    common = _global_flags(argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS))
    parser = _global_flags(argparse.ArgumentParser(prog="dkp-linear", description="Quasi-exact DKP bound states in a scalar linear potential."))
    sub = parser.add_subparsers(dest="command", required=True)

    def state_args(p):
        p.add_argument("--n", type=int)
        p.add_argument("--parity", type=_parity)
        sel = p.add_mutually_exclusive_group()
        sel.add_argument("--root-index", dest="root_index", type=int)
        sel.add_argument("--zeta", type=_positive_float, help="select the root closest to this zeta")
        sel.add_argument("--lambda", dest="lam", type=_positive_float, help="select the root with zeta = m^2/lambda")
        p.add_argument("--sign", type=_sign, help="energy sign, + or -")

    p = sub.add_parser("roots", parents=[common], help="quantization roots in zeta")
    p.add_argument("--n", type=int)
    p.add_argument("--parity", type=_parity)

    p = sub.add_parser("state", parents=[common], help="energy and normalization of one state")
    state_args(p)

    p = sub.add_parser("table", parents=[common], help="sampled spinor components and currents")
    state_args(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--x-max", dest="x_max", type=_x_max)
    p.add_argument("--scaled", action="store_const", const=True, help="dimensionless output (x/lambda_C, sqrt(lambda_C) phi)")

    sub.add_parser("figure1", parents=[common], help="data of the zeta = 2 eigenfunction figure")

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--scope", choices=("all", *checks.SUITES))

    p = sub.add_parser("degeneracy", parents=[common], help="exact common-root scan of L_n and L_{n-1}")
    p.add_argument("--max-n", dest="max_n", type=int)
    p.add_argument("--workers", type=int)
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    for key, (_, default) in OPTIONS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, cfg.get(key, default))
    if args.command in ("state", "table") and args.zeta is not None and args.lam is not None:
        raise UsageError("give at most one of --zeta and --lambda")
    return args


# -- commands ----------------------------------------------------------------


def _require_state_selection(args):
    if args.n is None or args.parity is None:
        raise UsageError("--n and --parity are required")
    if args.n < 0:
        raise UsageError("--n must be nonnegative")


def _select_state(args) -> spectrum.QuasiExactState:
    _require_state_selection(args)
    roots = spectrum.zeta_roots(args.n, args.parity)
    if roots.size == 0:
        raise ComputationError(f"no {args.parity.value}-parity solutions for n={args.n}")
    if args.zeta is not None or args.lam is not None:
        target = args.zeta if args.zeta is not None else args.m**2 / args.lam
        idx = int(np.argmin(np.abs(roots - target)))
        if abs(roots[idx] - target) > ZETA_MATCH_RTOL * target:
            raise ComputationError(f"zeta = {target:.12g} is not an {args.parity.value}-parity root for n={args.n}; nearest is {roots[idx]:.12g}")
    else:
        idx = 0 if args.root_index is None else args.root_index
        if not 0 <= idx < roots.size:
            raise UsageError(f"--root-index must be in [0, {roots.size - 1}]")
    return spectrum.make_state(args.n, args.parity, idx, args.sign, args.m)


def cmd_roots(args) -> tuple[str, int]:
    if args.n is None or args.parity is None:
        raise UsageError("--n and --parity are required")
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    roots = spectrum.zeta_roots(args.n, args.parity)
    res = [spectrum.quantization_residual(args.n, args.parity, z) for z in roots]
    ok = all(r < ROOT_TOL for r in res)
    if args.format == "json":
        return render_json({"n": args.n, "parity": args.parity.value, "count": len(roots), "zeta": list(roots), "residual": res, "status": "ok" if ok else "residual-exceeded", "units": "zeta = m^2/lambda (dimensionless)"}), 0 if ok else 1
    note = f"{UNITS}; zeta = m^2/lambda; n={args.n} parity={args.parity.value}"
    if not roots.size:
        note += "; no solutions"
    text = render_csv({"index": list(range(len(roots))), "zeta": list(roots), "residual": res}, note)
    return text, 0 if ok else 1


def state_record(st: spectrum.QuasiExactState) -> dict:
    return {
        "n": st.n,
        "parity": st.parity.value,
        "root_index": st.root_index,
        "zeta": st.zeta,
        "m": st.m,
        "lambda": st.lam,
        "g": st.params.g,
        "lambda_c": st.params.lambda_c,
        "energy_sign": st.energy_sign,
        "E": st.E,
        "epsilon": st.epsilon,
        "delta": st.delta,
        "N": st.N,
        "quantization_residual": st.residual,
        "status": "ok" if st.quantized else "residual-exceeded",
        "units": UNITS,
    }


def cmd_state(args) -> tuple[str, int]:
    st = _select_state(args)
    rec = state_record(st)
    code = 0 if st.quantized else 1
    if args.format == "csv":
        units = rec.pop("units")
        return render_csv({k: [v] for k, v in rec.items()}, units), code
    return render_json(rec), code


def cmd_table(args) -> tuple[str, int]:
    st = _select_state(args)
    if args.samples < 3 or args.samples % 2 == 0:
        raise UsageError("--samples must be odd and >= 3")
    tab = spectrum.eigenfunction_table(st, args.x_max, args.samples)
    if args.scaled:
        tab = tab.dimensionless()
        cols = {"x_over_lambdaC": tab.x, "phi_scaled": tab.phi, "phi2_scaled": tab.phi2, "phi3_im_scaled": tab.phi3_im, "J0_scaled": tab.J0, "J1_scaled": tab.J1}
    else:
        cols = {"x": tab.x, "phi": tab.phi, "phi2": tab.phi2, "phi3_im": tab.phi3_im, "J0": tab.J0, "J1": tab.J1}
    note = f"{UNITS}; n={st.n} parity={st.parity.value} zeta={fmt(st.zeta)} E={fmt(st.E)} N={fmt(st.N)}; Psi4=Psi5=0 (spin-0), Psi8=0 (spin-1)"
    if args.format == "json":
        return render_json({**{k: list(v) for k, v in cols.items()}, "units": note}), 0
    return render_csv({k: list(v) for k, v in cols.items()}, note), 0


FIGURE1_SAMPLES = 601
FIGURE1_RANGE = 6.0


def figure1_columns() -> dict[str, np.ndarray]:
    """zeta = 2: n = 0 even and n = 1 odd, as sqrt(lambda_C) phi against x/lambda_C."""
    cols = {}
    for n, parity in ((0, "even"), (1, "odd")):
        st = spectrum.make_state(n, parity)
        tab = spectrum.eigenfunction_table(st, FIGURE1_RANGE * st.params.lambda_c, FIGURE1_SAMPLES).dimensionless()
        cols.setdefault("x_over_lambdaC", tab.x)
        cols[f"phi_n{n}_scaled"] = tab.phi
    return cols


def cmd_figure1(args) -> tuple[str, int]:
    cols = figure1_columns()
    note = "zeta=2; ordinate sqrt(lambda_C)*phi, abscissa x/lambda_C; n=0 even, n=1 odd"
    if args.format == "json":
        return render_json({**{k: list(v) for k, v in cols.items()}, "units": note}), 0
    return render_csv({k: list(v) for k, v in cols.items()}, note), 0


def cmd_verify(args) -> tuple[str, int]:
    results = checks.run(args.scope)
    failed = [c for c in results if not c.passed]
    rec = {"scope": args.scope, "status": "pass" if not failed else "fail", "checks": len(results), "failed": len(failed)}
    for c in results:
        rec[c.name] = c.value
        rec[f"{c.name}_pass"] = c.passed
    if args.format == "csv":
        return render_csv({"check": [c.name for c in results], "value": [c.value for c in results], "threshold": [c.threshold for c in results], "passed": [c.passed for c in results]}, f"verify scope={args.scope} status={rec['status']}"), 0 if not failed else 1
    return render_json(rec), 0 if not failed else 1


def cmd_degeneracy(args) -> tuple[str, int]:
    if not 1 <= args.max_n <= 100:
        raise UsageError("--max-n must be in [1, 100]")
    entries = spectrum.degeneracy_scan(args.max_n, args.workers)
    ok = all(e.nonzero for e in entries)
    cols = {
        "n": [e.n for e in entries],
        "resultant_nonzero": [e.nonzero for e in entries],
        "resultant_sign": [(e.resultant > 0) - (e.resultant < 0) for e in entries],
        "resultant_bits": [e.resultant.bit_length() for e in entries],
        "min_root_separation": [e.min_separation if math.isfinite(e.min_separation) else -1.0 for e in entries],
    }
    note = f"common-root scan of L_n^(1), L_(n-1)^(1); min_root_separation=-1 when L_(n-1) has no zeros; verdict={'no two-fold degeneracy' if ok else 'common root found'}"
    if args.format == "json":
        return render_json({**cols, "status": "ok" if ok else "degenerate", "verdict": note}), 0 if ok else 1
    return render_csv(cols, note), 0 if ok else 1


COMMANDS = {
    "roots": cmd_roots,
    "state": cmd_state,
    "table": cmd_table,
    "figure1": cmd_figure1,
    "verify": cmd_verify,
    "degeneracy": cmd_degeneracy,
}
DEFAULT_FORMAT = {"state": "json", "verify": "json"}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args = resolve(args)
        args.format = args.format or DEFAULT_FORMAT.get(args.command, "csv")
        text, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"dkp-linear: error: {exc}", file=sys.stderr)
        return 2
    except (ComputationError, ArithmeticError, ValueError) as exc:
        print(f"dkp-linear: {exc}", file=sys.stderr)
        return 1
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"dkp-linear: cannot write output: {exc}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
