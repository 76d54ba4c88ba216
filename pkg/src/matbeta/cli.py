"""Command line front end.

    matbeta pvalue --sh SH.csv --se SE.csv --nu-h 3 --nu-e 24
    matbeta fc --fc FC.csv --nu-h 5 --nu-e 42
    matbeta model --y Y.csv --x X.csv --c C.csv
    matbeta reproduce --example 2AB
    matbeta mc --m 2 --nu-h 3 --nu-e 24 --nabla FC.csv --n 200000 --seed 1

Exit status: 0 retain, 3 reject, 2 no usable expression / not estimable,
1 bad input.
"""
import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__, symmat
from .errors import AllDiverged, MatBetaError, NotEstimable
from .fixtures import EXAMPLES
from .hyper import SeriesControl
from .manova import HypothesisSpec, LinearModel, SSMatrices, fc_p_value, matrix_p_value, sums_of_squares
from .mc import RNG_ALGORITHM, McConfig, estimate_probs

SCHEMA_VERSION = "1.0"
SYM_TOL = 1e-9
EXIT_RETAIN, EXIT_INPUT, EXIT_DIVERGED, EXIT_REJECT = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- matrix files


def read_matrix(path, symmetric=False):
    """CSV (one row per line) or JSON ({"dim": m, "data": [...]}, or a nested list)."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        if path.endswith(".json") or text.lstrip().startswith(("{", "[")):
            A = _from_json(json.loads(text))
        else:
            rows = [r for r in csv.reader(text.splitlines()) if r and any(c.strip() for c in r)]
            A = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: cannot parse matrix ({exc})") from None
    if A.ndim != 2 or A.size == 0 or not np.all(np.isfinite(A)):
        raise InputError(f"{path}: expected a non-empty rectangular matrix of finite numbers")
    if symmetric:
        if A.shape[0] != A.shape[1]:
            raise InputError(f"{path}: expected a square matrix, got {A.shape}")
        if np.max(np.abs(A - A.T)) > SYM_TOL * max(1.0, symmat.maxabs(A)):
            raise InputError(f"{path}: matrix is not symmetric")
        A = symmat.symmetrize(A)
    return A


def _from_json(obj):
    if isinstance(obj, list):
        return np.array(obj, dtype=float)
    data = np.array(obj["data"], dtype=float)
    if "dim" in obj:
        m = int(obj["dim"])
        return data.reshape(m, m)
    if "rows" in obj:
        return data.reshape(int(obj["rows"]), int(obj["cols"]))
    return data


# ---------------------------------------------------------------- reports


def _num(x):
    if x is None or isinstance(x, bool):
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if "." not in text and "e" not in text and "inf" not in text:
        text += ".0"
    return text


def dumps(obj, indent=2, _level=0):
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):  # enums
        return json.dumps(obj.value)
    return _num(obj)


def _settings(ctrl):
    return {
        "max_degree": ctrl.max_degree,
        "rel_tol": ctrl.rel_tol,
        "stall_window": ctrl.stall_window,
        "divergence_window": ctrl.divergence_window,
        "dim_caps": ctrl.dim_caps,
    }


def _expressions(prob):
    if prob is None:
        return {}
    out = {}
    for name, o in prob.outcomes.items():
        out[name] = {
            "status": o.status.value,
            "series_status": o.series_status.value,
            "p_value": o.value if o.usable else None,
            "raw": o.raw,
            "degree": o.degree_used,
            "tail_estimate": o.tail_estimate,
            "rounding_error": o.rounding_error,
            "radius": o.radius,
            "note": o.note,
        }
    return out


def build_report(command, inputs, report, ctrl, alpha):
    prob = report.prob
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "dimension": report.m,
        "nu_h": report.nu_h,
        "nu_e": report.nu_e,
        "beta": report.beta,
        "reduced_parameters": list(report.reduced),
        "eigenvalues": report.eigenvalues,
        "thetas": report.thetas,
        "s": report.s,
        "statistics": report.statistics,
        "expressions": _expressions(prob),
        "p_value": report.p_value,
        "raw_p_value": prob.raw_consensus if prob else report.p_value,
        "agreement_spread": prob.agreement_spread if prob else 0.0,
        "chosen_expressions": prob.chosen_expressions if prob else [],
        "truncated_only": prob.truncated_only if prob else False,
        "tail_estimate_is_heuristic": True,
        "alpha": alpha,
        "decision": "Reject" if report.p_value < alpha else "Retain",
        "decisions": {f"{lvl:g}": ("Reject" if rej else "Retain") for lvl, rej in report.decisions.items()},
        "kind_i_check": report.kind_i_check,
        "settings": _settings(ctrl),
    }


def format_table(doc):
    lines = [f"{doc['command']}: m={doc['dimension']} nu_H={doc['nu_h']} nu_E={doc['nu_e']} beta={doc['beta']:g}"]
    lines.append("eigenvalues: " + ", ".join(f"{v:.7g}" for v in doc["eigenvalues"]))
    for k, v in doc["statistics"].items():
        lines.append(f"  {k:<16} {'absent' if v is None else format(v, '.7g')}")
    for name, e in doc["expressions"].items():
        lines.append(f"  {name:<7} {e['status']:<10} {_fmt(e['p_value'])}  degree {e['degree']}  {e['note']}")
    lines.append(f"p-value {_fmt(doc['p_value'])} (spread {_fmt(doc['agreement_spread'])}): "
                 f"{doc['decision']} at alpha={doc['alpha']:g}")
    return "\n".join(lines)


def _fmt(x):
    return "-" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.10g}"


# ---------------------------------------------------------------- commands


def _ctrl(args):
    env = os.environ.get("MATBETA_MAX_DEGREE")
    max_degree = args.max_degree
    if max_degree is None:
        try:
            max_degree = int(env) if env else 200
        except ValueError:
            raise InputError(f"MATBETA_MAX_DEGREE must be an integer, got {env!r}") from None
    try:
        return SeriesControl(max_degree=max_degree, rel_tol=args.tol, dim_caps=not args.full_depth)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(doc, args):
    print(format_table(doc) if args.table else dumps(doc))
    return EXIT_REJECT if doc["decision"] == "Reject" else EXIT_RETAIN


def cmd_pvalue(args):
    ctrl = _ctrl(args)
    S_H = read_matrix(args.sh, symmetric=True)
    S_E = read_matrix(args.se, symmetric=True)
    report = matrix_p_value(SSMatrices(S_H, S_E, args.nu_h, args.nu_e), args.beta, ctrl)
    inputs = {"S_H": S_H.tolist(), "S_E": S_E.tolist()}
    return _emit(build_report("pvalue", inputs, report, ctrl, args.alpha), args)


def cmd_fc(args):
    ctrl = _ctrl(args)
    fc = read_matrix(args.fc, symmetric=True)
    report = fc_p_value(fc, args.nu_h, args.nu_e, args.beta, ctrl)
    command = "fc --cov-equality" if args.cov_equality else "fc"
    return _emit(build_report(command, {"F_c": fc.tolist()}, report, ctrl, args.alpha), args)


def cmd_model(args):
    ctrl = _ctrl(args)
    Y, X, C = read_matrix(args.y), read_matrix(args.x), read_matrix(args.c)
    M = read_matrix(args.m) if args.m else None
    H = read_matrix(args.h) if args.h else None
    model = LinearModel(Y, X)
    ss = sums_of_squares(model, HypothesisSpec(C, M, H))
    report = matrix_p_value(ss, args.beta, ctrl)
    inputs = {"n": model.n, "p": model.p, "rank_X": model.r, "S_H": ss.S_H.tolist(), "S_E": ss.S_E.tolist()}
    return _emit(build_report("model", inputs, report, ctrl, args.alpha), args)


def cmd_reproduce(args):
    ctrl = _ctrl(args)
    ex = EXAMPLES[args.example]
    report = fc_p_value(ex.fc, ex.nu_h, ex.nu_e, 1, ctrl)
    doc = build_report(f"reproduce {ex.key}", {"F_c": ex.fc.tolist()}, report, ctrl, args.alpha)
    lam = symmat.eigenvalues(ex.fc)
    radius = float(1.0 / lam[-1]) if lam[-1] > 0 else None
    doc["example"] = {
        "title": ex.title,
        "target": ex.target,
        "computed": report.p_value,
        "abs_deviation": abs(report.p_value - ex.target),
        "rel_deviation": abs(report.p_value - ex.target) / ex.target,
        "published_radius": ex.radius,
        "computed_radius": radius,
        "expected_diverged": list(ex.expected_diverged),
        "notes": list(ex.notes),
    }
    if args.table:
        e = doc["example"]
        print(format_table(doc))
        print(f"target {e['target']:.7g}  computed {e['computed']:.10g}  "
              f"abs dev {e['abs_deviation']:.3g}  rel dev {e['rel_deviation']:.3g}")
        if ex.radius is not None:
            print(f"||-F_c^-1||: published {ex.radius}  computed {radius:.8g}")
        for note in ex.notes:
            print(f"note: {note}")
    else:
        print(dumps(doc))
    return EXIT_RETAIN


def cmd_mc(args):
    nabla = read_matrix(args.nabla, symmetric=True)
    cfg = McConfig(args.m, args.nu_h, args.nu_e, args.n, args.seed)
    (p, se), (pl, sel) = estimate_probs(cfg, nabla)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": "mc",
        "m": cfg.m, "nu_h": cfg.nu_h, "nu_e": cfg.nu_e,
        "samples": cfg.samples, "seed": cfg.seed, "rng": RNG_ALGORITHM,
        "estimate": p, "stderr": se,
        "lower_estimate": pl, "lower_stderr": sel,
    }
    print(dumps(doc))
    return EXIT_RETAIN


# ---------------------------------------------------------------- parser


def _common(p):
    p.add_argument("--beta", type=int, default=1, choices=(1, 2, 4, 8))
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--max-degree", type=int, default=None,
                   help="series truncation degree (default 200 or $MATBETA_MAX_DEGREE)")
    p.add_argument("--tol", type=float, default=1e-12, help="relative stall tolerance")
    p.add_argument("--full-depth", action="store_true", help="do not trim the depth for m >= 4")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report (default)")
    fmt.add_argument("--table", action="store_true", help="plain-text summary")


def build_parser():
    parser = _Parser(prog="matbeta", description="Matrix p-values for MANOVA-type tests.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pvalue", help="p-value from S_H and S_E")
    p.add_argument("--sh", required=True)
    p.add_argument("--se", required=True)
    p.add_argument("--nu-h", type=int, required=True)
    p.add_argument("--nu-e", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_pvalue)

    p = sub.add_parser("fc", help="p-value from a symmetric F_c")
    p.add_argument("--fc", required=True)
    p.add_argument("--nu-h", type=int, required=True)
    p.add_argument("--nu-e", type=int, required=True)
    p.add_argument("--cov-equality", action="store_true",
                   help="F_c = S_2^{-1/2} S_1 S_2^{-1/2}; nu-h/nu-e are the two sample dfs")
    _common(p)
    p.set_defaults(func=cmd_fc)

    p = sub.add_parser("model", help="fit Y = XB + E and test CBM = H")
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--m")
    p.add_argument("--h")
    _common(p)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("reproduce", help="rerun a worked example")
    p.add_argument("--example", required=True, choices=sorted(EXAMPLES))
    _common(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("mc", help="Monte Carlo estimate of P(F > nabla)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--nu-h", type=int, required=True)
    p.add_argument("--nu-e", type=int, required=True)
    p.add_argument("--nabla", required=True)
    p.add_argument("--n", type=int, default=200000)
    p.add_argument("--seed", type=int, default=20240501)
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except AllDiverged as exc:
        print(f"matbeta: {exc}", file=sys.stderr)
        for name, o in exc.outcomes.items():
            print(f"  {name}: {o.status.value} {o.note}", file=sys.stderr)
        return EXIT_DIVERGED
    except NotEstimable as exc:
        print(f"matbeta: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (InputError, MatBetaError) as exc:
        print(f"matbeta: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
