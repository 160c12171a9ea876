"""``qht`` command-line front end.

State files are JSON objects ``{"dim": d, "matrix": [[[re, im], ...], ...]}``.
Exit codes: 0 ok, 1 property failure, 2 file error, 3 parse or validation
error, 4 dimension mismatch, 5 tensor cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import asymptotics, chernoff, hoeffding, mapping, verify
from .errors import DimensionCapExceeded, DimensionMismatch, ParseError, QHTError
from .states import Priors, diag_state, random_density, validate_density

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_FILE = 2
EXIT_PARSE = 3
EXIT_DIMENSION = 4
EXIT_CAP = 5


def encode_number(x):
    """Floats stay floats except infinities, which become ``"inf"`` / ``"-inf"``."""
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


# --------------------------------------------------------------------------
# state files
# --------------------------------------------------------------------------

def state_to_dict(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def parse_state(obj) -> np.ndarray:
    """Turn a decoded state file into a validated density matrix.

    Raises:
        ParseError: on a malformed structure or a matrix that is not a state.
    """
    try:
        dim = obj["dim"]
        rows = obj["matrix"]
        if not isinstance(dim, int) or dim < 1:
            raise ParseError(f"bad dim {dim!r}")
        arr = np.asarray(rows, dtype=float)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed state file: {exc}") from exc
    if arr.shape != (dim, dim, 2):
        raise ParseError(f"matrix shape {arr.shape} does not match dim {dim}")
    m = arr[..., 0] + 1j * arr[..., 1]
    try:
        return validate_density(m)
    except QHTError as exc:
        raise ParseError(f"not a density matrix: {exc}") from exc


def load_state(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    return parse_state(obj)


def load_pair(args) -> tuple[np.ndarray, np.ndarray]:
    rho = load_state(args.rho)
    sigma = load_state(args.sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"rho is {rho.shape[0]}-dimensional, sigma is {sigma.shape[0]}-dimensional")
    return rho, sigma


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------

def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _table_text(header, rows) -> str:
    cells = [list(header)] + [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def chernoff_payload(res: chernoff.ChernoffResult) -> dict:
    return {
        "q_star": encode_number(res.q_star),
        "xi_qcb": encode_number(res.xi_qcb),
        "s_star": encode_number(res.s_star),
        "curve": [[s, encode_number(q)] for s, q in res.curve],
    }


def cmd_chernoff(args) -> int:
    rho, sigma = load_pair(args)
    res = chernoff.chernoff_distance(rho, sigma)
    fmt = args.format or "json"
    if fmt == "json":
        text = _json_text(chernoff_payload(res))
    else:
        summary = [("q_star", res.q_star), ("xi_qcb", res.xi_qcb), ("s_star", res.s_star)]
        if fmt == "csv":
            text = _csv_text(["s", "q_s"], res.curve, [f"{k} = {_fmt(v)}" for k, v in summary])
        else:
            text = _table_text(["quantity", "value"], summary)
    _emit(text, args.out)
    return EXIT_OK


def cmd_hoeffding(args) -> int:
    rho, sigma = load_pair(args)
    points = hoeffding.hoeffding_curve(rho, sigma, args.r_min, args.r_max, args.steps)
    crit = hoeffding.critical_points(rho, sigma)
    summary = [
        ("psi0", crit.psi0),
        ("psi1", crit.psi1),
        ("S_sigma(rho||sigma)", crit.s_sigma_rho),
        ("S_rho(sigma||rho)", crit.s_rho_sigma),
        ("S(rho||sigma)", hoeffding.stein_rate(rho, sigma)),
    ]
    rows = [(p.r, p.value, p.s_achieving) for p in points]
    fmt = args.format or "csv"
    if fmt == "csv":
        text = _csv_text(["r", "e_q", "s_achieving"], rows, [f"{k} = {_fmt(v)}" for k, v in summary])
    elif fmt == "json":
        text = _json_text({
            "critical_points": {k: encode_number(v) for k, v in summary},
            "curve": [{"r": r, "e_q": encode_number(v), "s_achieving": s} for r, v, s in rows],
        })
    else:
        text = _table_text(["quantity", "value"], summary) + "\n" + _table_text(["r", "e_q", "s_achieving"], rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    rho, sigma = load_pair(args)
    exp = asymptotics.chernoff_rate_experiment(rho, sigma, Priors.from_pi0(args.pi0), args.n_max)
    header = ["n", "p_e_n", "rate", "upper_bound", "lower_bound", "sandwich_ok"]
    rows = [(e.n, e.value, e.rate, e.upper_bound, e.lower_bound, e.sandwich_ok) for e in exp.entries]
    fmt = args.format or "csv"
    if fmt == "csv":
        text = _csv_text(header, rows, [f"xi_qcb = {_fmt(exp.chernoff.xi_qcb)}", f"s_star = {_fmt(exp.chernoff.s_star)}"])
    elif fmt == "json":
        text = _json_text({
            "chernoff": chernoff_payload(exp.chernoff),
            "entries": [dict(zip(header, [n, v, encode_number(r) if r is not None else None, u, lo, ok]))
                        for n, v, r, u, lo, ok in rows],
        })
    else:
        text = _table_text(header, rows)
    _emit(text, args.out)
    return EXIT_OK if exp.all_sandwich_ok else EXIT_PROPERTY


def cmd_verify(args) -> int:
    dims = tuple(int(d) for d in args.dims.split(",")) if args.dims else None
    reports = verify.run_suite(args.suite, args.trials, args.seed, dims, args.workers)
    fmt = args.format or "json"
    if fmt == "json":
        text = "".join(r.to_json() + "\n" for r in reports)
    else:
        header = ["property_name", "trials", "worst_margin", "failures", "seed"]
        rows = [(r.property_name, r.trials, r.worst_margin, r.failures, r.seed) for r in reports]
        text = _csv_text(header, rows) if fmt == "csv" else _table_text(header, rows)
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_PROPERTY


def cmd_map(args) -> int:
    rho, sigma = load_pair(args)
    pair = mapping.ns_map(rho, sigma)
    rows = [(int(i), int(j), p, q) for (i, j), p, q in zip(pair.outcomes, pair.p, pair.q)]
    fmt = args.format or "csv"
    if fmt == "json":
        text = _json_text({"outcomes": [[i, j] for i, j, _, _ in rows], "p": pair.p.tolist(), "q": pair.q.tolist()})
    elif fmt == "csv":
        text = _csv_text(["i", "j", "p", "q"], rows)
    else:
        text = _table_text(["i", "j", "p", "q"], rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_stein(args) -> int:
    rho, sigma = load_pair(args)
    value = hoeffding.stein_rate(rho, sigma)
    fmt = args.format or "table"
    if fmt == "json":
        text = _json_text({"stein_rate": encode_number(value)})
    else:
        text = _fmt(value) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_dump(args) -> int:
    if args.source:
        m = load_state(args.source)
    elif args.diag:
        try:
            entries = [float(x) for x in args.diag.split(",")]
        except ValueError as exc:
            raise ParseError(f"bad --diag list: {exc}") from exc
        try:
            m = validate_density(diag_state(*entries))
        except QHTError as exc:
            raise ParseError(str(exc)) from exc
    else:
        m = random_density(args.random, args.rank, args.seed)
    _emit(_json_text(state_to_dict(m)), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qht", description="Quantum hypothesis-testing exponents.")
    sub = parser.add_subparsers(dest="command", required=True)

    def pair_cmd(name, help_text, func, formats=("table", "json", "csv")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--rho", required=True, help="state file for the null hypothesis")
        p.add_argument("--sigma", required=True, help="state file for the alternative")
        p.add_argument("--format", choices=formats)
        p.add_argument("--out", help="write output here instead of stdout")
        p.set_defaults(func=func)
        return p

    pair_cmd("chernoff", "Chernoff distance, optimal s and the Q_s curve", cmd_chernoff)
    p = pair_cmd("hoeffding", "exponent curve e_Q(r) with its critical points", cmd_hoeffding)
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p = pair_cmd("simulate", "exact n-copy Bayesian error with finite-n bounds", cmd_simulate)
    p.add_argument("--pi0", type=float, default=0.5)
    p.add_argument("--n-max", type=int, default=10)
    pair_cmd("map", "mapped classical pair p, q", cmd_map)
    pair_cmd("stein", "relative entropy S(rho||sigma)", cmd_stein)

    p = sub.add_parser("verify", help="randomized inequality checks")
    p.add_argument("suite", nargs="?", default="all", choices=["all", "tensor_counterexample", *verify.SUITES])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", help="comma-separated dimensions, e.g. 2,3")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("table", "json", "csv"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump", help="write a state file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--random", type=int, metavar="DIM", help="random state of this dimension")
    src.add_argument("--diag", help="comma-separated diagonal entries")
    src.add_argument("--from", dest="source", metavar="PATH", help="re-serialize an existing state file")
    p.add_argument("--rank", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dump)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except DimensionCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (QHTError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
