"""Command line front end.

Exit codes: 0 success, 1 bad input or usage, 2 certificate violation,
3 timeout, 4 conjecture counterexample.
"""
import argparse
import csv
import io
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from .dpa import audit_trace, dpa_approx, ratio_bound
from .errors import DualPowerError, InputError, OracleTimeout, SweepTimeout
from .instance import PowerAssignment, generate_instance, read_instance, write_instance
from .oracles import OracleBudget, dpa_opt, scss_opt
from .scss import SymDigraph, random_symmetric, read_digraph, scss_approx, write_digraph
from .secondham.sweep import FAMILIES, SWEEP_BUDGET, verify_conjecture_sweep

EXIT_OK, EXIT_INPUT, EXIT_CERT, EXIT_TIMEOUT, EXIT_COUNTER = 0, 1, 2, 3, 4

REPORT_HEADER = ["instance", "algo", "k", "size", "opt", "ratio_num", "ratio_den", "millis", "audit"]

AUDIT_MAX_NODES = 12


class _Parser(argparse.ArgumentParser):
    # argparse would exit with 2, which is reserved for certificate violations
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _error_record(exc):
    return json.dumps({"error": type(exc).__name__, "message": str(exc)})


def make_row(instance, algo, k, size, opt, millis, audit):
    """One report row; the ratio is size/opt in lowest terms when opt > 0."""
    ratio = Fraction(size, opt) if opt else None
    return {
        "instance": instance, "algo": algo, "k": k, "size": size, "opt": opt,
        "ratio_num": ratio.numerator if ratio is not None else None,
        "ratio_den": ratio.denominator if ratio is not None else None,
        "millis": millis, "audit": audit,
    }


# ------------------------------------------------------------------- gen

def cmd_gen(args):
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i in range(args.count):
        seed = args.seed + i
        if args.kind == "dpa":
            inst = generate_instance(args.n, args.extent, args.rl_sq, args.rh_sq, seed)
            text = write_instance(inst)
        else:
            g = random_symmetric(args.n, args.p, random.Random(seed))
            text = write_digraph(g.graph)
        path = out / f"{args.kind}-n{args.n}-s{seed}.json"
        path.write_text(text)
        written.append(str(path))
    sys.stdout.write("\n".join(written) + ("\n" if written else ""))
    return EXIT_OK


# ----------------------------------------------------------------- solve

def _solve(kind, text, k, audit, budget):
    """(result dict, row fields, certificate ok)."""
    if kind in ("dpa", "dpa-exact"):
        inst = read_instance(text)
        if kind == "dpa-exact":
            sol = dpa_opt(inst, budget)
            return {"high": sorted(sol.high)}, (len(sol), len(sol), "exact"), True
        res = dpa_approx(inst, k)
        size = len(res.assignment)
        body = {"high": sorted(res.assignment.high), "trace": res.trace.to_dict()}
        if not audit:
            return body, (size, None, "skipped"), True
        rep = audit_trace(res.trace)
        if inst.n > AUDIT_MAX_NODES:
            body["audit"] = rep.lines()
            return body, (size, None, "pass" if rep.ok else "fail"), rep.ok
        opt = len(dpa_opt(inst, budget))
        ok = rep.ok and (size <= ratio_bound(k) * opt if opt else size == 0)
        body["audit"] = rep.lines()
        return body, (size, opt, "pass" if ok else "fail"), ok
    g = read_digraph(text)
    if kind == "scss-exact":
        kept = scss_opt(g, budget)
        return {"kept_arcs": sorted(map(list, kept))}, (len(kept), len(kept), "exact"), True
    res = scss_approx(SymDigraph(g), k, budget)
    body = res.to_dict()
    size = len(res)
    if not audit or g.n > AUDIT_MAX_NODES:
        return body, (size, None, "skipped"), True
    opt = len(scss_opt(g, budget))
    ok = 2 * (k - 1) * size <= (3 * k - 2) * opt
    return body, (size, opt, "pass" if ok else "fail"), ok


def cmd_solve(args):
    path = Path(args.input)
    budget = OracleBudget(max_nodes=max(AUDIT_MAX_NODES, 16), max_millis=args.budget_ms)
    t0 = time.monotonic()
    try:
        body, (size, opt, status), ok = _solve(args.kind, path.read_text(), args.k, args.audit, budget)
    except OracleTimeout as exc:
        sys.stderr.write(_error_record(exc) + "\n")
        return EXIT_TIMEOUT
    millis = int((time.monotonic() - t0) * 1000)
    row = make_row(args.id or path.stem, args.kind, args.k, size, opt, millis, status)
    _emit(json.dumps({"result": body, "row": row}, sort_keys=True) + "\n", args.out)
    if not ok:
        sys.stderr.write(json.dumps({"error": "CertificateViolation", "row": row}) + "\n")
        return EXIT_CERT
    return EXIT_OK


# ------------------------------------------------------ verify-conjecture

def cmd_verify(args):
    budget = OracleBudget(SWEEP_BUDGET.max_nodes, args.budget_ms or SWEEP_BUDGET.max_millis)
    try:
        report = verify_conjecture_sweep(args.max_v, args.max_u, budget, families=tuple(args.family or ["tree"]))
        code = EXIT_OK
    except SweepTimeout as exc:
        report = exc.report
        code = EXIT_TIMEOUT
    _emit(report.to_jsonl(), args.out)
    bad = report.counterexamples()
    if bad:
        for rec in bad:
            sys.stderr.write(json.dumps({"counterexample": rec}, sort_keys=True) + "\n")
        return EXIT_COUNTER
    return code


# ---------------------------------------------------------------- report

def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for row in sorted(rows, key=lambda r: (str(r["instance"]), str(r["algo"]))):
        w.writerow(["" if row.get(c) is None else row[c] for c in REPORT_HEADER])
    return buf.getvalue()


def read_rows(text):
    rows = []
    for line in text.splitlines():
        if line.strip():
            doc = json.loads(line)
            row = doc["row"] if "row" in doc else doc
            missing = [c for c in REPORT_HEADER if c not in row]
            if missing:
                raise KeyError(", ".join(missing))
            rows.append(row)
    return rows


def cmd_report(args):
    rows = []
    for name in args.inputs:
        try:
            rows.extend(read_rows(Path(name).read_text()))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"{name}: not a result file ({exc})") from exc
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="dualpower", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write random instances")
    g.add_argument("--kind", choices=["dpa", "scss"], default="dpa")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--extent", type=int, default=10)
    g.add_argument("--rl-sq", type=int, default=4)
    g.add_argument("--rh-sq", type=int, default=25)
    g.add_argument("--p", type=float, default=0.3, help="extra edge probability (scss)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out", help="output directory (default: current)")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run a solver on one input file")
    s.add_argument("kind", choices=["dpa", "dpa-exact", "scss", "scss-exact"])
    s.add_argument("input")
    s.add_argument("--k", type=int, default=8)
    s.add_argument("--audit", action="store_true")
    s.add_argument("--budget-ms", type=int, default=60_000)
    s.add_argument("--seed", type=int, default=0, help="accepted for uniformity; solvers are deterministic")
    s.add_argument("--id", help="instance id for the report row (default: file stem)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify-conjecture", help="exhaustive second-cycle sweep")
    v.add_argument("--max-v", type=int, default=8)
    v.add_argument("--max-u", type=int, default=6)
    v.add_argument("--family", action="append", choices=list(FAMILIES))
    v.add_argument("--budget-ms", type=int)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="merge solve outputs into CSV")
    r.add_argument("inputs", nargs="*")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OracleTimeout as exc:
        sys.stderr.write(_error_record(exc) + "\n")
        return EXIT_TIMEOUT
    except (DualPowerError, OSError) as exc:
        sys.stderr.write(_error_record(exc) + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
