"""Command-line front end: ``omlogic <command> [options]``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import formula as F
from . import implication as I
from . import lattice as LT
from . import matrix as M
from . import suites as S
from ._backend import backend_name
from .universe import DEFAULT_BUDGET, build_fragment


def _default_budget():
    raw = os.environ.get("OMLOGIC_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _add_logic_args(p, required=False):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--lattice", help="lattice JSON file")
    g.add_argument("--gen", action="append", help="generator spec, e.g. mo:2 or prod:boolean:1,mo:2 (repeatable)")


def _add_common(p):
    p.add_argument("--impl", help="implication: 0..5, poly:j or table:FILE.json")
    p.add_argument("--rank", type=int, default=2, help="rank bound of the fragment (default 2)")
    p.add_argument("--dom-cap", type=int, default=2, help="maximum children per node (default 2)")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=M.DEFAULT_SEED)
    p.add_argument("--budget", type=int, default=_default_budget(), help="node budget (env OMLOGIC_BUDGET)")
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser():
    ap = argparse.ArgumentParser(prog="omlogic", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("lattice-check", help="validate a lattice description")
    p.add_argument("path", nargs="?", help="lattice JSON file")
    p.add_argument("--gen", help="validate a generated logic instead")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("impl-table", help="print the full implication table")
    _add_logic_args(p, required=True)
    _add_common(p)

    p = sub.add_parser("eval", help="truth value of a sentence")
    p.add_argument("sentence")
    _add_logic_args(p, required=True)
    _add_common(p)
    p.add_argument("--let", action="append", default=[], metavar="NAME=TERM",
                   help="bind a constant, e.g. u={{}: a} (repeatable)")

    p = sub.add_parser("verify", help="run verification suites")
    _add_logic_args(p)
    _add_common(p)
    p.add_argument("--suite", action="append", help=f"one of: all, {', '.join(S.SUITES)} (repeatable)")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--dim", type=int, action="append", help="dimensions for the twisted suite")

    p = sub.add_parser("matrix", help="twisted implications on projection pairs")
    p.add_argument("--theta", type=float, default=math.pi / 2)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--relations", action="store_true", help="run the seeded relation sweep instead")
    p.add_argument("--dim", type=int, action="append")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=M.DEFAULT_SEED)
    p.add_argument("--csv", help="write the witness matrices here")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return ap


def _logics(args):
    if getattr(args, "lattice", None):
        return [(args.lattice, LT.load(args.lattice))]
    if getattr(args, "gen", None):
        return [(g, LT.from_spec(g)) for g in args.gen]
    return LT.sweep()


def _emit(args, payload, lines):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        for line in lines:
            print(line)


def _file_names(path):
    try:
        names = json.loads(open(path).read()).get("names")
        return [str(x) for x in names] if names else None
    except (OSError, ValueError, AttributeError):
        return None


def cmd_lattice_check(args):
    try:
        if args.gen:
            L = LT.from_spec(args.gen)
        elif args.path:
            L = LT.load(args.path)
        else:
            raise LT.LatticeError("format", "give a lattice file or --gen")
    except LT.LatticeError as exc:
        names = _file_names(args.path) if args.path else None
        wit = [names[k] if names else k for k in exc.witness]
        payload = {"ok": False, "axiom": exc.axiom, "message": str(exc), "witness": wit}
        line = f"INVALID {exc}"
        if wit:
            line += " at (" + ", ".join(str(w) for w in wit) + ")"
        _emit(args, payload, [line])
        return 1
    except ValueError as exc:
        _emit(args, {"ok": False, "axiom": "format", "message": str(exc)}, [f"INVALID format: {exc}"])
        return 1
    payload = {"ok": True, "n": L.n, "names": list(L.names), "boolean": L.is_boolean(),
               "centre": sorted(L.names[p] for p in L.center())}
    _emit(args, payload, [f"OK orthomodular, {L.n} elements, boolean={L.is_boolean()}"])
    return 0


def cmd_impl_table(args):
    (label, L), = _logics(args)[:1]
    spec = I.parse_impl(args.impl or "0", L)
    t = I.impl_table(L, spec)
    rows = {L.names[p]: [L.names[q] for q in t[p]] for p in range(L.n)}
    payload = {"logic": label, "impl": str(spec), "columns": list(L.names), "rows": rows}
    w = max(len(n) for n in L.names) + 1
    lines = [" " * w + "|" + "".join(n.rjust(w) for n in L.names)]
    lines.append("-" * len(lines[0]))
    lines += [p.rjust(w) + "|" + "".join(x.rjust(w) for x in row) for p, row in rows.items()]
    _emit(args, payload, lines)
    return 0


def cmd_eval(args):
    (label, L), = _logics(args)[:1]
    spec = I.parse_impl(args.impl or "3", L)
    frag = build_fragment(L, args.rank, args.dom_cap, budget=args.budget)
    ctx = F.EvalContext(L, spec, domain=frag.nodes)
    env = {}
    for binding in args.let:
        name, _, text = binding.partition("=")
        env[name.strip()] = ctx.term(F.parse_term(text), env)
    f = F.parse(args.sentence, free=list(env))
    ctx.prime(list(frag.nodes) + list(env.values()))
    val = F.truth_value(ctx, f, env)
    payload = {"logic": label, "impl": str(spec), "sentence": F.show(f), "value": L.names[val],
               "delta0": F.is_delta0(f)}
    if not F.is_delta0(f):
        payload["note"] = "fragment-relative"
    _emit(args, payload, [L.names[val]])
    return 0


def cmd_verify(args):
    impl = None
    logics = _logics(args)
    if args.impl:
        impl = I.parse_impl(args.impl, logics[0][1])
    cfg = S.RunConfig(logics=logics, impl=impl, rank=args.rank, dom_cap=args.dom_cap, seed=args.seed,
                      budget=args.budget, samples=args.samples, dims=tuple(args.dim or (2, 3, 4)))
    reports = S.run(args.suite or ["all"], cfg)
    failed = sum(r.failed for r in reports)
    payload = {"config": cfg.header(), "backend": backend_name(), "reports": [r.to_dict() for r in reports],
               "failed": failed}
    lines = [f"config: {json.dumps(cfg.header(), sort_keys=True)}"]
    for r in reports:
        lines.extend(r.lines())
    lines.append(f"total failed: {failed}")
    _emit(args, payload, lines)
    return 0 if failed == 0 else 1


def cmd_matrix(args):
    if args.relations:
        r = M.verify_twisted_relations(args.samples, tuple(args.dim or (2, 3, 4)), args.seed)
        d = r.to_dict()
        _emit(args, d, [f"[{'PASS' if r.ok else 'FAIL'}] twisted relations: checked={r.checked} "
                        f"failed={d['failed']} max_error={r.max_error:.3g}"])
        return 0 if r.ok else 1
    if (args.j, args.i) not in M.WITNESS_OPS:
        print(f"error: ({args.j},{args.i}) is not one of the witnessed operations {M.WITNESS_OPS}", file=sys.stderr)
        return 2
    try:
        w = M.non_polynomial_witness(args.theta)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    d = w.to_dict()
    d["selected"] = f"{args.j},{args.i}"
    if args.csv:
        M.dump_matrices_csv(w.matrices, args.csv)
    chosen = w.outside[(args.j, args.i)]
    ok = w.ok and chosen
    _emit(args, d, [
        f"theta={args.theta:.6g}",
        f"<1|phi> = {w.e1_phi:.12g}",
        f"<phi|phi(theta)> = {w.phi_phitheta:.12g}",
        f"<1|phi(theta)> = {w.e1_phitheta:.12g}",
        f"commutator zero: {w.com_is_zero}",
        f"({args.j},theta,{args.i}) outside the generated subalgebra: {chosen}",
        "witness " + ("succeeds" if ok else "fails"),
    ])
    return 0 if ok else 1


COMMANDS = {
    "lattice-check": cmd_lattice_check,
    "impl-table": cmd_impl_table,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "matrix": cmd_matrix,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except (ValueError, F.FormulaError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
