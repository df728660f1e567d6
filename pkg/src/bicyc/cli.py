"""Command-line front end: ``bicyc info|find|classify|verify|sweep|export``.

Machine output is JSON on stdout; human notes go to stderr.  Exit codes: 0 ok,
1 usage or I/O error, 2 bad input, 3 verification failure or no cycle, 4 budget
exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .constructions import (
    ConstructionError,
    half_hypotheses,
    half_type_construct,
    haar_applicable,
    haar_stitch_any,
    lemma35_hypotheses,
    pipeline_combination,
    s1_classify_construct,
)
from .core import BicirculantError, CertificateError, Vertex, verify_certificate
from .dispatcher import HAMILTONIAN, classify, sweep, theorem13_applicable
from .export import CycleParamMismatch, export_graph
from .grammar import ParamSyntaxError, parse_params
from .oracle import BudgetExceeded, Constraints, SearchBudget, find_cycle_exact, find_cycle_heuristic
from .structure import info

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CLAIM, EXIT_BUDGET = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(obj):
    print(json.dumps(obj, indent=None, separators=(",", ":")))


def _note(msg):
    print(msg, file=sys.stderr)


def certificate_json(p, cert):
    return {"params": str(p), "cycle": [[v.side, v.index] for v in cert.vertices],
            "counts": dict(cert.edge_counts)}


def _budget(args):
    return SearchBudget(max_nodes=args.budget_nodes, max_millis=args.budget_ms, seed=args.seed)


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _add_budget(sp):
    sp.add_argument("--budget-nodes", type=_positive,
                    default=int(os.environ.get("BICYC_BUDGET_NODES", 2_000_000)))
    sp.add_argument("--budget-ms", type=_positive,
                    default=int(os.environ.get("BICYC_BUDGET_MS", 60_000)))
    sp.add_argument("--seed", type=int, default=1)


def _construct(p):
    """Run the construction whose hypotheses p meets; (seq, trace) or None."""
    if p.s == 1:
        o = s1_classify_construct(p)
        return (o.cycle, o.trace) if o.kind == "cycle" else None
    if half_hypotheses(p) is None:
        return half_type_construct(p)
    if lemma35_hypotheses(p) is None:
        return pipeline_combination(p)
    if haar_applicable(p):
        return haar_stitch_any(p)
    return None


def cmd_info(args, p):
    out = info(p)
    if p.s >= 3 and out["connected"]:
        w = theorem13_applicable(p)
        out["theorem13"] = {"applicable": w.applicable, "witness": w.kind, "spokes": list(w.spokes)}
    _emit(out)
    return EXIT_OK


def cmd_find(args, p):
    budget = _budget(args)
    trace = None
    try:
        if args.strategy == "exact":
            cons = Constraints.min_outer(args.min_outer) if args.min_outer else None
            seq = find_cycle_exact(p, cons, budget)
            if seq is None:
                _note("no hamilton cycle exists (exhaustive search)")
                return EXIT_CLAIM
        elif args.strategy == "heuristic":
            seq = find_cycle_heuristic(p, budget)
            if seq is None:
                _note("heuristic budget exhausted")
                return EXIT_BUDGET
        elif args.strategy == "construct":
            try:
                res = _construct(p)
            except ConstructionError as e:
                _note(f"construction not applicable: {e}")
                return EXIT_INPUT
            if res is None:
                _note("no construction applies to these parameters")
                return EXIT_INPUT
            seq, trace = res
        else:
            out = classify(p, budget)
            if out.verdict != HAMILTONIAN:
                _note(f"{out.verdict}: {out.reason}")
                return EXIT_BUDGET if out.verdict == "Unknown" else EXIT_CLAIM
            seq, trace = list(out.certificate.vertices), out.trace
    except BudgetExceeded as e:
        _note(str(e))
        return EXIT_BUDGET
    cert = verify_certificate(p, seq)
    if args.min_outer and cert.outer < args.min_outer:
        _note(f"cycle has {cert.outer} outer edges, fewer than requested")
        return EXIT_CLAIM
    doc = certificate_json(p, cert)
    if trace is not None:
        doc["trace"] = {"lemma": trace.lemma, "chosen_types": [list(t) for t in trace.chosen_types],
                        "log": trace.log}
        for line in trace.log:
            _note(line)
    if args.emit_dot:
        with open(args.emit_dot, "w") as fh:
            fh.write(export_graph(p, cert, "dot"))
    _emit(doc)
    return EXIT_OK


def cmd_classify(args, p):
    out = classify(p, _budget(args), prefer_oracle=args.prefer_oracle)
    _emit(out.to_json(p))
    return EXIT_BUDGET if out.verdict == "Unknown" else EXIT_OK


def _reject(kind, detail, code):
    _emit({"ok": False, "error": kind, "detail": detail})
    return code


def cmd_verify(args, p):
    try:
        with open(args.certificate) as fh:
            doc = json.load(fh)
    except OSError as e:
        return _reject("IOError", str(e), EXIT_USAGE)
    except json.JSONDecodeError as e:
        return _reject("SchemaError", f"invalid JSON: {e}", EXIT_INPUT)
    try:
        seq = [Vertex(str(s), int(i)) for s, i in doc["cycle"]]
    except (KeyError, TypeError, ValueError) as e:
        return _reject("SchemaError", f"bad cycle field: {e}", EXIT_INPUT)
    if "params" in doc:
        try:
            cp = parse_params(doc["params"])
        except (ParamSyntaxError, BicirculantError) as e:
            return _reject("SchemaError", f"bad params field: {e}", EXIT_INPUT)
        if cp != p:
            return _reject("ParamsMismatch", f"certificate is for {cp}, not {p}", EXIT_INPUT)
    try:
        cert = verify_certificate(p, seq)
    except CertificateError as e:
        return _reject(type(e).__name__, str(e), EXIT_CLAIM)
    if "counts" in doc and dict(doc["counts"]) != dict(cert.edge_counts):
        return _reject("CountsMismatch", f"recorded {doc['counts']}, actual {cert.edge_counts}", EXIT_CLAIM)
    _emit({"ok": True, "counts": dict(cert.edge_counts)})
    return EXIT_OK


def cmd_sweep(args, _p):
    rep = sweep(args.m_max, args.d_max, _budget(args), jobs=args.jobs, cross_check_m=args.cross_check_m)
    doc = rep.to_json()
    text = json.dumps(doc, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    _note(f"{rep.universe_size} parameter sets in {rep.seconds:.1f}s; "
          f"{len(rep.exceptions)} non-hamiltonian, {len(rep.unknown)} unknown")
    return EXIT_OK if not rep.unknown and not rep.agreement_failures else EXIT_CLAIM


def cmd_export(args, p):
    cycle = None
    if args.cycle:
        try:
            with open(args.cycle) as fh:
                doc = json.load(fh)
            cycle = [Vertex(str(s), int(i)) for s, i in doc["cycle"]]
        except OSError as e:
            _note(str(e))
            return EXIT_USAGE
        except (ValueError, KeyError, TypeError) as e:
            _note(f"bad certificate: {e}")
            return EXIT_INPUT
    try:
        sys.stdout.write(export_graph(p, cycle, args.format))
    except CycleParamMismatch as e:
        _note(str(e))
        return EXIT_CLAIM
    return EXIT_OK


def build_parser():
    ap = _Parser(prog="bicyc", description="Hamilton cycles in bicirculant graphs B(m; R; S; T).")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    sp = sub.add_parser("info", help="connectivity, quotient and stitching grids")
    sp.add_argument("params")

    sp = sub.add_parser("find", help="find a hamilton cycle and print its certificate")
    sp.add_argument("params")
    sp.add_argument("--strategy", choices=["exact", "heuristic", "auto", "construct"], default="auto")
    sp.add_argument("--min-outer", type=int, default=0)
    sp.add_argument("--emit-dot", metavar="FILE")
    _add_budget(sp)

    sp = sub.add_parser("classify", help="decide hamiltonicity through the strategy cascade")
    sp.add_argument("params")
    sp.add_argument("--prefer-oracle", action="store_true")
    _add_budget(sp)

    sp = sub.add_parser("verify", help="check a certificate JSON file")
    sp.add_argument("params")
    sp.add_argument("certificate")

    sp = sub.add_parser("sweep", help="classify every small parameter set")
    sp.add_argument("--m-max", type=_positive, required=True)
    sp.add_argument("--d-max", type=_positive, required=True)
    sp.add_argument("--jobs", type=_positive, default=1)
    sp.add_argument("--cross-check-m", type=int, default=12)
    sp.add_argument("--out")
    _add_budget(sp)

    sp = sub.add_parser("export", help="write the graph as DOT or an edge list")
    sp.add_argument("params")
    sp.add_argument("--format", choices=["dot", "edgelist"], default="dot")
    sp.add_argument("--cycle", metavar="CERT")
    return ap


COMMANDS = {"info": cmd_info, "find": cmd_find, "classify": cmd_classify, "verify": cmd_verify,
            "sweep": cmd_sweep, "export": cmd_export}


def main(argv=None):
    args = build_parser().parse_args(argv)
    p = None
    if hasattr(args, "params"):
        try:
            p = parse_params(args.params)
        except ParamSyntaxError as e:
            _emit({"ok": False, "error": "SyntaxError", "detail": str(e), "position": e.position})
            return EXIT_INPUT
        except BicirculantError as e:
            _emit({"ok": False, "error": type(e).__name__, "detail": str(e),
                   "position": getattr(e, "position", None)})
            return EXIT_INPUT
    return COMMANDS[args.cmd](args, p)


if __name__ == "__main__":
    sys.exit(main())
