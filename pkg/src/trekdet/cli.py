"""Command-line front end.

The order in which vertices are given to ``--A`` and ``--B`` fixes the row and
column order of the minor, and therefore the sign convention.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from .determinant import DetExpansion, result_record, trek_separated, verify_positivity, verify_power_of_two
from .flows import iter_trek_flows, trek_flow_monomial, trek_flow_sign, up_down_cycles
from .graphs import GraphError, MixedGraph, bidirected_subdivision, is_acyclic, parse_graph, vertex_key, vertex_name
from .oracle import oracle_compare
from .polynomial import Polynomial, canonical_string, monomial_string
from .treks import enumerate_treks, sigma_entry_collapsed, sigma_entry_truncated, trek_monomial

EXIT_USAGE = 2
EXIT_INPUT = 3

_NEEDS_AB = {"det", "flows", "trek-sep", "verify", "oracle-check"}
_NEEDS_IJ = {"sigma", "treks"}


class InputError(Exception):
    pass


def _path_text(p) -> str:
    return "->".join(vertex_name(v) for v in p)


def _cycle_text(c) -> str:
    return "(" + "->".join(vertex_name(v) for v in list(c) + [c[0]]) + ")"


def _flow_text(f) -> str:
    parts = [_path_text(p) for p in f.paths] + [_cycle_text(c) for c in f.cycles]
    return "[" + ", ".join(parts) + "]"


def _digraph(g: MixedGraph):
    return bidirected_subdivision(g) if g.bidirected_edges else g.directed_part


def _check_vertices(g: MixedGraph, vs: Sequence[int]) -> None:
    for v in vs:
        if v not in g.vertices:
            raise InputError(f"vertex {v} is not in the graph")


def _expansion_lines(title: str, exp: DetExpansion) -> List[str]:
    lines = [f"{title}:"]
    for c in exp.sorted_classes():
        lines.append(f"  sign={c.sign:+d} ud={c.ud_count} {monomial_string(c.monomial)}")
    return lines


def render_det_text(rec: dict) -> str:
    """Text form of a structured determinant record."""
    num = Polynomial.from_records(rec["numerator"])
    den = Polynomial.from_records(rec["denominator"])
    lines = [f"num: {canonical_string(num)}  den: {canonical_string(den)}"]
    if rec.get("subdivided"):
        lines.append("# classes are over the bidirected subdivision")
    lines += _expansion_lines("numerator classes", DetExpansion.from_records(rec["numerator_classes"]))
    lines += _expansion_lines("denominator classes", DetExpansion.from_records(rec["denominator_classes"]))
    return "\n".join(lines)


def _cmd_det(g, args, out) -> int:
    rec = result_record(g, args.A, args.B)
    if args.format == "structured":
        out.write(json.dumps(rec, sort_keys=True, indent=2) + "\n")
    else:
        out.write(render_det_text(rec) + "\n")
    return 0


def _cmd_sigma(g, args, out) -> int:
    i, j = args.i, args.j
    if is_acyclic(g) and args.max_degree is None:
        classes = sigma_entry_collapsed(g, i, j)
        total = Polynomial()
        for t, c in classes:
            total = total + Polynomial.from_monomial(trek_monomial(t), c)
        if args.format == "structured":
            rec = {
                "acyclic": True,
                "sigma": total.to_records(),
                "classes": [
                    {"coefficient": c, "monomial": monomial_string(trek_monomial(t)), "left": list(map(vertex_name, t.left)), "right": list(map(vertex_name, t.right))}
                    for t, c in classes
                ],
            }
            out.write(json.dumps(rec, sort_keys=True, indent=2) + "\n")
            return 0
        out.write(f"sigma_{i}_{j} = {canonical_string(total)}\n")
        for t, c in classes:
            out.write(f"  {c} * {monomial_string(trek_monomial(t))}  left={_path_text(t.left)} right={_path_text(t.right)}\n")
        return 0
    d = args.max_degree if args.max_degree is not None else 2 * len(g.vertices)
    p = sigma_entry_truncated(g, i, j, d)
    if args.format == "structured":
        out.write(json.dumps({"acyclic": is_acyclic(g), "max_degree": d, "sigma": p.to_records()}, sort_keys=True, indent=2) + "\n")
    else:
        out.write(f"sigma_{i}_{j} (lambda-degree <= {d}) = {canonical_string(p)}\n")
    return 0


def _cmd_treks(g, args, out) -> int:
    d = args.max_degree
    if d is None and not is_acyclic(g):
        d = 2 * len(g.vertices)
    treks = enumerate_treks(g, args.i, args.j, d)
    if args.format == "structured":
        rec = [{"left": list(map(vertex_name, t.left)), "right": list(map(vertex_name, t.right)), "monomial": monomial_string(trek_monomial(t))} for t in treks]
        out.write(json.dumps(rec, sort_keys=True, indent=2) + "\n")
        return 0
    for t in treks:
        out.write(f"left={_path_text(t.left)} right={_path_text(t.right)} monomial={monomial_string(trek_monomial(t))}\n")
    return 0


def _cmd_flows(g, args, out) -> int:
    d = _digraph(g)
    recs = []
    for t in iter_trek_flows(d, args.A, args.B):
        recs.append(
            {
                "tops": [vertex_name(v) for v in sorted(t.tops, key=vertex_key)],
                "sign": trek_flow_sign(t, args.A, args.B),
                "ud_count": len(up_down_cycles(t)),
                "monomial": monomial_string(trek_flow_monomial(t)),
                "left": _flow_text(t.left),
                "right": _flow_text(t.right),
            }
        )
    if args.format == "structured":
        out.write(json.dumps(recs, sort_keys=True, indent=2) + "\n")
        return 0
    for r in recs:
        out.write(
            f"tops={{{','.join(r['tops'])}}} sign={r['sign']:+d} ud={r['ud_count']} "
            f"monomial={r['monomial']} left={r['left']} right={r['right']}\n"
        )
    return 0


def _cmd_trek_sep(g, args, out) -> int:
    sep = trek_separated(g, args.A, args.B)
    out.write("SEPARATED\n" if sep else "NOT-SEPARATED\n")
    return 0 if sep else 1


def _cmd_verify(g, args, out) -> int:
    pos = verify_positivity(g, args.A, args.B)
    pow2 = verify_power_of_two(g, args.A, args.B)
    if args.format == "structured":
        rec = {
            "positivity": {"ok": pos.ok, "classes": pos.classes_checked, "flows": pos.flows_checked, "violations": [monomial_string(m) for m in pos.violations]},
            "power_of_two": {
                "ok": pow2.ok,
                "classes": pow2.classes_checked,
                "flows": pow2.flows_checked,
                "violations": [{"monomial": monomial_string(v.monomial), "class_size": v.class_size, "ud_counts": list(v.ud_counts)} for v in pow2.violations],
            },
        }
        out.write(json.dumps(rec, sort_keys=True, indent=2) + "\n")
    else:
        for name, rep in (("positivity", pos), ("power-of-two", pow2)):
            status = "OK" if rep.ok else f"{len(rep.violations)} VIOLATIONS"
            out.write(f"{name}: {status} ({rep.classes_checked} classes, {rep.flows_checked} trek flows)\n")
    return 0 if pos.ok and pow2.ok else 1


def _cmd_oracle_check(g, args, out) -> int:
    ok = oracle_compare(g, args.A, args.B)
    out.write("PASS\n" if ok else "FAIL\n")
    return 0 if ok else 1


_COMMANDS = {
    "det": _cmd_det,
    "sigma": _cmd_sigma,
    "treks": _cmd_treks,
    "flows": _cmd_flows,
    "trek-sep": _cmd_trek_sep,
    "verify": _cmd_verify,
    "oracle-check": _cmd_oracle_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trekdet",
        description="Cancellation-free expansions of covariance minors of Gaussian graphical models.",
        epilog="Vertices passed to --A and --B are used in the order given; that order "
        "fixes the rows and columns of the minor and hence every sign.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    helps = {
        "det": "expand det Sigma_{A,B}",
        "sigma": "expand the entry sigma_{i,j}",
        "treks": "list treks from i to j",
        "flows": "list self-avoiding trek flows from A to B",
        "trek-sep": "decide trek separation of A and B",
        "verify": "check sign uniformity and class sizes 2^|UD|",
        "oracle-check": "compare the expansion with brute-force linear algebra",
    }
    for verb, text in helps.items():
        p = sub.add_parser(verb, help=text)
        p.add_argument("graph", help="graph file (node / dedge / bedge lines)")
        if verb in _NEEDS_AB:
            p.add_argument("--A", nargs="*", type=int, required=True, metavar="V", help="row vertices, in order")
            p.add_argument("--B", nargs="*", type=int, required=True, metavar="V", help="column vertices, in order")
        if verb in _NEEDS_IJ:
            p.add_argument("--i", type=int, required=True)
            p.add_argument("--j", type=int, required=True)
            p.add_argument("--max-degree", type=int, default=None, help="bound on lambda-degree (default 2|V| for cyclic graphs)")
        p.add_argument("--format", choices=("text", "structured"), default="text")
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    if getattr(args, "A", None) is not None and len(args.A) != len(args.B):
        err.write("trekdet: error: --A and --B must have the same length\n")
        return EXIT_USAGE
    if getattr(args, "max_degree", None) is not None and args.max_degree < 0:
        err.write("trekdet: error: --max-degree must be nonnegative\n")
        return EXIT_USAGE
    try:
        with open(args.graph, encoding="utf-8") as fh:
            g = parse_graph(fh.read())
        if args.verb in _NEEDS_AB:
            for vs in (args.A, args.B):
                _check_vertices(g, vs)
                if len(set(vs)) != len(vs):
                    raise InputError("vertex lists must not repeat vertices")
        else:
            _check_vertices(g, [args.i, args.j])
        return _COMMANDS[args.verb](g, args, out)
    except (OSError, GraphError, InputError) as exc:
        err.write(f"trekdet: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
