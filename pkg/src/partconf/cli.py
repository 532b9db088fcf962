"""Command-line front end."""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from typing import Sequence

from . import admissible, flat, holonomy, resonance
from .graphs import Graph, GraphParseError, read_graph
from .lie import LieBudgetError, lcs_ranks
from .model import build_model

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class InputError(Exception):
    pass


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _grid(text: str) -> tuple[str, ...]:
    from fractions import Fraction
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty grid")
    try:
        return tuple(str(Fraction(p)) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--genus", type=_nonneg, required=True)
    common.add_argument("--graph", required=True, help="edge-list or JSON graph file")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_positive, default=1)

    p = _Parser(prog="partconf", description="Invariants of partial configuration spaces of surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("report", parents=[common], help="summary of invariants")
    r.add_argument("--max-weight", type=_positive, default=None, help="also tabulate LCS ranks")
    l = sub.add_parser("lcs", parents=[common], help="graded ranks of the holonomy Lie algebra")
    l.add_argument("--max-weight", type=_positive, required=True)
    l.add_argument("--raw", action="store_true", help="use the presentation read off the model")
    sub.add_parser("formality", parents=[common], help="1-formality verdict")
    rc = sub.add_parser("resonance-check", parents=[common], help="sampled check of the resonance decomposition")
    rc.add_argument("--samples", type=_positive, default=25)
    fe = sub.add_parser("flat-enumerate", parents=[common], help="exhaustive flat connections on a grid")
    fe.add_argument("--algebra", choices=("sl2", "sol2"), required=True)
    fe.add_argument("--grid", type=_grid, default=("-1", "0", "1"))
    fe.add_argument("--theta", choices=("standard", "adjoint"), default="standard")
    fe.add_argument("--budget", type=_positive, default=flat.DEFAULT_BUDGET)
    sub.add_parser("model-dump", parents=[common], help="bases, differential and products as JSON")
    return p


def _load_graph(path: str) -> Graph:
    try:
        return read_graph(path)
    except OSError as exc:
        raise InputError(f"cannot read graph file {path}: {exc.strerror or exc}") from None
    except GraphParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(doc: dict, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _lcs(genus: int, graph: Graph, D: int, raw: bool) -> list[int]:
    p = holonomy.raw_presentation(build_model(genus, graph)) if raw else holonomy.reduced_presentation(genus, graph)
    return list(lcs_ranks(p, D).ranks)


def cmd_report(args, graph: Graph) -> int:
    m = build_model(args.genus, graph)
    maps = admissible.enumerate_admissible(m)
    comps = resonance.resonance_components(m)
    doc = {
        "genus": args.genus,
        "graph": graph.to_dict(),
        "betti1": m.h1.dim,
        "formality": str(holonomy.formality_classify(args.genus, graph)),
        "admissible_maps": [str(f.label) for f in maps],
        "resonance_components": [{"label": "zero" if c.is_zero else str(c.origin), "dim": c.dim} for c in comps],
    }
    lines = [f"genus {args.genus}, {graph}",
             f"b1 = {doc['betti1']}",
             f"formality: {doc['formality']}",
             f"admissible maps ({len(maps)}): " + (", ".join(doc["admissible_maps"]) or "none"),
             f"resonance components ({len(comps)}): " + (", ".join(map(str, comps)) or "none (R = empty)")]
    if args.max_weight:
        ranks = _lcs(args.genus, graph, args.max_weight, False)
        doc["lcs_ranks"] = ranks
        lines.append("lcs ranks: " + " ".join(map(str, ranks)))
    _emit(doc, args.json, lines)
    return EXIT_OK


def cmd_lcs(args, graph: Graph) -> int:
    ranks = _lcs(args.genus, graph, args.max_weight, args.raw)
    doc = {"genus": args.genus, "graph": graph.to_dict(), "presentation": "raw" if args.raw else "reduced",
           "max_weight": args.max_weight, "ranks": ranks}
    lines = ["weight  rank"] + [f"{k:>6}  {r}" for k, r in enumerate(ranks, 1)]
    _emit(doc, args.json, lines)
    return EXIT_OK


def cmd_formality(args, graph: Graph) -> int:
    verdict = str(holonomy.formality_classify(args.genus, graph))
    _emit({"genus": args.genus, "graph": graph.to_dict(), "formality": verdict}, args.json, [verdict])
    return EXIT_OK


def cmd_resonance(args, graph: Graph) -> int:
    rep = resonance.verify_decomposition(build_model(args.genus, graph), args.samples, args.seed)
    lines = [f"b1 = {rep.betti1}; components: " + (", ".join(rep.components) or "none"),
             f"{rep.checks} rank checks, {len(rep.violations)} violations" + (" (vacuous: H1 = 0)" if rep.vacuous else "")]
    for v in rep.violations:
        lines.append(f"  {v.kind}: point {[str(x) for x in v.point]} h1 rank {v.h1_rank} in union {v.in_union}")
    _emit(rep.to_dict(), args.json, lines)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_flat(args, graph: Graph) -> int:
    m = build_model(args.genus, graph)
    alg = flat.MatrixLieAlgebra(args.algebra)
    scan = flat.grid_enumerate_flat(m, alg, args.grid, budget=args.budget, workers=args.threads)
    maps = admissible.enumerate_admissible(m)
    verdicts = Counter()
    failures = []
    for omega in scan.flats:
        d = flat.decompose_flat(omega, maps)
        verdicts[d.verdict] += 1
        if d.verdict == "Failure":
            failures.append([[str(v) for v in row] for row in omega.coeffs.rows])
    theta = flat.Representation.standard(alg) if args.theta == "standard" else flat.Representation.adjoint(alg)
    if m.h1.dim:
        m3 = flat.verify_m3res(m, theta, scan.flats)
        mismatches, m3_checked = m3.mismatches, m3.checked
    else:
        mismatches, m3_checked = [], 0
    doc = {"genus": args.genus, "graph": graph.to_dict(), "algebra": args.algebra, "grid": list(args.grid),
           "theta": args.theta, "candidates": scan.candidates, "flat": len(scan.flats),
           "verdicts": dict(sorted(verdicts.items())), "failures": failures,
           "resonance_checked": m3_checked, "resonance_mismatches": mismatches}
    lines = [f"{scan.candidates} candidates, {len(scan.flats)} flat",
             "verdicts: " + ", ".join(f"{k} {v}" for k, v in sorted(verdicts.items())),
             f"decomposition failures: {len(failures)}",
             f"resonance check: {m3_checked} connections, {len(mismatches)} mismatches"
             + ("" if m.h1.dim else " (skipped: H1 = 0)")]
    _emit(doc, args.json, lines)
    return EXIT_VERIFY if failures or mismatches else EXIT_OK


def cmd_model_dump(args, graph: Graph) -> int:
    print(build_model(args.genus, graph).dump_json())
    return EXIT_OK


COMMANDS = {"report": cmd_report, "lcs": cmd_lcs, "formality": cmd_formality, "resonance-check": cmd_resonance,
            "flat-enumerate": cmd_flat, "model-dump": cmd_model_dump}


def _glue_grid(argv: list[str]) -> list[str]:
    # argparse reads "-1,0,1" as an option, so bind the value explicitly
    out = []
    it = iter(argv)
    for a in it:
        if a == "--grid":
            out.append("--grid=" + next(it, ""))
        else:
            out.append(a)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(_glue_grid(list(sys.argv[1:] if argv is None else argv)))
    try:
        graph = _load_graph(args.graph)
        return COMMANDS[args.command](args, graph)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (flat.BudgetExceededError, LieBudgetError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
