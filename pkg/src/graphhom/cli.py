"""Command-line front end.  Exit status: 0 ok, 1 bad input, 2 a check failed."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
import time
from fractions import Fraction

from . import __version__
from .algebra import (AlgebraError, AlgebraPresentation, NotAnIdeal, Subspace, algebra_from_name)
from .catenum import build_category, enumerate_23, enumerate_objects
from .exactla import to_fraction, worker_count
from .fatgraph import (FatGraph, FatGraphError, canonical_key, contract, dual, invariants,
                       to_dot, validate)

log = logging.getLogger("graphhom")


class InputError(ValueError):
    code = "input"


# -- loading -----------------------------------------------------------------

def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_graph(path: str) -> FatGraph:
    try:
        g = FatGraph.from_dict(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{path}: malformed fat graph ({exc})") from exc
    problems = validate(g)
    if problems:
        raise InputError(f"{path}: " + "; ".join(problems))
    return g


def load_algebra(spec: str) -> AlgebraPresentation:
    """A JSON file path or a built-in name (q, q[e], mat2, ...)."""
    if os.path.exists(spec):
        try:
            return AlgebraPresentation.from_dict(_read_json(spec))
        except (KeyError, TypeError, AlgebraError) as exc:
            raise InputError(f"{spec}: malformed algebra ({exc})") from exc
    return algebra_from_name(spec)


def load_algebras(specs: str) -> list[AlgebraPresentation]:
    from .algebra import check_algebra
    out = []
    for s in specs.split(","):
        a = load_algebra(s)
        problems = check_algebra(a)
        if problems:
            raise InputError(f"{s}: {problems[0]}")
        out.append(a)
    return out


def load_ideal(spec: str, dim: int) -> Subspace:
    """JSON list of spanning vectors (dense arrays of "p/q")."""
    data = _read_json(spec) if os.path.exists(spec) else json.loads(spec)
    vecs = []
    for v in data:
        if len(v) != dim:
            raise InputError(f"ideal vector {v} has length {len(v)}, algebra has dim {dim}")
        vecs.append({i: to_fraction(x) for i, x in enumerate(v) if to_fraction(x)})
    return Subspace.span(dim, vecs)


# -- output ------------------------------------------------------------------

def write_report(text: str, path: str | None) -> None:
    """Write atomically: temp file in the same directory, then rename."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".graphhom-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "output"):
            continue
        out[k] = v
    return out


def _report(args, body: dict) -> str:
    config = dict(_config(args), threads=worker_count())
    doc = {"tool": "graphhom", "version": __version__, "config": config}
    doc.update(body)
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def _graph_record(g: FatGraph) -> dict:
    inv = invariants(g)
    return dict(g.to_dict(), key=canonical_key(g).decode(), invariants=inv.__dict__)


# -- subcommands -------------------------------------------------------------

def cmd_enumerate(args):
    graphs = enumerate_23(args.genus, args.boundaries) if args.class23 else \
        enumerate_objects(args.genus, args.boundaries)
    if args.format == "dot":
        return 0, "\n".join(to_dot(g) for g in graphs)
    return 0, _report(args, {"count": len(graphs), "objects": [_graph_record(g) for g in graphs]})


def cmd_invariants(args):
    g = load_graph(args.graph)
    return 0, _report(args, {"invariants": invariants(g).__dict__,
                             "boundary_orbits": [list(o) for o in g.boundary_orbits]})


def cmd_contract(args):
    g = load_graph(args.graph)
    if not 0 <= args.edge < g.edge_count:
        raise InputError(f"edge {args.edge} out of range 0..{g.edge_count - 1}")
    c = contract(g, args.edge)
    if args.format == "dot":
        return 0, to_dot(c.graph)
    return 0, _report(args, {"graph": _graph_record(c.graph), "emap": list(c.emap),
                             "dart_map": [-1 if x is None else x for x in c.dart_map]})


def cmd_dual(args):
    g = load_graph(args.graph)
    h = dual(g)
    if args.format == "dot":
        return 0, to_dot(h)
    return 0, _report(args, {"graph": h.to_dict(), "invariants": invariants(h).__dict__})


def cmd_atlas(args):
    cat = build_category(args.genus, args.boundaries, args.max_bivalent)
    problems = cat.verify() if args.verify else []
    body = {"atlas": cat.to_dict(), "verified": args.verify, "problems": problems}
    return (2 if problems else 0), _report(args, body)


def cmd_homology(args):
    from .homology import (algebra_coefficients, bar_complex, colimit_dim, indexed_category,
                           stable_bivalent)
    algs = load_algebras(args.algebras)
    k = stable_bivalent(args.max_degree) if args.max_bivalent is None else args.max_bivalent
    ic = indexed_category(args.genus, args.boundaries, k)
    G = algebra_coefficients(ic, algs)
    t0 = time.perf_counter()
    bc = bar_complex(ic, G, args.max_degree)
    dims = bc.complex.homology_dims()
    print(f"homology: {dims} in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    body = {
        "objects": len(ic.cat.objects), "morphisms": len(ic.morphs), "max_bivalent": k,
        "dimensions": dims, "chain_counts": bc.chain_counts, "chain_dims": bc.complex.dims,
        "matrix_sizes": {str(p): [m.rows, m.cols] for p, m in sorted(bc.complex.d.items())},
        "colimit_dim": colimit_dim(ic, G),
    }
    if args.timings:
        body["seconds"] = bc.seconds
    return 0, _report(args, body)


def cmd_hochschild(args):
    from .homology import hochschild
    a = load_algebras(args.algebra)[0]
    return 0, _report(args, {"dimensions": hochschild(a, args.max_degree)})


def cmd_cyclic(args):
    from .homology import cyclic
    a = load_algebras(args.algebra)[0]
    return 0, _report(args, {"dimensions": cyclic(a, args.max_degree)})


def cmd_graph_homology_02(args):
    from .homology import graph_homology_02
    algs = load_algebras(args.algebras)
    if len(algs) != 2:
        raise InputError("graph-homology-02 needs exactly two algebras")
    return 0, _report(args, {"dimensions": graph_homology_02(algs[0], algs[1], args.max_degree)})


def cmd_relative(args):
    from .homology import relative_graph_homology
    algs = load_algebras(args.algebras)
    if not 0 <= args.slot < len(algs):
        raise InputError(f"slot {args.slot} out of range")
    ideal = load_ideal(args.ideal, algs[args.slot].dim)
    rel, idl = relative_graph_homology(args.genus, args.boundaries, algs, args.slot, ideal,
                                       args.max_degree, args.max_bivalent)
    return 0, _report(args, {"relative": rel, "ideal": idl, "excisive_dims": rel == idl})


def cmd_psi_verify(args):
    from .ktheory import PsiAssignment, assemble_and_check_naturality, full_check
    g = load_graph(args.graph)
    try:
        p = PsiAssignment.load(args.assignment, graph=g)
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.assignment}: line {exc.lineno}: {exc.msg}") from exc
    problems = p.validate()
    if problems:
        raise InputError("; ".join(problems))
    results = full_check(p) + assemble_and_check_naturality(p)
    failed = [r.name for r in results if not r.passed]
    body = {"results": [r.to_dict() for r in results], "failed": failed}
    return (2 if failed else 0), _report(args, body)


def cmd_twist(args):
    from .ktheory import twist_from_dict, twisted_product
    rep = twisted_product(twist_from_dict(_read_json(args.twist)))
    return (0 if rep.implication_ok else 2), _report(args, {"twist": rep.to_dict()})


def cmd_amitsur(args):
    from .ktheory import AmitsurComplex, TooLarge, amitsur_cohomology
    groups = amitsur_cohomology(args.p, args.r, args.max_degree)
    cx = AmitsurComplex(args.p, args.r)
    dd = {}
    for n in (1, 2):
        try:
            dd[str(n)] = cx.dd_trivial(n)
        except TooLarge:
            break
    ok = all(dd.values())
    body = {"cohomology": [g.to_dict() for g in groups], "dd_trivial": dd}
    return (0 if ok else 2), _report(args, body)


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphhom", description=__doc__)
    ap.add_argument("--version", action="version", version=f"graphhom {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("-o", "--output", help="report path (default stdout)")
        return p

    def signature(p):
        p.add_argument("--genus", type=int, required=True)
        p.add_argument("--boundaries", type=int, required=True)

    p = add("enumerate", cmd_enumerate, "list the objects of M(g,n)")
    signature(p)
    p.add_argument("--class23", action="store_true", help="graphs with 2- and 3-valent vertices instead")
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = add("invariants", cmd_invariants, "V, E, n, genus of a fat graph")
    p.add_argument("--graph", required=True)

    p = add("contract", cmd_contract, "contract one edge")
    p.add_argument("--graph", required=True)
    p.add_argument("--edge", type=int, required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = add("dual", cmd_dual, "dual fat graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = add("atlas", cmd_atlas, "objects and hom sets of the category")
    signature(p)
    p.add_argument("--max-bivalent", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="check category axioms exhaustively")

    p = add("homology", cmd_homology, "graph homology of algebras")
    signature(p)
    p.add_argument("--algebras", required=True, help="comma-separated files or names (q, q[e], mat2)")
    p.add_argument("--max-degree", type=int, default=3, help="D; degrees 0..D-1 are reported")
    p.add_argument("--max-bivalent", type=int, default=None, help="default D-1")
    p.add_argument("--timings", action="store_true", help="include wall-clock per degree")

    for name, func in (("hochschild", cmd_hochschild), ("cyclic", cmd_cyclic)):
        p = add(name, func, f"{name} homology of one algebra")
        p.add_argument("--algebra", required=True)
        p.add_argument("--max-degree", type=int, default=3)

    p = add("graph-homology-02", cmd_graph_homology_02, "the (0,2) case through cyclic homology")
    p.add_argument("--algebras", required=True)
    p.add_argument("--max-degree", type=int, default=3)

    p = add("relative", cmd_relative, "relative graph homology for an ideal")
    signature(p)
    p.add_argument("--algebras", required=True)
    p.add_argument("--slot", type=int, default=0)
    p.add_argument("--ideal", required=True, help="JSON file or literal: list of spanning vectors")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--max-bivalent", type=int, default=None)

    p = add("psi-verify", cmd_psi_verify, "check a psi assignment")
    p.add_argument("--graph", required=True)
    p.add_argument("--assignment", required=True)

    p = add("twist", cmd_twist, "twisted product relations and associativity")
    p.add_argument("--twist", required=True)

    p = add("amitsur", cmd_amitsur, "Amitsur cohomology of F_{p^r}/F_p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=2)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    from .exactla import NotAComplex
    from .homology import NotFunctorial
    try:
        status, text = args.func(args)
    except (NotAComplex, NotFunctorial) as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return 2
    except (InputError, FatGraphError, AlgebraError, NotAnIdeal, ValueError, KeyError) as exc:
        code = getattr(exc, "code", "input")
        print(json.dumps({"error": code, "message": str(exc)}), file=sys.stderr)
        return 1
    write_report(text if text.endswith("\n") else text + "\n", args.output)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
