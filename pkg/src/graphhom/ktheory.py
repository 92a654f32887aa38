"""
Graph K-theory data: tensors attached to vertices of fat graphs with two- and
three-valent vertices, the equations they must satisfy, twisted products
``x *_psi y = sum a x b y c`` and the Amitsur complex of a finite field.

A tensor over a list of algebras is a sparse dict
``{(i_1, ..., i_k): coefficient}`` of basis-index tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from .algebra import AlgebraPresentation, algebra_from_name, ground_field, matrix_algebra
from .exactla import to_fraction
from .fatgraph import FatGraph, automorphisms, contract


class WrongValence(ValueError):
    code = "wrong-valence"


class WrongConfiguration(ValueError):
    code = "wrong-configuration"


class ConfigurationMismatch(ValueError):
    code = "configuration-mismatch"


class GraphMismatch(ValueError):
    code = "graph-mismatch"


class TooLarge(ValueError):
    code = "too-large"


# -- sparse tensors ----------------------------------------------------------

def _clean(t: dict) -> dict:
    return {k: v for k, v in t.items() if v}


def t_add(x: dict, y: dict, c=1) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) + c * v
    return _clean(out)


def t_mul(algs, x: dict, y: dict, op=()) -> dict:
    """Factorwise product; positions in ``op`` multiply in reverse order."""
    out: dict = {}
    op = set(op)
    for kx, vx in x.items():
        for ky, vy in y.items():
            terms = [((), vx * vy)]
            for pos, (a, i, j) in enumerate(zip(algs, kx, ky)):
                prod = a.mult[j][i] if pos in op else a.mult[i][j]
                if not prod:
                    terms = []
                    break
                terms = [(k + (b,), c * d) for k, c in terms for b, d in prod.items()]
            for k, c in terms:
                out[k] = out.get(k, 0) + c
    return _clean(out)


def t_unit(algs) -> dict:
    out = {(): Fraction(1)}
    for a in algs:
        out = {k + (b,): c * d for k, c in out.items() for b, d in a.unit}
    return out


def t_insert_unit(t: dict, a: AlgebraPresentation, pos: int) -> dict:
    """Insert the unit of ``a`` as a new factor at position ``pos``."""
    out = {}
    for k, c in t.items():
        for b, d in a.unit:
            out[k[:pos] + (b,) + k[pos:]] = c * d
    return out


def t_permute(t: dict, perm) -> dict:
    """New factor ``k`` is old factor ``perm[k]``."""
    return {tuple(k[p] for p in perm): v for k, v in t.items()}


def t_to_json(t: dict) -> list:
    return [{"index": list(k), "coeff": str(v)} for k, v in sorted(t.items())]


# -- matrix entries ----------------------------------------------------------

def matrix_element(base: AlgebraPresentation, r: int, entries) -> dict:
    """Element of ``Mat_r(base)`` from an r x r array of scalars or base-vectors."""
    d = base.dim
    out = {}
    for p in range(r):
        for q in range(r):
            e = entries[p][q]
            if isinstance(e, (list, tuple)):
                vec = {i: to_fraction(x) for i, x in enumerate(e)}
            else:
                vec = {k: to_fraction(e) * c for k, c in base.unit}
            for i, x in vec.items():
                if x:
                    key = (p * r + q) * d + i
                    out[key] = out.get(key, 0) + x
    return _clean(out)


def tensor_from_terms(factors: list[dict], coeff=1) -> dict:
    out = {(): to_fraction(coeff)}
    for f in factors:
        out = {k + (b,): c * x for k, c in out.items() for b, x in f.items()}
    return _clean(out)


# -- assignments -------------------------------------------------------------

@dataclass
class PsiAssignment:
    graph: FatGraph
    sizes: dict[int, int]  # label -> r
    bases: dict[int, AlgebraPresentation]  # label -> A
    tensors: dict[int, dict] = field(default_factory=dict)  # vertex -> tensor

    @cached_property
    def algebras(self) -> dict[int, AlgebraPresentation]:
        return {lab: matrix_algebra(self.bases[lab], self.sizes[lab]) for lab in self.sizes}

    def flags(self, m: int) -> tuple[int, ...]:
        return self.graph.vertices[m]

    def factor_algebras(self, m: int) -> list[AlgebraPresentation]:
        fl = self.graph.face_label
        return [self.algebras[fl[d]] for d in self.flags(m)]

    def dart_algebras(self) -> list[AlgebraPresentation]:
        fl = self.graph.face_label
        return [self.algebras[fl[d]] for d in range(self.graph.dart_count)]

    def tensor(self, m: int) -> dict:
        return self.tensors.get(m, t_unit(self.factor_algebras(m)))

    def with_tensor(self, m: int, t: dict) -> "PsiAssignment":
        new = dict(self.tensors)
        new[m] = _clean(t)
        return PsiAssignment(self.graph, self.sizes, self.bases, new)

    def validate(self) -> list[str]:
        out = []
        for m, t in self.tensors.items():
            k = len(self.flags(m))
            algs = self.factor_algebras(m)
            for key in t:
                if len(key) != k:
                    out.append(f"vertex {m}: tensor has {len(key)} factors, valence {k}")
                    break
                if any(not 0 <= i < a.dim for i, a in zip(key, algs)):
                    out.append(f"vertex {m}: basis index out of range")
                    break
        return out

    @classmethod
    def units(cls, graph: FatGraph, sizes=None, bases=None) -> "PsiAssignment":
        labels = sorted(graph.labels)
        sizes = sizes or {lab: 1 for lab in labels}
        bases = bases or {lab: ground_field() for lab in labels}
        return cls(graph, dict(sizes), dict(bases))

    @classmethod
    def from_dict(cls, data: dict, graph: FatGraph | None = None) -> "PsiAssignment":
        if graph is None:
            graph = FatGraph.from_dict(data["graph"])
        sizes = {int(k): int(v) for k, v in data.get("sizes", {}).items()}
        bases = {}
        for k, v in data.get("bases", {}).items():
            bases[int(k)] = AlgebraPresentation.from_dict(v) if isinstance(v, dict) else algebra_from_name(v)
        for lab in graph.labels:
            sizes.setdefault(lab, 1)
            bases.setdefault(lab, ground_field())
        p = cls(graph, sizes, bases)
        fl = graph.face_label
        for key, terms in data.get("tensors", {}).items():
            m = int(key)
            flags = p.flags(m)
            t = {}
            for term in terms:
                factors = [matrix_element(bases[fl[d]], sizes[fl[d]], mat)
                           for d, mat in zip(flags, term["factors"])]
                if len(term["factors"]) != len(flags):
                    raise WrongValence(f"vertex {m} has valence {len(flags)}, term has {len(term['factors'])} factors")
                t = t_add(t, tensor_from_terms(factors, term.get("coeff", "1")))
            p.tensors[m] = t
        return p

    @classmethod
    def load(cls, path, graph: FatGraph | None = None) -> "PsiAssignment":
        with open(path) as fh:
            return cls.from_dict(json.load(fh), graph)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: dict

    def to_dict(self) -> dict:
        return {"equation": self.name, "pass": self.passed,
                "residual_zero": not self.residual, "residual": t_to_json(self.residual)}


def _result(name, residual) -> CheckResult:
    residual = _clean(residual)
    return CheckResult(name, not residual, residual)


# -- equations ---------------------------------------------------------------

def psi_idempotent_check(p: PsiAssignment, m: int) -> CheckResult:
    """``psi_m^2 = psi_m`` in ``A (x) B^op`` (second flag carries the op)."""
    if len(p.flags(m)) != 2:
        raise WrongValence(f"vertex {m} has valence {len(p.flags(m))}, expected 2")
    algs = p.factor_algebras(m)
    t = p.tensor(m)
    sq = t_mul(algs, t, t, op=(1,))
    return _result(f"idempotent@{m}", t_add(sq, t, -1))


def _edge_config(p: PsiAssignment, m3: int, m2: int, e: int):
    g = p.graph
    if len(p.flags(m3)) != 3:
        raise WrongValence(f"vertex {m3} has valence {len(p.flags(m3))}, expected 3")
    if len(p.flags(m2)) != 2:
        raise WrongValence(f"vertex {m2} has valence {len(p.flags(m2))}, expected 2")
    a, b = 2 * e, 2 * e + 1
    if g.vertex_of[a] == m2 and g.vertex_of[b] == m3:
        x, xp = a, b
    elif g.vertex_of[b] == m2 and g.vertex_of[a] == m3:
        x, xp = b, a
    else:
        raise WrongConfiguration(f"edge {e} does not join vertices {m3} and {m2}")
    return x, xp


def absorbed_tensor(p: PsiAssignment, m3: int, m2: int, e: int) -> dict:
    """What contracting ``e`` does to ``psi_m3 (x) psi_m2``, in the flag order of ``m3``.

    The factor of ``m2`` at the edge multiplies the ``m3`` factor after the
    edge from the left; the other ``m2`` factor multiplies the ``m3`` factor
    at the edge from the right.
    """
    g = p.graph
    x, xp = _edge_config(p, m3, m2, e)
    z = g.sigma[x]
    f3 = p.flags(m3)
    f2 = p.flags(m2)
    after = g.sigma[xp]
    algs3 = p.factor_algebras(m3)
    t3, t2 = p.tensor(m3), p.tensor(m2)
    i_x, i_z = f2.index(x), f2.index(z)
    i_xp, i_after = f3.index(xp), f3.index(after)
    fl = g.face_label
    if fl[z] != fl[xp] or fl[x] != fl[after]:
        raise WrongConfiguration("boundary labels do not match across the edge")
    out = {}
    for k3, c3 in t3.items():
        for k2, c2 in t2.items():
            a_after = algs3[i_after].mult[k2[i_x]][k3[i_after]]
            a_xp = algs3[i_xp].mult[k3[i_xp]][k2[i_z]]
            for u, cu in a_after.items():
                for w, cw in a_xp.items():
                    key = list(k3)
                    key[i_after] = u
                    key[i_xp] = w
                    key = tuple(key)
                    out[key] = out.get(key, 0) + c3 * c2 * cu * cw
    return _clean(out)


def psi_absorption_check(p: PsiAssignment, m3: int, m2: int, e: int) -> CheckResult:
    """``psi_m3 (psi_m2 (x) 1) = psi_m3`` with factors matched across the edge ``e``."""
    res = t_add(absorbed_tensor(p, m3, m2, e), p.tensor(m3), -1)
    return _result(f"absorption@{m3},{m2},e{e}", res)


EXCHANGE_SLOTS = ((0, 1, 3), (1, 2, 3), (0, 1, 2), (0, 2, 3))


def exchange_sides(algs4, psi_m, psi_mbar, psi_l, psi_lbar, slots=EXCHANGE_SLOTS):
    """Both sides of ``psi_m^3 psi_mbar^1 = psi_l^4 psi_lbar^2`` in the 4-fold space.

    ``slots[k]`` lists where the three factors of the k-th tensor go; the
    missing slot receives the unit.
    """
    def place(t, sl):
        missing = next(s for s in range(4) if s not in sl)
        out = {}
        for k, c in t.items():
            full = [None] * 4
            for s, i in zip(sl, k):
                full[s] = i
            for b, d in algs4[missing].unit:
                full[missing] = b
                key = tuple(full)
                out[key] = out.get(key, 0) + c * d
        return out

    left = t_mul(algs4, place(psi_m, slots[0]), place(psi_mbar, slots[1]))
    right = t_mul(algs4, place(psi_l, slots[2]), place(psi_lbar, slots[3]))
    return left, right


def psi_exchange_check(p: PsiAssignment, q: PsiAssignment, pairs, algs4=None,
                       slots=EXCHANGE_SLOTS) -> CheckResult:
    """Exchange relation between ``p`` on a graph and ``q`` on its flipped graph.

    ``pairs = ((m, mbar), (l, lbar))``.  The remaining tensors of the two
    assignments must agree as a multiset.
    """
    (m, mbar), (l, lbar) = pairs
    for a, v in ((p, m), (p, mbar), (q, l), (q, lbar)):
        if len(a.flags(v)) != 3:
            raise WrongValence(f"vertex {v} has valence {len(a.flags(v))}, expected 3")
    g1, g2 = p.graph, q.graph
    if (g1.dart_count, len(g1.vertices), len(g1.boundary_orbits)) != \
            (g2.dart_count, len(g2.vertices), len(g2.boundary_orbits)):
        raise ConfigurationMismatch("graphs differ outside the exchanged configuration")
    rest1 = sorted(repr(sorted(p.tensor(v).items())) for v in range(len(g1.vertices)) if v not in (m, mbar))
    rest2 = sorted(repr(sorted(q.tensor(v).items())) for v in range(len(g2.vertices)) if v not in (l, lbar))
    if rest1 != rest2:
        raise ConfigurationMismatch("tensors away from the configuration differ")
    if algs4 is None:
        fa = p.factor_algebras(m)
        fb = p.factor_algebras(mbar)
        algs4 = [fa[0], fa[1], fb[1], fa[2]]
    left, right = exchange_sides(algs4, p.tensor(m), p.tensor(mbar), q.tensor(l), q.tensor(lbar), slots)
    return _result(f"exchange@{m},{mbar}|{l},{lbar}", t_add(left, right, -1))


def psi_symmetry_check(p: PsiAssignment) -> list[CheckResult]:
    """``psi_{T(m)} = psi_m`` for every marked automorphism ``T``."""
    g = p.graph
    out = []
    for T in automorphisms(g, label_preserving=True):
        for m, flags in enumerate(g.vertices):
            img = [T.map[d] for d in flags]
            tm = g.vertex_of[img[0]]
            tflags = g.vertices[tm]
            # factor k of psi_m sits at flag flags[k]; move psi_{T(m)} into that order
            perm = [tflags.index(d) for d in img]
            moved = t_permute(p.tensor(tm), perm)
            res = t_add(moved, p.tensor(m), -1)
            if res or m == tm:
                out.append(_result(f"symmetry@{m}->{tm}", res))
    if not out:
        out.append(_result("symmetry", {}))
    return out


# -- assembly and naturality -------------------------------------------------

def assemble(p: PsiAssignment) -> dict:
    """``psi(G) = (x)_m psi_m``, indexed by dart (one factor per corner)."""
    g = p.graph
    out = {(): Fraction(1)}
    order = []
    for m, flags in enumerate(g.vertices):
        t = p.tensor(m)
        out = {k + kk: c * cc for k, c in out.items() for kk, cc in t.items()}
        order.extend(flags)
    inv = [0] * g.dart_count
    for pos, d in enumerate(order):
        inv[d] = pos
    return _clean({tuple(k[inv[d]] for d in range(g.dart_count)): c for k, c in out.items()})


def push_tensor(src: FatGraph, tgt: FatGraph, dart_map, dart_algs, vec: dict) -> dict:
    """Apply the coefficient map of a morphism to a dart-indexed tensor."""
    phi = src.phi
    feeds = {}
    for orb in src.boundary_orbits:
        m = len(orb)
        start = next(k for k, d in enumerate(orb) if dart_map[d] is not None)
        run = []
        for step in range(1, m + 1):
            x = orb[(start + step) % m]
            run.append(x)
            if dart_map[x] is not None:
                feeds[dart_map[x]] = run
                run = []
    del phi
    out = {}
    for k, c in vec.items():
        terms = [({}, c)]
        for t in range(tgt.dart_count):
            run = feeds[t]
            a = dart_algs[run[0]]
            prod = {k[run[0]]: Fraction(1)}
            for x in run[1:]:
                prod = a.mul(prod, {k[x]: Fraction(1)})
            terms = [(dict(assign, **{str(t): b}), cc * v) for assign, cc in terms
                     for b, v in prod.items()]
            if not terms:
                break
        for assign, cc in terms:
            key = tuple(assign[str(t)] for t in range(tgt.dart_count))
            out[key] = out.get(key, 0) + cc
    return _clean(out)


def contracted_assignment(p: PsiAssignment, e: int) -> tuple[PsiAssignment, dict]:
    """Extension of ``p`` to ``G/e`` by the restriction and merge rules.

    For an edge from a bivalent vertex ``m2`` to a vertex ``m``, the merged
    vertex carries ``psi_m`` with the factor of the edge flag moved to the
    far flag of ``m2``.
    """
    g = p.graph
    a, b = 2 * e, 2 * e + 1
    va, vb = g.vertex_of[a], g.vertex_of[b]
    if len(g.vertices[va]) == 2:
        m2, x, m, xp = va, a, vb, b
    elif len(g.vertices[vb]) == 2:
        m2, x, m, xp = vb, b, va, a
    else:
        raise WrongConfiguration(f"edge {e} has no bivalent end")
    c = contract(g, e)
    h = c.graph
    z = g.sigma[x]
    new = {}
    for v, flags in enumerate(g.vertices):
        if v == m2:
            continue
        t = p.tensor(v)
        # flags of v in the old graph, as darts of the new graph
        old = [z if d == xp else d for d in flags] if v == m else list(flags)
        nd = [c.dart_map[d] for d in old]
        nv = h.vertex_of[nd[0]]
        nflags = h.vertices[nv]
        perm = [nd.index(d) for d in nflags]
        new[nv] = t_permute(t, perm)
    q = PsiAssignment(h, p.sizes, p.bases, new)
    return q, {"edge": e, "merged": (m, m2), "dart_map": c.dart_map}


def assemble_and_check_naturality(p: PsiAssignment, cat=None) -> list[CheckResult]:
    """Check ``L(e) psi(G) = psi(G/e)`` for every contraction generator out of the graph,
    and ``T psi(G) = psi(G)`` for every marked automorphism.

    ``cat`` (optional) is a category skeleton; when given, each contracted graph
    must be one of its objects.
    """
    g = p.graph
    algs = p.dart_algebras()
    psi = assemble(p)
    out = []
    keys = None
    if cat is not None:
        from .fatgraph import canonical_key
        keys = set(cat.keys)
    for e in range(g.edge_count):
        if g.is_loop(e):
            continue
        try:
            q, info = contracted_assignment(p, e)
        except WrongConfiguration:
            continue
        if keys is not None:
            from .fatgraph import canonical_key
            if canonical_key(q.graph) not in keys:
                raise WrongConfiguration(f"contraction of edge {e} leaves the category")
        pushed = push_tensor(g, q.graph, info["dart_map"], algs, psi)
        out.append(_result(f"contraction e{e}", t_add(pushed, assemble(q), -1)))
    for T in automorphisms(g, label_preserving=True):
        if all(T.map[d] == d for d in range(g.dart_count)):
            continue
        pushed = push_tensor(g, g, T.map, algs, psi)
        out.append(_result(f"automorphism {list(T.map)}", t_add(pushed, psi, -1)))
    return out


def full_check(p: PsiAssignment) -> list[CheckResult]:
    """Idempotent, absorption and symmetry equations for every applicable vertex/edge."""
    g = p.graph
    out = []
    val = [len(c) for c in g.vertices]
    for m, k in enumerate(val):
        if k == 2:
            out.append(psi_idempotent_check(p, m))
    for e in range(g.edge_count):
        a, b = g.vertex_of[2 * e], g.vertex_of[2 * e + 1]
        for m3, m2 in ((a, b), (b, a)):
            if val[m3] == 3 and val[m2] == 2:
                out.append(psi_absorption_check(p, m3, m2, e))
    out.extend(psi_symmetry_check(p))
    return out


# -- direct sum --------------------------------------------------------------

def _block_embed(base: AlgebraPresentation, r: int, r2: int, offset: int):
    """Basis index map ``Mat_r(base) -> Mat_{r2}(base)`` on the diagonal block at ``offset``."""
    d = base.dim

    def f(k):
        pq, i = divmod(k, d)
        pp, qq = divmod(pq, r)
        return ((pp + offset) * r2 + (qq + offset)) * d + i
    return f


def direct_sum(p1: PsiAssignment, p2: PsiAssignment) -> PsiAssignment:
    if p1.graph != p2.graph:
        raise GraphMismatch("direct sum needs the same graph")
    if any(p1.bases[lab].to_dict() != p2.bases[lab].to_dict() for lab in p1.bases):
        raise GraphMismatch("direct sum needs the same base algebras")
    g = p1.graph
    sizes = {lab: p1.sizes[lab] + p2.sizes[lab] for lab in p1.sizes}
    fl = g.face_label
    out = {}
    for m, flags in enumerate(g.vertices):
        total = {}
        for p, off in ((p1, 0), (p2, None)):
            emb = []
            for d in flags:
                lab = fl[d]
                o = 0 if off == 0 else p1.sizes[lab]
                emb.append(_block_embed(p.bases[lab], p.sizes[lab], sizes[lab], o))
            for k, c in p.tensor(m).items():
                key = tuple(f(x) for f, x in zip(emb, k))
                total[key] = total.get(key, 0) + c
        out[m] = _clean(total)
    return PsiAssignment(g, sizes, dict(p1.bases), out)


# -- twisted products --------------------------------------------------------

@dataclass
class TwistTensor:
    algebra: AlgebraPresentation
    terms: list  # list of (a, b, c) sparse vectors

    def as_tensor(self) -> dict:
        out = {}
        for a, b, c in self.terms:
            out = t_add(out, tensor_from_terms([a, b, c]))
        return out


@dataclass
class TwistReport:
    table: list
    relation1: dict
    relation2_left: dict
    relation2_right: dict
    associative: bool
    unital: bool
    witnesses: list

    @property
    def relation1_holds(self) -> bool:
        return not self.relation1

    @property
    def relation2_holds(self) -> bool:
        return not self.relation2_left and not self.relation2_right

    @property
    def implication_ok(self) -> bool:
        if self.relation1_holds and self.relation2_holds:
            return self.associative and self.unital
        return True

    def to_dict(self) -> dict:
        return {"relation1": self.relation1_holds, "relation2": self.relation2_holds,
                "associative": self.associative, "unital": self.unital,
                "implication_ok": self.implication_ok, "witnesses": self.witnesses,
                "table": [[{str(k): str(v) for k, v in sorted(e.items())} for e in row]
                          for row in self.table]}


def twisted_mul(t: TwistTensor, x: dict, y: dict) -> dict:
    A = t.algebra
    out = {}
    for a, b, c in t.terms:
        out = t_add(out, A.mul(A.mul(A.mul(A.mul(a, x), b), y), c))
    return out


def twisted_product(t: TwistTensor) -> TwistReport:
    A = t.algebra
    n = A.dim
    alg4 = [A] * 4
    e = [{i: Fraction(1)} for i in range(n)]
    table = [[twisted_mul(t, e[i], e[j]) for j in range(n)] for i in range(n)]
    # relation 1
    lhs, rhs = {}, {}
    for ai, bi, ci in t.terms:
        for aj, bj, cj in t.terms:
            lhs = t_add(lhs, tensor_from_terms([A.mul(aj, ai), bi, A.mul(ci, bj), cj]))
            rhs = t_add(rhs, tensor_from_terms([ai, A.mul(bi, aj), bj, A.mul(cj, ci)]))
    rel1 = t_add(lhs, rhs, -1)
    del alg4
    # relation 2
    one = tensor_from_terms([A.unit_vector, A.unit_vector])
    l2, r2 = {}, {}
    for a, b, c in t.terms:
        l2 = t_add(l2, tensor_from_terms([A.mul(a, b), c]))
        r2 = t_add(r2, tensor_from_terms([a, A.mul(b, c)]))
    # brute force on the table
    def mul(x, y):
        out = {}
        for i, xi in x.items():
            for j, yj in y.items():
                for k, v in table[i][j].items():
                    out[k] = out.get(k, 0) + xi * yj * v
        return _clean(out)

    witnesses = []
    assoc = True
    for i, j, k in product(range(n), repeat=3):
        if mul(mul(e[i], e[j]), e[k]) != mul(e[i], mul(e[j], e[k])):
            assoc = False
            witnesses.append(f"associativity fails on ({A.basis[i]}, {A.basis[j]}, {A.basis[k]})")
            break
    unital = True
    u = A.unit_vector
    for i in range(n):
        if mul(u, e[i]) != e[i] or mul(e[i], u) != e[i]:
            unital = False
            witnesses.append(f"1 is not a unit on {A.basis[i]}")
            break
    return TwistReport(table, rel1, t_add(l2, one, -1), t_add(r2, one, -1), assoc, unital, witnesses)


def twist_from_dict(data: dict) -> TwistTensor:
    a = data["algebra"]
    A = AlgebraPresentation.from_dict(a) if isinstance(a, dict) else algebra_from_name(a)
    terms = []
    for term in data["terms"]:
        vecs = []
        for v in term:
            if isinstance(v, dict):
                vecs.append({int(k): to_fraction(x) for k, x in v.items()})
            else:
                vecs.append({k: to_fraction(x) for k, x in enumerate(v) if to_fraction(x)})
        terms.append(tuple(vecs))
    return TwistTensor(A, terms)


# -- Amitsur complex ---------------------------------------------------------

def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def irreducible_poly(p: int, r: int) -> tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree r over F_p (low to high)."""
    for tail in product(range(p), repeat=r):
        f = tail[::-1] + (1,)
        if f[0] == 0:
            continue
        if not any(_has_factor(f, g, p) for d in range(1, r // 2 + 1)
                   for g in _monics(p, d)):
            return f
    raise ValueError("no irreducible polynomial found")


def _monics(p, d):
    for tail in product(range(p), repeat=d):
        yield tuple(tail) + (1,)


def _has_factor(f, g, p) -> bool:
    rem = list(f)
    dg = len(g) - 1
    while len(rem) - 1 >= dg:
        c = rem[-1] % p
        shift = len(rem) - 1 - dg
        for i, gi in enumerate(g):
            rem[shift + i] = (rem[shift + i] - c * gi) % p
        rem.pop()
        while rem and rem[-1] % p == 0:
            rem.pop()
        if not rem:
            return True
    return not any(x % p for x in rem)


class FiniteFieldTensorPower:
    """``L^{(x)n}`` over F_p with L = F_p[x]/(f); elements are arrays of shape ``(r,)*n``."""

    def __init__(self, p: int, r: int, n: int):
        self.p, self.r, self.n = p, r, n
        f = irreducible_poly(p, r)
        # multiplication table of L: x^i * x^j reduced mod f
        red = []
        for k in range(2 * r - 1):
            v = [0] * r
            if k < r:
                v[k] = 1
            else:
                prev = red[k - 1]
                # x * prev
                top = prev[-1]
                v = [0] + prev[:-1]
                v = [(v[i] - top * f[i]) % p for i in range(r)]
            red.append(v)
        T = np.zeros((r, r, r), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                T[i, j] = red[i + j]
        self.T1 = T
        self.dim = r ** n
        Tn = np.ones((1, 1, 1), dtype=np.int64)
        for _ in range(n):
            Tn = np.einsum("abc,ijk->aibjck", Tn, T).reshape(
                Tn.shape[0] * r, Tn.shape[1] * r, Tn.shape[2] * r)
        self.T = Tn % p
        self.size = p ** self.dim

    def mul(self, X, Y):
        return np.einsum("mi,mj,ijk->mk", X, Y, self.T) % self.p

    def one(self, count):
        out = np.zeros((count, self.dim), dtype=np.int64)
        out[:, 0] = 1
        return out

    def power(self, X, e):
        result = self.one(len(X))
        base = X.copy()
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elements(self):
        if self.size > MAX_ELEMENTS:
            raise TooLarge(f"L^(x){self.n} has {self.p}^{self.dim} elements")
        idx = np.arange(self.size, dtype=np.int64)
        out = np.zeros((self.size, self.dim), dtype=np.int64)
        for k in range(self.dim - 1, -1, -1):
            out[:, k] = idx % self.p
            idx //= self.p
        return out

    def encode(self, X):
        code = np.zeros(len(X), dtype=np.int64)
        for k in range(self.dim):
            code = code * self.p + X[:, k]
        return code

    def units(self):
        """Units: ``L^{(x)n}`` is a product of copies of L, so x is a unit iff x^(q-1) = 1."""
        X = self.elements()
        q = self.p ** self.r
        ok = np.all(self.power(X, q - 1) == self.one(len(X)), axis=1)
        return X[ok]

    def inverse(self, X):
        return self.power(X, self.p ** self.r - 2)

    def coface(self, X, i):
        """Insert 1 at tensor position ``i`` (0..n)."""
        shape = (len(X),) + (self.r,) * self.n
        A = X.reshape(shape)
        e0 = np.zeros(self.r, dtype=np.int64)
        e0[0] = 1
        B = np.expand_dims(A, axis=1 + i) * e0.reshape((1,) * (1 + i) + (self.r,) + (1,) * (self.n - i))
        return B.reshape(len(X), self.dim * self.r)


@dataclass
class FiniteAbelianGroup:
    order: int
    invariant_factors: tuple[int, ...]

    @property
    def trivial(self) -> bool:
        return self.order == 1

    def to_dict(self) -> dict:
        return {"order": self.order, "invariant_factors": list(self.invariant_factors)}

    def __str__(self):
        if self.trivial:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


MAX_ELEMENTS = 1 << 20


class AmitsurComplex:
    def __init__(self, p: int, r: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1:
            raise ValueError("extension degree must be positive")
        if p ** r > 64:
            raise TooLarge(f"field of {p ** r} elements exceeds the exhaustive bound 64")
        self.p, self.r = p, r
        self._powers = {}

    def power_ring(self, n: int) -> FiniteFieldTensorPower:
        if n not in self._powers:
            self._powers[n] = FiniteFieldTensorPower(self.p, self.r, n)
        return self._powers[n]

    def d(self, n: int, X):
        """C^n -> C^{n+1}: product of cofaces with alternating exponents."""
        R = self.power_ring(n)
        S = self.power_ring(n + 1)
        even = S.one(len(X))
        odd = S.one(len(X))
        for i in range(n + 1):
            Y = R.coface(X, i)
            if i % 2 == 0:
                even = S.mul(even, Y)
            else:
                odd = S.mul(odd, Y)
        return S.mul(even, S.inverse(odd))

    def _image_codes(self, n: int):
        """Codes of ``d(C^{n-1})`` inside C^n (trivial group for n = 1)."""
        R = self.power_ring(n)
        if n == 1:
            return set(R.encode(R.one(1)).tolist())
        U = self.power_ring(n - 1).units()
        return set(R.encode(self.d(n - 1, U)).tolist())

    def cohomology(self, k: int) -> FiniteAbelianGroup:
        """H^k, computed at C^{k+1}."""
        n = k + 1
        R = self.power_ring(n)
        U = R.units()
        S = self.power_ring(n + 1)
        D = self.d(n, U)
        ones = S.encode(S.one(1))[0]
        ker = U[S.encode(D) == ones]
        im = self._image_codes(n)
        order, rem = divmod(len(ker), len(im))
        assert rem == 0
        return FiniteAbelianGroup(order, self._invariants(R, ker, im, order))

    def _invariants(self, R, ker, im, order) -> tuple[int, ...]:
        if order == 1:
            return ()
        primes = [q for q in range(2, order + 1) if order % q == 0 and _is_prime(q)]
        parts = []  # per prime: list of exponents of cyclic factors
        for ell in primes:
            logs = [0]
            j = 1
            while True:
                Y = R.power(ker, ell ** j)
                killed = sum(1 for c in R.encode(Y).tolist() if c in im)
                size = killed // len(im)
                e = 0
                while size > 1:
                    size //= ell
                    e += 1
                logs.append(e)
                if logs[-1] == logs[-2]:
                    break
                j += 1
            # number of cyclic factors of order >= ell^j
            counts = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
            exps = []
            for j in range(len(counts)):
                nxt = counts[j + 1] if j + 1 < len(counts) else 0
                exps.extend([j + 1] * (counts[j] - nxt))
            parts.append((ell, sorted(exps, reverse=True)))
        width = max(len(e) for _, e in parts)
        factors = [1] * width
        for ell, exps in parts:
            for i, e in enumerate(exps):
                factors[i] *= ell ** e
        return tuple(sorted(factors))

    def dd_trivial(self, n: int) -> bool:
        """d o d sends every unit of C^n to 1 (exhaustive)."""
        U = self.power_ring(n).units()
        DD = self.d(n + 1, self.d(n, U))
        T = self.power_ring(n + 2)
        return bool(np.all(DD == T.one(len(U))))


def amitsur_cohomology(p: int, r: int, D: int) -> list[FiniteAbelianGroup]:
    """H^0..H^D of the Amitsur complex of F_{p^r} over F_p."""
    if D > 3:
        raise TooLarge("top degree above 3 is not supported")
    cx = AmitsurComplex(p, r)
    return [cx.cohomology(k) for k in range(D + 1)]
