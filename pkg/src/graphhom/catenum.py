"""
Objects and morphisms of the fat-graph categories.

``M(g, n)`` has the marked fat graphs of genus ``g`` with ``n`` boundary
components and all valences >= 3.  Morphisms are composites of edge
contractions and marking-preserving automorphisms.  Passing
``max_bivalent=k`` also admits graphs carrying up to ``k`` two-valent
vertices (the truncation of the category with two-valent vertices and no
insertions); contractions never add vertices, so the truncation is closed
under all morphisms.

A morphism is stored as the partial dart map it induces: darts of contracted
edges go to ``None``, every other dart goes to a dart of the target.  Its
map on edges and vertices is derived from that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .fatgraph import (
    FatGraph, canonical_form, canonical_key, contract_edges, insert_bivalent,
    invariants, is_forest, isomorphisms, _induced_emap,
)


class UnsupportedSignature(ValueError):
    code = "unsupported-signature"


class NotComposable(ValueError):
    code = "not-composable"


def check_signature(genus: int, boundaries: int) -> None:
    if boundaries >= 1 and genus >= 1:
        return
    if genus == 0 and boundaries >= 3:
        return
    raise UnsupportedSignature(f"(g={genus}, n={boundaries}) is excluded; need g>=1, n>=1 or g=0, n>=3")


def max_edges(genus: int, boundaries: int) -> int:
    return 6 * genus + 3 * boundaries - 6


# -- enumeration -------------------------------------------------------------

def _rotation_systems(darts: list[int], min_len: int, max_len: int | None = None):
    """All permutations of ``darts`` whose cycles have length >= ``min_len``."""
    if not darts:
        yield []
        return
    first, rest = darts[0], darts[1:]
    top = len(darts) if max_len is None else min(max_len, len(darts))
    for size in range(min_len, top + 1):
        if len(darts) - size and len(darts) - size < min_len:
            continue
        for others in itertools.combinations(rest, size - 1):
            remaining = [d for d in rest if d not in others]
            for order in itertools.permutations(others):
                for tail in _rotation_systems(remaining, min_len, max_len):
                    yield [(first,) + order] + tail


def _labelings(g: FatGraph):
    orbits = g.boundary_orbits
    n = len(orbits)
    for perm in itertools.permutations(range(1, n + 1)):
        yield g.with_labels({perm[i]: orb[0] for i, orb in enumerate(orbits)})


def _dedup_labeled(graphs) -> list[FatGraph]:
    seen = {}
    for g in graphs:
        h, code = canonical_form(g, labeled=True)
        seen.setdefault(code, h)
    return [seen[k] for k in sorted(seen)]


def enumerate_unlabeled(genus: int, boundaries: int, min_valence: int = 3,
                        max_valence: int | None = None) -> list[FatGraph]:
    """Connected fat graphs with the given invariants up to unmarked isomorphism."""
    found = {}
    top = max_edges(genus, boundaries)
    for E in range(1, top + 1):
        V = E + 2 - 2 * genus - boundaries
        if V < 1 or 2 * E < min_valence * V:
            continue
        darts = list(range(2 * E))
        for cycles in _rotation_systems(darts, min_valence, max_valence):
            if len(cycles) != V:
                continue
            g = FatGraph.from_cycles(cycles, dart_count=2 * E)
            if len(g.boundary_orbits) != boundaries:
                continue
            if not _connected(g):
                continue
            h, code = canonical_form(g, labeled=False)
            found.setdefault(code, h)
    return [found[k] for k in sorted(found)]


def _connected(g: FatGraph) -> bool:
    seen = {0}
    todo = [0]
    while todo:
        d = todo.pop()
        for e in (g.sigma[d], d ^ 1):
            if e not in seen:
                seen.add(e)
                todo.append(e)
    return len(seen) == g.dart_count


def enumerate_objects(genus: int, boundaries: int) -> list[FatGraph]:
    """One labeled representative per class of M(g, n), sorted by canonical key."""
    check_signature(genus, boundaries)
    unl = enumerate_unlabeled(genus, boundaries)
    return _dedup_labeled(lab for g in unl for lab in _labelings(g))


def with_bivalent(objects: list[FatGraph], max_bivalent: int) -> list[FatGraph]:
    """Close ``objects`` under inserting up to ``max_bivalent`` two-valent vertices."""
    level = _dedup_labeled(objects)
    out = list(level)
    for _ in range(max_bivalent):
        nxt = _dedup_labeled(insert_bivalent(g, e)[0] for g in level for e in range(g.edge_count))
        out.extend(nxt)
        level = nxt
    return _dedup_labeled(out)


def enumerate_23(genus: int, boundaries: int) -> list[FatGraph]:
    """Marked graphs with valences in {2, 3} where every edge joins a 2- and a 3-valent vertex.

    Such a graph is a trivalent graph with every edge subdivided exactly once.
    """
    check_signature(genus, boundaries)
    out = []
    for g in enumerate_objects(genus, boundaries):
        if any(len(c) != 3 for c in g.vertices):
            continue
        h = g
        for e in range(g.edge_count):
            h, _ = insert_bivalent(h, e)
        out.append(h)
    return _dedup_labeled(out)


def is_23(g: FatGraph) -> bool:
    val = [len(c) for c in g.vertices]
    if any(v not in (2, 3) for v in val):
        return False
    for e in range(g.edge_count):
        a, b = g.vertex_of[2 * e], g.vertex_of[2 * e + 1]
        if val[a] == val[b]:
            return False
    return True


# -- morphisms ---------------------------------------------------------------

@dataclass(frozen=True)
class CatMorphism:
    source: int
    target: int
    dart_map: tuple  # entries: target dart or None
    emap: tuple[int, ...] = field(compare=False)
    contracted: tuple[int, ...] = field(compare=False, default=())

    @property
    def is_identity(self) -> bool:
        return (self.source == self.target and not self.contracted
                and all(d == i for i, d in enumerate(self.dart_map)))

    @property
    def key(self):
        return (self.source, self.target, self.dart_map)


def _compose_maps(outer, inner):
    return tuple(None if x is None else outer[x] for x in inner)


def hom_set_graphs(src: FatGraph, tgt: FatGraph):
    """All morphisms ``src -> tgt`` as ``(dart_map, emap, contracted_edges)``."""
    k = src.edge_count - tgt.edge_count
    if k < 0 or len(src.boundary_orbits) != len(tgt.boundary_orbits):
        return []
    if invariants(src).genus != invariants(tgt).genus:
        return []
    found = {}
    non_loops = [e for e in range(src.edge_count) if not src.is_loop(e)]
    for S in itertools.combinations(non_loops, k):
        if not is_forest(src, S):
            continue
        c = contract_edges(src, S)
        for iso in isomorphisms(c.graph, tgt, label_preserving=True):
            dm = _compose_maps(iso.map, c.dart_map)
            if dm not in found:
                found[dm] = (dm, _induced_emap(src, tgt, dm), tuple(S))
    return [found[k] for k in sorted(found, key=_sort_key)]


def _sort_key(dm):
    return tuple(-1 if x is None else x for x in dm)


def hom_set(cat: "CategorySkeleton", src: int, tgt: int) -> list[CatMorphism]:
    return cat.hom(src, tgt)


def compose(f: CatMorphism, g: CatMorphism) -> CatMorphism:
    """``f o g`` (first ``g``, then ``f``)."""
    if g.target != f.source:
        raise NotComposable(f"target {g.target} of g differs from source {f.source} of f")
    dm = _compose_maps(f.dart_map, g.dart_map)
    # contracted edges are those of the source whose darts vanish
    contracted = tuple(e for e in range(len(dm) // 2) if dm[2 * e] is None)
    emap = tuple(f.emap[x] for x in g.emap)
    return CatMorphism(g.source, f.target, dm, emap, contracted)


@dataclass
class CategorySkeleton:
    genus: int
    boundaries: int
    objects: list[FatGraph]
    homs: dict[tuple[int, int], list[CatMorphism]]
    max_bivalent: int = 0

    @cached_property
    def keys(self) -> list[bytes]:
        return [canonical_key(g) for g in self.objects]

    @cached_property
    def index(self) -> dict[tuple[int, int, tuple], CatMorphism]:
        return {m.key: m for ms in self.homs.values() for m in ms}

    def hom(self, a: int, b: int) -> list[CatMorphism]:
        return self.homs.get((a, b), [])

    def identity(self, a: int) -> CatMorphism:
        g = self.objects[a]
        return self.index[(a, a, tuple(range(g.dart_count)))]

    def morphisms(self):
        for (a, b) in sorted(self.homs):
            yield from self.homs[(a, b)]

    def morphisms_from(self, a: int):
        return self._out[a]

    @cached_property
    def _out(self):
        out = {i: [] for i in range(len(self.objects))}
        for m in self.morphisms():
            out[m.source].append(m)
        return out

    def lookup(self, m: CatMorphism) -> CatMorphism:
        return self.index[m.key]

    def verify(self) -> list[str]:
        """Exhaustive closure, unit and associativity check."""
        problems = []
        ids = {}
        for a in range(len(self.objects)):
            try:
                ids[a] = self.identity(a)
            except KeyError:
                problems.append(f"object {a} has no identity")
        for m in self.morphisms():
            for e in (compose(ids[m.target], m), compose(m, ids[m.source])):
                if e.key != m.key:
                    problems.append(f"unit law fails for {m.key}")
        for g_ in self.morphisms():
            for f in self.morphisms_from(g_.target):
                fg = compose(f, g_)
                if fg.key not in self.index:
                    problems.append(f"composite {fg.key} missing from hom table")
                    continue
                if self.index[fg.key].emap != fg.emap:
                    problems.append(f"composite {fg.key} has inconsistent element map")
                for h in self.morphisms_from(f.target):
                    if compose(h, fg).key != compose(compose(h, f), g_).key:
                        problems.append("associativity fails")
        return problems

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "boundaries": self.boundaries,
            "max_bivalent": self.max_bivalent,
            "objects": [
                dict(g.to_dict(), key=self.keys[i].decode(),
                     invariants=invariants(g).__dict__)
                for i, g in enumerate(self.objects)
            ],
            "homs": [
                {"source": a, "target": b,
                 "emaps": [list(m.emap) for m in ms],
                 "dart_maps": [[-1 if x is None else x for x in m.dart_map] for m in ms]}
                for (a, b), ms in sorted(self.homs.items())
            ],
        }


def build_category(genus: int, boundaries: int, max_bivalent: int = 0) -> CategorySkeleton:
    objects = enumerate_objects(genus, boundaries)
    if max_bivalent:
        objects = with_bivalent(objects, max_bivalent)
    homs = {}
    for a, src in enumerate(objects):
        for b, tgt in enumerate(objects):
            ms = [CatMorphism(a, b, dm, em, S) for dm, em, S in hom_set_graphs(src, tgt)]
            if ms:
                homs[(a, b)] = ms
    return CategorySkeleton(genus, boundaries, objects, homs, max_bivalent)
