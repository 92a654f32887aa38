"""
Fat graphs as combinatorial maps.

Darts are the integers ``0 .. dart_count-1``; dart ``d`` is paired with
``d ^ 1`` so edge ``i`` owns darts ``2i`` and ``2i+1``.  ``sigma[d]`` is the
next dart counterclockwise around the vertex of ``d``.  Boundary components
are the cycles of ``phi = sigma o alpha``, i.e. ``phi(d) = sigma[d ^ 1]``.

A marking assigns the labels ``1..n`` to the boundary cycles.  It is stored
as ``(label, dart)`` pairs where ``dart`` is the minimal dart of the cycle,
the same shape used by the JSON file format.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class FatGraphError(ValueError):
    code = "fatgraph"


class LoopContraction(FatGraphError):
    code = "loop-contraction"


class NotBivalent(FatGraphError):
    code = "not-bivalent"


class WouldBeEdgeless(FatGraphError):
    code = "would-be-edgeless"


class NonIntegralGenus(FatGraphError):
    code = "non-integral-genus"


def cycles_of(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of a permutation, each started at its minimal element, sorted."""
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        d = start
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = perm[d]
        out.append(tuple(cyc))
    return out


def perm_from_cycles(n: int, cycles: Iterable[Iterable[int]]) -> tuple[int, ...]:
    """Permutation list from cycles; darts not covered get -1."""
    perm = [-1] * n
    for cyc in cycles:
        cyc = list(cyc)
        for i, d in enumerate(cyc):
            if not 0 <= d < n:
                raise FatGraphError(f"dart {d} out of range 0..{n - 1}")
            perm[d] = cyc[(i + 1) % len(cyc)]
    return tuple(perm)


def invert(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


@dataclass(frozen=True)
class Invariants:
    V: int
    E: int
    n: int
    genus: int
    euler: int


@dataclass(frozen=True)
class FatGraph:
    dart_count: int
    sigma: tuple[int, ...]
    marks: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_cycles(cls, cycles, labels=None, dart_count=None) -> "FatGraph":
        cycles = [tuple(c) for c in cycles]
        if dart_count is None:
            dart_count = sum(len(c) for c in cycles)
            if dart_count % 2:
                dart_count += 1
        sigma = perm_from_cycles(dart_count, cycles)
        g = cls(dart_count, sigma)
        if labels is not None:
            g = g.with_labels(labels)
        return g

    def with_labels(self, labels) -> "FatGraph":
        """Attach labels given as ``{label: dart}``; any dart of the cycle is accepted."""
        if isinstance(labels, dict):
            items = [(int(k), int(v)) for k, v in labels.items()]
        else:
            items = [(int(k), int(v)) for k, v in labels]
        if self.is_permutation():
            mins = self._orbit_min
            items = [(lab, mins[d]) for lab, d in items]
        return FatGraph(self.dart_count, self.sigma, tuple(sorted(items)))

    def with_face_labels(self, face_label: Sequence[int]) -> "FatGraph":
        """Attach labels given per dart (must be constant on boundary cycles)."""
        marks = {}
        for orb in self.boundary_orbits:
            marks[face_label[orb[0]]] = orb[0]
        return FatGraph(self.dart_count, self.sigma, tuple(sorted(marks.items())))

    def unlabeled(self) -> "FatGraph":
        return FatGraph(self.dart_count, self.sigma)

    # -- basic structure ---------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self.dart_count // 2

    def is_permutation(self) -> bool:
        return (len(self.sigma) == self.dart_count
                and sorted(self.sigma) == list(range(self.dart_count)))

    @cached_property
    def phi(self) -> tuple[int, ...]:
        s = self.sigma
        return tuple(s[d ^ 1] for d in range(self.dart_count))

    @cached_property
    def sigma_inv(self) -> tuple[int, ...]:
        return invert(self.sigma)

    @cached_property
    def phi_inv(self) -> tuple[int, ...]:
        return invert(self.phi)

    @cached_property
    def vertices(self) -> list[tuple[int, ...]]:
        return cycles_of(self.sigma)

    @cached_property
    def boundary_orbits(self) -> list[tuple[int, ...]]:
        return cycles_of(self.phi)

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        out = [0] * self.dart_count
        for i, cyc in enumerate(self.vertices):
            for d in cyc:
                out[d] = i
        return tuple(out)

    @cached_property
    def _orbit_min(self) -> tuple[int, ...]:
        out = [0] * self.dart_count
        for orb in cycles_of(self.phi):
            for d in orb:
                out[d] = orb[0]
        return tuple(out)

    @cached_property
    def face_label(self) -> tuple[int, ...]:
        """Boundary label of each dart (0 when unmarked)."""
        by_min = {d: lab for lab, d in self.marks}
        mins = self._orbit_min
        return tuple(by_min.get(mins[d], 0) for d in range(self.dart_count))

    @property
    def labels(self) -> dict[int, int]:
        return dict(self.marks)

    def orbit_of_label(self, label: int) -> tuple[int, ...]:
        d0 = self.labels[label]
        for orb in self.boundary_orbits:
            if orb[0] == d0:
                return orb
        raise KeyError(label)

    def valence(self, vertex: int) -> int:
        return len(self.vertices[vertex])

    def is_loop(self, edge: int) -> bool:
        v = self.vertex_of
        return v[2 * edge] == v[2 * edge + 1]

    def edge_of_dart(self, d: int) -> int:
        return d >> 1

    def __str__(self):
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.vertices)
        lab = ",".join(f"{k}:{d}" for k, d in self.marks)
        return f"FatGraph{cyc}[{lab}]" if lab else f"FatGraph{cyc}"

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        out = {"darts": self.dart_count, "sigma": [list(c) for c in self.vertices]}
        if self.marks:
            out["labels"] = {str(k): d for k, d in self.marks}
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FatGraph":
        g = cls.from_cycles(data["sigma"], dart_count=int(data["darts"]))
        if data.get("labels"):
            g = g.with_labels({int(k): int(v) for k, v in data["labels"].items()})
        return g

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FatGraph":
        return cls.from_dict(json.loads(text))


# -- validation and invariants ---------------------------------------------

def validate(g: FatGraph, allow_univalent: bool = False) -> list[str]:
    """Every violated invariant of ``g``; empty means valid."""
    out = []
    if g.dart_count < 0 or g.dart_count % 2:
        out.append(f"dart count {g.dart_count} is not a nonnegative even integer")
        return out
    if not g.is_permutation():
        missing = sorted(set(range(g.dart_count)) - set(g.sigma))
        out.append("sigma not a permutation of dart set"
                   + (f" (missing darts {missing})" if missing else ""))
        return out
    if g.dart_count == 0:
        out.append("empty graph")
        return out
    if not _connected(g):
        out.append("not connected")
    if not allow_univalent:
        for i, cyc in enumerate(g.vertices):
            if len(cyc) == 1:
                out.append(f"vertex {i} (dart {cyc[0]}) has valence one")
    if g.marks:
        orbit_mins = {orb[0] for orb in g.boundary_orbits}
        labs = [lab for lab, _ in g.marks]
        darts = [d for _, d in g.marks]
        n = len(orbit_mins)
        if sorted(labs) != list(range(1, n + 1)):
            out.append(f"labels {sorted(labs)} are not exactly 1..{n}")
        for lab, d in g.marks:
            if d not in orbit_mins:
                out.append(f"label {lab} points at dart {d}, not the minimal dart of a boundary orbit")
        if len(set(darts)) != len(darts):
            out.append("two labels on one boundary orbit")
        unlabeled = orbit_mins - set(darts)
        for d in sorted(unlabeled):
            out.append(f"boundary orbit of dart {d} has no label")
    if not out:
        V, E, n = len(g.vertices), g.edge_count, len(g.boundary_orbits)
        twice = 2 - n - (V - E)
        if twice % 2 or twice < 0:
            out.append(f"Euler relation gives non-integral genus (V={V}, E={E}, n={n})")
    return out


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


def boundary_orbits(g: FatGraph) -> list[tuple[int, ...]]:
    return list(g.boundary_orbits)


def invariants(g: FatGraph) -> Invariants:
    V = len(g.vertices)
    E = g.edge_count
    n = len(g.boundary_orbits)
    euler = V - E
    twice = 2 - n - euler
    if twice % 2 or twice < 0:
        raise NonIntegralGenus(f"V={V}, E={E}, n={n}")
    return Invariants(V=V, E=E, n=n, genus=twice // 2, euler=euler)


# -- element maps ------------------------------------------------------------
# Elements of E(G) u V(G) are encoded as integers: edge i -> i, vertex j -> E + j.

def _relabel(g_sigma: Sequence[int], removed: set[int], dart_count: int):
    """Order-preserving renumbering of darts after deleting whole edges."""
    keep = [d for d in range(dart_count) if d not in removed]
    new_of = {d: i for i, d in enumerate(keep)}
    sigma = tuple(new_of[g_sigma[d]] for d in keep)
    return sigma, new_of


def _transport_marks(old: FatGraph, new_sigma, new_of, new_count) -> tuple:
    if not old.marks:
        return ()
    tmp = FatGraph(new_count, new_sigma)
    fl = old.face_label
    per_dart = [0] * new_count
    for d, nd in new_of.items():
        per_dart[nd] = fl[d]
    return tmp.with_face_labels(per_dart).marks


@dataclass(frozen=True)
class Contraction:
    graph: FatGraph
    emap: tuple[int, ...]
    dart_map: tuple[int | None, ...]
    label_map: dict[int, int] = field(default_factory=dict)


def contract(g: FatGraph, edge: int) -> Contraction:
    """Shrink a non-loop edge; returns the new graph and the induced maps."""
    d, dp = 2 * edge, 2 * edge + 1
    if g.is_loop(edge):
        raise LoopContraction(f"edge {edge} is a loop")
    s = list(g.sigma)
    sinv = g.sigma_inv
    pd, pdp = sinv[d], sinv[dp]
    sd, sdp = s[d], s[dp]
    # splice the two rotations; valence-one ends need no predecessor fix
    if pd != d:
        s[pd] = sdp if sdp != dp else sd
    if pdp != dp:
        s[pdp] = sd if sd != d else sdp
    if pd == d and pdp == dp:
        raise WouldBeEdgeless("contracting the only edge between two univalent vertices")
    sigma, new_of = _relabel(s, {d, dp}, g.dart_count)
    n_new = g.dart_count - 2
    new = FatGraph(n_new, sigma, _transport_marks(g, sigma, new_of, n_new))
    dart_map = tuple(new_of.get(x) for x in range(g.dart_count))
    emap = _induced_emap(g, new, dart_map, merged_from=edge)
    return Contraction(new, emap, dart_map, {lab: lab for lab, _ in g.marks})


def _induced_emap(src: FatGraph, tgt: FatGraph, dart_map, merged_from=None) -> tuple[int, ...]:
    """E u V map induced by a partial dart map (None = contracted dart)."""
    E = src.edge_count
    Et = tgt.edge_count
    out = []
    for e in range(E):
        x = dart_map[2 * e]
        if x is None:
            # the edge collapses to the vertex its neighbours land on
            out.append(None)
        else:
            out.append(x >> 1)
    vmap = []
    for cyc in src.vertices:
        img = None
        for x in cyc:
            y = dart_map[x]
            if y is not None:
                img = Et + tgt.vertex_of[y]
                break
        vmap.append(img)
    # vertices whose darts were all contracted, and contracted edges, resolve
    # through the contracted-edge connectivity
    _resolve_contracted(src, dart_map, out, vmap, Et, tgt)
    return tuple(out) + tuple(vmap)


def _resolve_contracted(src, dart_map, emap, vmap, Et, tgt):
    E = src.edge_count
    changed = True
    while changed:
        changed = False
        for e in range(E):
            if dart_map[2 * e] is not None:
                continue
            a = src.vertex_of[2 * e]
            b = src.vertex_of[2 * e + 1]
            img = vmap[a] if vmap[a] is not None else vmap[b]
            if img is None:
                continue
            for v in (a, b):
                if vmap[v] is None:
                    vmap[v] = img
                    changed = True
            if emap[e] is None:
                emap[e] = img
                changed = True
    if any(x is None for x in emap) or any(x is None for x in vmap):
        raise FatGraphError("contracted forest covers a whole component")


def contract_edges(g: FatGraph, edges: Iterable[int]) -> Contraction:
    """Contract a forest of edges; the result does not depend on the order."""
    edges = sorted(set(edges))
    cur = g
    # track darts through successive contractions
    track = list(range(g.dart_count))
    for k, e in enumerate(edges):
        # edge e has been renumbered by previous contractions
        cur_e = track[2 * e]
        if cur_e is None:
            raise FatGraphError(f"edge {e} vanished during contraction")
        c = contract(cur, cur_e >> 1)
        track = [None if t is None else c.dart_map[t] for t in track]
        cur = c.graph
    dart_map = tuple(track)
    emap = _induced_emap(g, cur, dart_map)
    return Contraction(cur, emap, dart_map, {lab: lab for lab, _ in g.marks})


def is_forest(g: FatGraph, edges: Iterable[int]) -> bool:
    parent = list(range(len(g.vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = find(g.vertex_of[2 * e]), find(g.vertex_of[2 * e + 1])
        if a == b:
            return False
        parent[a] = b
    return True


# -- bivalent vertices -------------------------------------------------------

def insert_bivalent(g: FatGraph, edge: int) -> tuple[FatGraph, int]:
    """Subdivide ``edge`` by a new two-valent vertex.

    Edge ``edge`` keeps its first dart where it was and its second dart moves
    to the new vertex; the new edge ``E`` runs from the new vertex to where
    the second dart used to sit.
    """
    d, dp = 2 * edge, 2 * edge + 1
    E = g.edge_count
    a, b = 2 * E, 2 * E + 1
    s = list(g.sigma) + [0, 0]
    pdp = g.sigma_inv[dp]
    if pdp == dp:
        s[b] = b
    else:
        s[pdp] = b
        s[b] = g.sigma[dp]
    s[dp] = a
    s[a] = dp
    new = FatGraph(g.dart_count + 2, tuple(s))
    if g.marks:
        fl = list(g.face_label) + [0, 0]
        # a inherits the face of d (phi(d) = a), b the face of dp's predecessor
        fl[a] = g.face_label[d]
        fl[b] = g.face_label[dp]
        new = new.with_face_labels(fl)
    return new, new.vertex_of[a]


def erase_bivalent(g: FatGraph, vertex: int) -> FatGraph:
    """Fuse the two edges at a two-valent vertex into one."""
    cyc = g.vertices[vertex]
    if len(cyc) != 2:
        raise NotBivalent(f"vertex {vertex} has valence {len(cyc)}")
    x, y = cyc
    if x ^ 1 == y:
        raise WouldBeEdgeless("erasing the vertex of a single loop leaves no edge")
    xp, yp = x ^ 1, y ^ 1
    # dart x replaces yp at yp's vertex; edge of y disappears
    s = list(g.sigma)
    if s[yp] == yp:
        s[x] = x
    else:
        s[g.sigma_inv[yp]] = x
        s[x] = s[yp]
    sigma, new_of = _relabel(s, {y, yp}, g.dart_count)
    n_new = g.dart_count - 2
    new = FatGraph(n_new, sigma)
    if g.marks:
        fl = [0] * n_new
        old = g.face_label
        for dd, nd in new_of.items():
            fl[nd] = old[dd]
        # x now bounds the face yp used to
        fl[new_of[x]] = old[yp]
        new = new.with_face_labels(fl)
    return new


# -- duality -----------------------------------------------------------------

def dual(g: FatGraph) -> FatGraph:
    """Same darts and pairing, vertices become boundary cycles."""
    return FatGraph(g.dart_count, g.phi)


# -- isomorphisms ------------------------------------------------------------

@dataclass(frozen=True)
class DartBijection:
    source: FatGraph
    target: FatGraph
    map: tuple[int, ...]

    @property
    def label_preserving(self) -> bool:
        fs, ft = self.source.face_label, self.target.face_label
        return all(fs[d] == ft[self.map[d]] for d in range(self.source.dart_count))

    def emap(self) -> tuple[int, ...]:
        return _induced_emap(self.source, self.target, self.map)


def _extend(g1: FatGraph, g2: FatGraph, root_image: int):
    """The unique map commuting with sigma and alpha sending dart 0 to ``root_image``."""
    n = g1.dart_count
    m = [-1] * n
    used = [False] * n
    m[0] = root_image
    used[root_image] = True
    todo = [0]
    s1, s2 = g1.sigma, g2.sigma
    while todo:
        d = todo.pop()
        for e, img in ((s1[d], s2[m[d]]), (d ^ 1, m[d] ^ 1)):
            if m[e] == -1:
                if used[img]:
                    return None
                m[e] = img
                used[img] = True
                todo.append(e)
            elif m[e] != img:
                return None
    if -1 in m:
        return None
    return tuple(m)


def isomorphisms(g1: FatGraph, g2: FatGraph, label_preserving: bool = True) -> list[DartBijection]:
    if g1.dart_count != g2.dart_count or g1.dart_count == 0:
        return []
    if sorted(map(len, g1.vertices)) != sorted(map(len, g2.vertices)):
        return []
    if sorted(map(len, g1.boundary_orbits)) != sorted(map(len, g2.boundary_orbits)):
        return []
    out = []
    for t in range(g2.dart_count):
        m = _extend(g1, g2, t)
        if m is None:
            continue
        iso = DartBijection(g1, g2, m)
        if label_preserving and not iso.label_preserving:
            continue
        out.append(iso)
    return out


def automorphisms(g: FatGraph, label_preserving: bool = True) -> list[DartBijection]:
    return isomorphisms(g, g, label_preserving)


# -- canonical form ----------------------------------------------------------

def _rooted_relabeling(g: FatGraph, root: int) -> list[int]:
    """Breadth-first numbering from ``root`` that keeps the (2i, 2i+1) pairing."""
    n = g.dart_count
    new = [-1] * n
    order = [root, root ^ 1]
    new[root], new[root ^ 1] = 0, 1
    nxt = 2
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        e = g.sigma[d]
        if new[e] == -1:
            new[e], new[e ^ 1] = nxt, nxt + 1
            nxt += 2
            order.extend((e, e ^ 1))
    return new


def _encode(g: FatGraph, new: list[int], labeled: bool) -> tuple:
    n = g.dart_count
    old_of = [0] * n
    for d, k in enumerate(new):
        old_of[k] = d
    sig = tuple(new[g.sigma[old_of[k]]] for k in range(n))
    if labeled:
        fl = g.face_label
        return (n,) + sig + tuple(fl[old_of[k]] for k in range(n))
    return (n,) + sig


def canonical_form(g: FatGraph, labeled: bool = True) -> tuple[FatGraph, tuple]:
    """Relabeled copy of ``g`` minimizing the rooted encoding, and that encoding."""
    best = None
    best_new = None
    for r in range(g.dart_count):
        new = _rooted_relabeling(g, r)
        if -1 in new:
            raise FatGraphError("graph is not connected")
        code = _encode(g, new, labeled)
        if best is None or code < best:
            best, best_new = code, new
    n = g.dart_count
    old_of = [0] * n
    for d, k in enumerate(best_new):
        old_of[k] = d
    sig = tuple(best_new[g.sigma[old_of[k]]] for k in range(n))
    h = FatGraph(n, sig)
    if labeled and g.marks:
        fl = g.face_label
        h = h.with_face_labels([fl[old_of[k]] for k in range(n)])
    return h, best


def canonical_key(g: FatGraph, labeled: bool = True) -> bytes:
    _, code = canonical_form(g, labeled)
    return ",".join(map(str, code)).encode()


# -- DOT export --------------------------------------------------------------

_COLORS = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"]


def to_dot(g: FatGraph) -> str:
    lines = ["graph fatgraph {"]
    for i, cyc in enumerate(g.vertices):
        lines.append(f'  v{i} [label="v{i} ({" ".join(map(str, cyc))})"];')
    fl = g.face_label
    for e in range(g.edge_count):
        a, b = g.vertex_of[2 * e], g.vertex_of[2 * e + 1]
        lines.append(f'  v{a} -- v{b} [label="e{e}: {2 * e}|{2 * e + 1}"];')
    for k, orb in enumerate(g.boundary_orbits):
        lab = fl[orb[0]] or f"#{k}"
        color = _COLORS[k % len(_COLORS)]
        walk = " ".join(map(str, orb))
        lines.append(f'  // boundary {lab}: ({walk})')
        for d in orb:
            a, b = g.vertex_of[d], g.vertex_of[d ^ 1]
            lines.append(f'  v{a} -- v{b} [color={color}, style=dashed, label="b{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
