"""
Homology of a finite category with coefficients in a functor to vector spaces,
through the normalized bar complex, plus Hochschild and cyclic homology.

A ``p``-chain is a string of non-identity morphisms
``X_p -> X_{p-1} -> ... -> X_0`` tensored with a basis vector of ``G(X_p)``.
Faces: ``d_0`` drops ``X_0``, ``d_j`` (``0 < j < p``) composes the two
morphisms at ``X_j`` (zero when the composite is an identity), ``d_p`` pushes
the coefficient along the last morphism.  ``d = sum (-1)^j d_j``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebra import AlgebraPresentation, Subspace, ground_field, opposite, tensor
from .algfun import adapted_algebra, coeff_map_columns, coeff_space, relative_indices
from .catenum import CategorySkeleton, build_category, compose
from .exactla import ChainComplex, RationalMatrix, rank, rank_of_rows

log = logging.getLogger(__name__)


class NotFunctorial(ValueError):
    code = "not-functorial"


@dataclass
class Coefficients:
    """A functor on a category skeleton: object dims and sparse morphism columns."""

    dims: list[int]
    columns: dict[int, dict[int, dict[int, Fraction]]]  # morphism id -> columns

    def apply(self, mid: int, vec_index: int) -> dict[int, Fraction]:
        return self.columns[mid].get(vec_index, {})


@dataclass
class IndexedCategory:
    """Morphisms of a skeleton numbered 0..N-1 with a composition table."""

    cat: CategorySkeleton
    morphs: list = field(default_factory=list)
    ids: set = field(default_factory=set)
    into: dict = field(default_factory=dict)  # target -> non-identity morphism ids
    comp: dict = field(default_factory=dict)  # (f, g) -> id of f o g

    @classmethod
    def build(cls, cat: CategorySkeleton) -> "IndexedCategory":
        ic = cls(cat)
        ic.morphs = list(cat.morphisms())
        num = {m.key: i for i, m in enumerate(ic.morphs)}
        ic.ids = {i for i, m in enumerate(ic.morphs) if m.is_identity}
        for i, m in enumerate(ic.morphs):
            if i not in ic.ids:
                ic.into.setdefault(m.target, []).append(i)
        for i, g in enumerate(ic.morphs):
            for f in cat.morphisms_from(g.target):
                ic.comp[(num[f.key], i)] = num[compose(f, g).key]
        return ic


def trivial_coefficients(ic: IndexedCategory) -> Coefficients:
    dims = [1] * len(ic.cat.objects)
    cols = {i: {0: {0: Fraction(1)}} for i in range(len(ic.morphs))}
    return Coefficients(dims, cols)


def algebra_coefficients(ic: IndexedCategory, algebras) -> Coefficients:
    cat = ic.cat
    dims = [coeff_space(g, algebras).dim for g in cat.objects]
    cols = {}
    for i, m in enumerate(ic.morphs):
        cols[i] = coeff_map_columns(cat.objects[m.source], cat.objects[m.target], m.dart_map, algebras)
    return Coefficients(dims, cols)


def restrict_coefficients(G: Coefficients, keep: list[list[int]]) -> Coefficients:
    """Restrict to coordinate subspaces ``keep[obj]`` (must be preserved by every map)."""
    pos = [{x: k for k, x in enumerate(kp)} for kp in keep]
    dims = [len(kp) for kp in keep]
    cols = {}
    return _Restricted(dims, cols, G, keep, pos)


class _Restricted(Coefficients):
    def __init__(self, dims, cols, base, keep, pos):
        super().__init__(dims, cols)
        self.base, self.keep, self.pos = base, keep, pos
        self.targets = {}

    def bind(self, ic: IndexedCategory):
        for i, m in enumerate(ic.morphs):
            tpos = self.pos[m.target]
            out = {}
            for k, x in enumerate(self.keep[m.source]):
                vec = self.base.columns[i].get(x, {})
                try:
                    out[k] = {tpos[t]: v for t, v in vec.items()}
                except KeyError as exc:
                    raise NotFunctorial(f"morphism {i} leaves the relative subspace") from exc
            self.columns[i] = out
        return self


def check_functorial(ic: IndexedCategory, G: Coefficients, limit: int | None = None) -> None:
    """Verify ``G(f o g) = G(f) G(g)`` on composable pairs (all, or the first ``limit``)."""
    for n, ((f, g), fg) in enumerate(sorted(ic.comp.items())):
        if limit is not None and n >= limit:
            break
        for j in range(G.dims[ic.morphs[g].source]):
            left = G.apply(fg, j)
            right = {}
            for k, x in G.apply(g, j).items():
                for t, y in G.apply(f, k).items():
                    right[t] = right.get(t, 0) + x * y
            right = {t: v for t, v in right.items() if v}
            if left != right:
                raise NotFunctorial(f"G({f} o {g}) != G({f}) G({g}) on basis vector {j}")


def chains(ic: IndexedCategory, p: int) -> list[tuple[int, ...]]:
    """Non-degenerate p-chains ``(f_1, ..., f_p)`` with ``f_k: X_k -> X_{k-1}``."""
    if p == 0:
        return [(-1 - x,) for x in range(len(ic.cat.objects))]
    out = [(i,) for i in range(len(ic.morphs)) if i not in ic.ids]
    for _ in range(p - 1):
        nxt = []
        for ch in out:
            src = ic.morphs[ch[-1]].source
            for j in ic.into.get(src, ()):
                nxt.append(ch + (j,))
        out = nxt
    return sorted(out)


def _deep_object(ic: IndexedCategory, ch) -> int:
    if ch[0] < 0:
        return -1 - ch[0]
    return ic.morphs[ch[-1]].source


@dataclass
class BarComplex:
    complex: ChainComplex
    chain_counts: list[int]
    seconds: list[float]


def bar_complex(ic: IndexedCategory, G: Coefficients, D: int = 3) -> BarComplex:
    """Chain groups in degrees 0..D and differentials d_1..d_D."""
    dims, offsets, all_chains, counts = [], [], [], []
    for p in range(D + 1):
        ch = chains(ic, p)
        off, tot = {}, 0
        for c in ch:
            off[c] = tot
            tot += G.dims[_deep_object(ic, c)]
        all_chains.append(ch)
        offsets.append(off)
        dims.append(tot)
        counts.append(len(ch))
    d = {}
    seconds = [0.0]
    for p in range(1, D + 1):
        t0 = time.perf_counter()
        m = RationalMatrix(dims[p - 1], dims[p])
        for c in all_chains[p]:
            base = offsets[p][c]
            deep = _deep_object(ic, c)
            faces = []  # (sign, target chain, morphism to apply or None)
            if p == 1:
                f = c[0]
                faces.append((1, (-1 - ic.morphs[f].source,), None))
                faces.append((-1, (-1 - ic.morphs[f].target,), f))
            else:
                faces.append((1, c[1:], None))
                for j in range(1, p):
                    comp = ic.comp[(c[j - 1], c[j])]
                    if comp in ic.ids:
                        continue
                    faces.append(((-1) ** j, c[:j - 1] + (comp,) + c[j + 1:], None))
                faces.append(((-1) ** p, c[:-1], c[-1]))
            for sign, tgt, push in faces:
                tbase = offsets[p - 1][tgt]
                for k in range(G.dims[deep]):
                    col = base + k
                    if push is None:
                        m.add(tbase + k, col, Fraction(sign))
                    else:
                        for t, v in G.apply(push, k).items():
                            m.add(tbase + t, col, sign * v)
        d[p] = m
        seconds.append(time.perf_counter() - t0)
        log.info("degree %d: %d chains, %dx%d matrix", p, counts[p], m.rows, m.cols)
    return BarComplex(ChainComplex(dims, d), counts, seconds)


# -- drivers -----------------------------------------------------------------

_CATS: dict = {}


def indexed_category(genus: int, boundaries: int, max_bivalent: int = 0) -> IndexedCategory:
    key = (genus, boundaries, max_bivalent)
    if key not in _CATS:
        _CATS[key] = IndexedCategory.build(build_category(genus, boundaries, max_bivalent))
    return _CATS[key]


def stable_bivalent(D: int) -> int:
    """Bivalent vertices needed for degrees < D; k of them give degrees 0..k exactly."""
    return max(D - 1, 0)


def graph_homology(genus: int, boundaries: int, algebras, D: int = 3,
                   max_bivalent: int | None = None) -> list[int]:
    """Dimensions of graph homology in degrees 0..D-1.

    By default the category admits up to ``D - 1`` two-valent vertices.
    ``max_bivalent=0`` computes over the trivalent-or-more category alone,
    whose bar complex stops in degree 1 for (0, 3) and misses higher classes.
    """
    if max_bivalent is None:
        max_bivalent = stable_bivalent(D)
    ic = indexed_category(genus, boundaries, max_bivalent)
    G = algebra_coefficients(ic, list(algebras))
    return bar_complex(ic, G, D).complex.homology_dims()


def category_homology(ic: IndexedCategory, G: Coefficients, D: int = 3) -> list[int]:
    return bar_complex(ic, G, D).complex.homology_dims()


def colimit_dim(ic: IndexedCategory, G: Coefficients) -> int:
    """dim of the coequalizer of (+)_m G(src m) => (+)_X G(X), i.e. of the colimit."""
    offs, tot = [], 0
    for d in G.dims:
        offs.append(tot)
        tot += d
    rows = []
    for i, m in enumerate(ic.morphs):
        if i in ic.ids:
            continue
        for k in range(G.dims[m.source]):
            r = {offs[m.source] + k: Fraction(1)}
            for t, v in G.apply(i, k).items():
                key = offs[m.target] + t
                r[key] = r.get(key, 0) - v
            r = {a: b for a, b in r.items() if b}
            if r:
                rows.append(r)
    return tot - rank_of_rows(rows)


# -- Hochschild and cyclic ---------------------------------------------------

def _tensor_basis(dim: int, n: int):
    return list(product(range(dim), repeat=n))


def _index(t, dim):
    out = 0
    for x in t:
        out = out * dim + x
    return out


def _hochschild_b(a: AlgebraPresentation, n: int) -> RationalMatrix:
    """b: A^{(x)(n+1)} -> A^{(x)n}."""
    d = a.dim
    m = RationalMatrix(d ** n, d ** (n + 1))
    for col, t in enumerate(_tensor_basis(d, n + 1)):
        for i in range(n):
            prod = a.mult[t[i]][t[i + 1]]
            for k, c in prod.items():
                tgt = t[:i] + (k,) + t[i + 2:]
                m.add(_index(tgt, d), col, (-1) ** i * c)
        prod = a.mult[t[n]][t[0]]
        for k, c in prod.items():
            tgt = (k,) + t[1:n]
            m.add(_index(tgt, d), col, (-1) ** n * c)
    return m


def hochschild_complex(a: AlgebraPresentation, D: int) -> ChainComplex:
    dims = [a.dim ** (p + 1) for p in range(D + 2)]
    d = {p: _hochschild_b(a, p) for p in range(1, D + 2)}
    return ChainComplex(dims, d)


def hochschild(a: AlgebraPresentation, D: int = 3) -> list[int]:
    """HH_p(a) for p = 0..D."""
    return hochschild_complex(a, D).homology_dims()


def _cyclic_t(a: AlgebraPresentation, n: int) -> RationalMatrix:
    """1 - t on A^{(x)(n+1)}, t(a0..an) = (-1)^n (an, a0, ..., a_{n-1})."""
    d = a.dim
    size = d ** (n + 1)
    m = RationalMatrix(size, size)
    for col, t in enumerate(_tensor_basis(d, n + 1)):
        m.add(col, col, 1)
        rot = (t[n],) + t[:n]
        m.add(_index(rot, d), col, -((-1) ** n))
    return m


def cyclic(a: AlgebraPresentation, D: int = 3) -> list[int]:
    """HC_p(a), p = 0..D, from the Connes quotient complex (char 0)."""
    out = []
    imgs = {p: _cyclic_t(a, p) for p in range(D + 2)}
    rk_img = {p: rank(imgs[p]) for p in imgs}
    # rank of b: C^lambda_p -> C^lambda_{p-1}
    rk_b = {0: 0}
    for p in range(1, D + 2):
        b = _hochschild_b(a, p)
        rows = list(b.transpose().data.values()) + list(imgs[p - 1].transpose().data.values())
        rk_b[p] = rank_of_rows(rows) - rk_img[p - 1]
    for p in range(D + 1):
        dim_q = a.dim ** (p + 1) - rk_img[p]
        out.append(dim_q - rk_b[p] - rk_b[p + 1])
    return out


def graph_homology_02(a1: AlgebraPresentation, a2: AlgebraPresentation, D: int = 3) -> list[int]:
    """The (0,2) case via the cyclic category: HC of ``a1 (x) a2^op``."""
    return cyclic(tensor(a1, opposite(a2)), D)


def tensor_hochschild(algebras, D: int = 3) -> list[int]:
    """Dimensions of the graded tensor product of HH(A_i), degrees 0..D."""
    out = [1] + [0] * D
    for a in algebras:
        h = hochschild(a, D)
        new = [0] * (D + 1)
        for i, x in enumerate(out):
            for j, y in enumerate(h):
                if i + j <= D:
                    new[i + j] += x * y
        out = new
    return out


# -- relative ----------------------------------------------------------------

def relative_coefficients(ic: IndexedCategory, algebras, ideal_index: int, ideal: Subspace):
    algs = list(algebras)
    adapted, idx, _ = adapted_algebra(algs[ideal_index], ideal)
    algs[ideal_index] = adapted
    base = algebra_coefficients(ic, algs)
    keep = [relative_indices(g, algs, ideal_index, idx) for g in ic.cat.objects]
    return restrict_coefficients(base, keep).bind(ic)


def ideal_coefficients(ic: IndexedCategory, algebras, ideal_index: int, ideal: Subspace):
    """Coefficients with ``I^#`` (the augmentation kernel of ``I+``) at the slot."""
    from .algebra import adjoin_unit
    algs = list(algebras)
    adapted, idx, _ = adapted_algebra(algs[ideal_index], ideal)
    sub = _ideal_algebra(adapted, idx)
    iplus = adjoin_unit(sub)
    algs[ideal_index] = iplus
    base = algebra_coefficients(ic, algs)
    keep = [relative_indices(g, algs, ideal_index, range(1, iplus.dim)) for g in ic.cat.objects]
    return restrict_coefficients(base, keep).bind(ic)


def _ideal_algebra(adapted: AlgebraPresentation, idx) -> AlgebraPresentation:
    pos = {x: k for k, x in enumerate(idx)}
    table = [[{pos[k]: c for k, c in adapted.mult[i][j].items()} for j in idx] for i in idx]
    return AlgebraPresentation.from_table(table, basis=[adapted.basis[i] for i in idx], name="I")


def relative_graph_homology(genus: int, boundaries: int, algebras, ideal_index: int,
                            ideal: Subspace, D: int = 3, max_bivalent: int | None = None):
    """Relative homology dims and, for comparison, the homology with ``I^#`` coefficients."""
    if max_bivalent is None:
        max_bivalent = stable_bivalent(D)
    ic = indexed_category(genus, boundaries, max_bivalent)
    rel = relative_coefficients(ic, algebras, ideal_index, ideal)
    rel_dims = category_homology(ic, rel, D)
    if ideal.dim:
        idl = ideal_coefficients(ic, algebras, ideal_index, ideal)
        ideal_dims = category_homology(ic, idl, D)
    else:
        ideal_dims = [0] * len(rel_dims)
    return rel_dims, ideal_dims


def ground_tuple(n: int):
    return [ground_field()] * n
