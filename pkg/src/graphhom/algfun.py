"""
Boundary polygons of a fat graph and the coefficient functor
``G(X) = (x)_i A_i^#(boundary_i X)`` on objects and morphisms.

A corner of polygon ``i`` is a dart ``f2`` of the orbit labelled ``i``; the
triple is ``(sigma^-1(f2), f2, vertex)``.  The coefficient space puts one tensor
factor of ``A_i`` on every corner.  Basis order: labels in increasing order,
corners of a polygon in phi-order from the minimal dart, each corner's basis
index as a digit (first corner most significant).

Under a morphism the darts of contracted edges vanish.  The factor sitting at
a vanished corner ``x`` is multiplied on the right by the factor at
``phi(x)`` (tail times head along the polygon), and the product sits at the
first surviving corner of the run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import AlgebraPresentation, NotAnIdeal, Subspace, check_ideal
from .exactla import RationalMatrix, rank_of_rows
from .fatgraph import FatGraph


class ArityMismatch(ValueError):
    code = "arity-mismatch"


@dataclass(frozen=True)
class BoundaryPolygon:
    label: int
    corners: tuple[tuple[int, int, int], ...]  # (f1, f2, v)
    edges: tuple[int, ...]  # graph edge between corner k and corner k+1

    @property
    def size(self) -> int:
        return len(self.corners)


def boundary_polygons(g: FatGraph) -> list[BoundaryPolygon]:
    out = []
    for label in sorted(g.labels):
        orbit = g.orbit_of_label(label)
        corners = tuple((g.sigma_inv[f2], f2, g.vertex_of[f2]) for f2 in orbit)
        # phi(f) = sigma(f^1): from corner f we walk along the edge of f
        edges = tuple(f2 >> 1 for f2 in orbit)
        out.append(BoundaryPolygon(label, corners, edges))
    return out


def _check_arity(g: FatGraph, algebras) -> None:
    if len(algebras) != len(g.boundary_orbits):
        raise ArityMismatch(f"{len(algebras)} algebras for {len(g.boundary_orbits)} boundary components")


@dataclass(frozen=True)
class CoefficientSpace:
    sizes: tuple[int, ...]  # polygon sizes by label
    dims: tuple[int, ...]  # algebra dims by label

    @property
    def dim(self) -> int:
        out = 1
        for m, d in zip(self.sizes, self.dims):
            out *= d ** m
        return out


def coeff_space(g: FatGraph, algebras) -> CoefficientSpace:
    _check_arity(g, algebras)
    sizes = tuple(len(g.orbit_of_label(lab)) for lab in sorted(g.labels))
    return CoefficientSpace(sizes, tuple(a.dim for a in algebras))


def _runs(src: FatGraph, tgt: FatGraph, dart_map, label: int):
    """For target polygon ``label``: list over its corners of the source run feeding it."""
    s_orbit = src.orbit_of_label(label)
    t_orbit = tgt.orbit_of_label(label)
    t_pos = {d: k for k, d in enumerate(t_orbit)}
    runs: list[list[int] | None] = [None] * len(t_orbit)
    m = len(s_orbit)
    # start right after a surviving corner so runs are not split
    start = next(k for k, d in enumerate(s_orbit) if dart_map[d] is not None)
    run: list[int] = []
    for step in range(1, m + 1):
        k = (start + step) % m
        x = s_orbit[k]
        run.append(k)
        y = dart_map[x]
        if y is not None:
            if y not in t_pos:
                raise ArityMismatch(f"dart {x} leaves boundary {label}")
            runs[t_pos[y]] = run
            run = []
    if any(r is None for r in runs):
        raise ArityMismatch(f"boundary {label} is not mapped onto")
    return runs


def _polygon_matrix(a: AlgebraPresentation, m_src: int, runs) -> dict[int, dict[int, Fraction]]:
    """Columns (source index -> sparse target vector) of one polygon's map."""
    d = a.dim
    cols = {}
    m_tgt = len(runs)
    for digits in product(range(d), repeat=m_src):
        src_idx = 0
        for x in digits:
            src_idx = src_idx * d + x
        vec = {0: Fraction(1)}  # over partial target index
        for run in runs:
            # product of the factors along the run, in run order
            p = {digits[run[0]]: Fraction(1)}
            for k in run[1:]:
                p = a.mul(p, {digits[k]: Fraction(1)})
                if not p:
                    break
            if not p:
                vec = {}
                break
            new = {}
            for i, x in vec.items():
                for j, y in p.items():
                    key = i * d + j
                    new[key] = new.get(key, 0) + x * y
            vec = {k: v for k, v in new.items() if v}
            if not vec:
                break
        cols[src_idx] = vec
    return cols


def _kron_columns(parts, tgt_dims):
    """Tensor product of per-polygon column maps (label-major)."""
    cols = {0: {0: Fraction(1)}}
    for pcols, tdim in zip(parts, tgt_dims):
        sdim = len(pcols)
        new = {}
        for s, vec in cols.items():
            for s2, vec2 in pcols.items():
                out = {}
                for t, x in vec.items():
                    for t2, y in vec2.items():
                        out[t * tdim + t2] = x * y
                new[s * sdim + s2] = out
        cols = new
    return cols


def coeff_map_columns(src: FatGraph, tgt: FatGraph, dart_map, algebras) -> dict[int, dict[int, Fraction]]:
    """Sparse columns of the coefficient map of a morphism given by its dart map."""
    _check_arity(src, algebras)
    _check_arity(tgt, algebras)
    parts, tgt_dims = [], []
    for label, a in zip(sorted(src.labels), algebras):
        runs = _runs(src, tgt, dart_map, label)
        m_src = len(src.orbit_of_label(label))
        parts.append(_polygon_matrix(a, m_src, runs))
        tgt_dims.append(a.dim ** len(runs))
    return _kron_columns(parts, tgt_dims)


def coeff_map(cat, m, algebras) -> RationalMatrix:
    """Matrix of ``G(m)`` for a morphism ``m`` of the category ``cat``."""
    src, tgt = cat.objects[m.source], cat.objects[m.target]
    cols = coeff_map_columns(src, tgt, m.dart_map, algebras)
    out = RationalMatrix(coeff_space(tgt, algebras).dim, coeff_space(src, algebras).dim)
    for j, vec in cols.items():
        for i, x in vec.items():
            out.data.setdefault(i, {})[j] = x
    return out


# -- relative coefficients ---------------------------------------------------

def adapted_algebra(a: AlgebraPresentation, ideal: Subspace):
    """Rewrite ``a`` in a basis whose last ``dim ideal`` vectors span the ideal.

    Returns ``(algebra, ideal_indices, change)`` where ``change`` has the new
    basis vectors as columns in old coordinates.
    """
    problems = check_ideal(a, ideal)
    if problems:
        raise NotAnIdeal(problems[0])
    ivecs = ideal.vectors()
    comp = []
    rows = list(ivecs)
    base = rank_of_rows(rows)
    for i in range(a.dim):
        cand = rows + [{i: Fraction(1)}]
        r = rank_of_rows(cand)
        if r > base:
            comp.append({i: Fraction(1)})
            rows, base = cand, r
    new_basis = comp + ivecs
    n = a.dim
    P = [[Fraction(0)] * n for _ in range(n)]
    for c, v in enumerate(new_basis):
        for k, x in v.items():
            P[k][c] = x
    Pinv = _invert(P)

    def to_new(v):
        out = {}
        for k, x in v.items():
            for r in range(n):
                y = Pinv[r][k]
                if y:
                    out[r] = out.get(r, 0) + x * y
        return {k: x for k, x in out.items() if x}

    table = [[to_new(a.mul(new_basis[i], new_basis[j])) for j in range(n)] for i in range(n)]
    unit = None if a.unit is None else to_new(a.unit_vector)
    names = [f"v{i}" for i in range(n)]
    adapted = AlgebraPresentation.from_table(table, basis=names, unit=unit, name=a.name)
    change = RationalMatrix.from_dense(P)
    return adapted, tuple(range(len(comp), n)), change


def _invert(P):
    n = len(P)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(P)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def relative_indices(g: FatGraph, algebras, slot: int, ideal_idx) -> list[int]:
    """Basis indices of ``G(g)`` (in adapted coordinates) spanning the relative subspace.

    A basis tensor lies in the kernel of ``A^# -> (A/I)^#`` iff at least one
    factor of polygon ``slot`` is an ideal basis vector.
    """
    space = coeff_space(g, algebras)
    ideal_idx = set(ideal_idx)
    labels = sorted(g.labels)
    out = []
    sizes, dims = space.sizes, space.dims
    for idx in range(space.dim):
        rest = idx
        digits_by_poly = []
        for m, d in zip(reversed(sizes), reversed(dims)):
            block = d ** m
            digits_by_poly.append(rest % block)
            rest //= block
        digits_by_poly.reverse()
        block = digits_by_poly[slot]
        d, m = dims[slot], sizes[slot]
        hit = False
        for _ in range(m):
            if block % d in ideal_idx:
                hit = True
                break
            block //= d
        if hit:
            out.append(idx)
    del labels
    return out


def relative_coeff_space(g: FatGraph, algebras, ideal_index: int, ideal: Subspace):
    """Relative subspace ``(A, I)^#`` at slot ``ideal_index``.

    Returns ``(dim, inclusion)`` with the inclusion matrix in the original
    coordinates of ``G(g)``.
    """
    algebras = list(algebras)
    a = algebras[ideal_index]
    adapted, idx, change = adapted_algebra(a, ideal)
    algs = list(algebras)
    algs[ideal_index] = adapted
    keep = relative_indices(g, algs, ideal_index, idx)
    space = coeff_space(g, algebras)
    # inclusion: adapted coordinates -> original coordinates, slot-wise change of basis
    inc = RationalMatrix(space.dim, len(keep))
    sizes, dims = space.sizes, space.dims
    for col, idx_new in enumerate(keep):
        vec = _change_basis_vector(idx_new, sizes, dims, ideal_index, change)
        for i, x in vec.items():
            inc[i, col] = x
    return len(keep), inc


def _change_basis_vector(idx, sizes, dims, slot, change: RationalMatrix):
    digits = []
    rest = idx
    for m, d in zip(reversed(sizes), reversed(dims)):
        ds = []
        for _ in range(m):
            ds.append(rest % d)
            rest //= d
        digits.append(list(reversed(ds)))
    digits.reverse()
    vec = {0: Fraction(1)}
    for p, (ds, d) in enumerate(zip(digits, dims)):
        for x in ds:
            if p == slot:
                col = {r: change[r, x] for r in range(d) if change[r, x]}
            else:
                col = {x: Fraction(1)}
            vec = {i * d + r: v * c for i, v in vec.items() for r, c in col.items()}
    return vec
