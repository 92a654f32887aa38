"""
Finite-dimensional associative algebras over Q given by structure constants.

``table[i][j]`` is the product of basis elements ``i`` and ``j`` as a sparse
vector ``{k: coefficient}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

from .exactla import RationalMatrix, kernel_basis, rank_of_rows, to_fraction

Vector = dict  # sparse {basis index: Fraction}


class NotAnIdeal(ValueError):
    code = "not-an-ideal"


class AlgebraError(ValueError):
    code = "algebra"


def _clean(v: dict) -> dict:
    return {k: x for k, x in v.items() if x}


def vec_add(u: dict, v: dict, c=1) -> dict:
    out = dict(u)
    for k, x in v.items():
        out[k] = out.get(k, 0) + c * x
    return _clean(out)


@dataclass(frozen=True)
class AlgebraPresentation:
    dim: int
    basis: tuple[str, ...]
    table: tuple[tuple[tuple[tuple[int, Fraction], ...], ...], ...]
    unit: tuple[tuple[int, Fraction], ...] | None = None
    name: str = ""

    @classmethod
    def from_table(cls, table, basis=None, unit=None, name="") -> "AlgebraPresentation":
        """``table[i][j]`` may be a dense list or a sparse dict."""
        dim = len(table)
        rows = []
        for i in range(dim):
            row = []
            for j in range(dim):
                entry = table[i][j]
                if isinstance(entry, dict):
                    items = {int(k): to_fraction(v) for k, v in entry.items()}
                else:
                    items = {k: to_fraction(v) for k, v in enumerate(entry)}
                row.append(tuple(sorted(_clean(items).items())))
            rows.append(tuple(row))
        if basis is None:
            basis = tuple(f"b{i}" for i in range(dim))
        u = None
        if unit is not None:
            if isinstance(unit, dict):
                uu = {int(k): to_fraction(v) for k, v in unit.items()}
            else:
                uu = {k: to_fraction(v) for k, v in enumerate(unit)}
            u = tuple(sorted(_clean(uu).items()))
        return cls(dim, tuple(basis), tuple(rows), u, name)

    @cached_property
    def mult(self) -> list[list[dict[int, Fraction]]]:
        return [[dict(e) for e in row] for row in self.table]

    @property
    def unit_vector(self) -> dict[int, Fraction] | None:
        return None if self.unit is None else dict(self.unit)

    def mul(self, x: dict, y: dict) -> dict:
        out: dict[int, Fraction] = {}
        m = self.mult
        for i, a in x.items():
            row = m[i]
            for j, b in y.items():
                ab = a * b
                for k, c in row[j].items():
                    out[k] = out.get(k, 0) + ab * c
        return _clean(out)

    def basis_vector(self, i: int) -> dict:
        return {i: Fraction(1)}

    def to_dict(self) -> dict:
        def enc(v):
            dense = ["0"] * self.dim
            for k, x in v:
                dense[k] = str(x)
            return dense
        out = {"dim": self.dim, "basis": list(self.basis),
               "table": [[enc(e) for e in row] for row in self.table]}
        if self.unit is not None:
            out["unit"] = enc(self.unit)
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "AlgebraPresentation":
        table = data["table"]
        dim = int(data.get("dim", len(table)))
        if len(table) != dim or any(len(r) != dim for r in table):
            raise AlgebraError(f"table must be {dim}x{dim}")
        return cls.from_table(table, basis=data.get("basis"), unit=data.get("unit"),
                              name=data.get("name", ""))

    @classmethod
    def load(cls, path) -> "AlgebraPresentation":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def __str__(self):
        return self.name or f"algebra(dim={self.dim})"


def check_algebra(a: AlgebraPresentation) -> list[str]:
    """Associativity on all basis triples, and the unit law if a unit is given."""
    out = []
    for i, j, k in product(range(a.dim), repeat=3):
        ei, ej, ek = a.basis_vector(i), a.basis_vector(j), a.basis_vector(k)
        left = a.mul(a.mul(ei, ej), ek)
        right = a.mul(ei, a.mul(ej, ek))
        if left != right:
            out.append(f"({a.basis[i]}*{a.basis[j]})*{a.basis[k]} != {a.basis[i]}*({a.basis[j]}*{a.basis[k]})")
    u = a.unit_vector
    if u is not None:
        for i in range(a.dim):
            e = a.basis_vector(i)
            if a.mul(u, e) != e or a.mul(e, u) != e:
                out.append(f"unit fails on {a.basis[i]}")
    return out


# -- standard algebras -------------------------------------------------------

def ground_field() -> AlgebraPresentation:
    return AlgebraPresentation.from_table([[[1]]], basis=["1"], unit=[1], name="Q")


def dual_numbers() -> AlgebraPresentation:
    return AlgebraPresentation.from_table(
        [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], basis=["1", "e"], unit=[1, 0], name="Q[e]")


def matrix_algebra(a: AlgebraPresentation, r: int) -> AlgebraPresentation:
    """``Mat_r(a)``; basis ``E_pq (x) b_i`` indexed ``(p*r + q)*dim + i``."""
    d = a.dim
    n = r * r * d
    table = [[{} for _ in range(n)] for _ in range(n)]
    names = []
    for p, q, i in product(range(r), range(r), range(d)):
        names.append(f"E{p + 1}{q + 1}" + ("" if a.dim == 1 else f"*{a.basis[i]}"))
    for p, q, i in product(range(r), range(r), range(d)):
        x = (p * r + q) * d + i
        for s, t, j in product(range(r), range(r), range(d)):
            if q != s:
                continue
            y = (s * r + t) * d + j
            table[x][y] = {(p * r + t) * d + k: c for k, c in a.mult[i][j].items()}
    unit = None
    if a.unit is not None:
        unit = {}
        for p in range(r):
            for k, c in a.unit:
                unit[(p * r + p) * d + k] = c
    name = f"Mat{r}({a.name or 'A'})"
    return AlgebraPresentation.from_table(table, basis=names, unit=unit, name=name)


def opposite(a: AlgebraPresentation) -> AlgebraPresentation:
    table = [[a.mult[j][i] for j in range(a.dim)] for i in range(a.dim)]
    name = f"{a.name}^op" if a.name else ""
    if a.name.endswith("^op"):
        name = a.name[:-3]
    return AlgebraPresentation.from_table(table, basis=a.basis, unit=a.unit_vector, name=name)


def tensor(a: AlgebraPresentation, b: AlgebraPresentation) -> AlgebraPresentation:
    """``a (x) b``; basis index ``i * b.dim + j``."""
    n = a.dim * b.dim
    table = [[{} for _ in range(n)] for _ in range(n)]
    for i1, j1, i2, j2 in product(range(a.dim), range(b.dim), range(a.dim), range(b.dim)):
        out = {}
        for k, x in a.mult[i1][i2].items():
            for l, y in b.mult[j1][j2].items():
                out[k * b.dim + l] = out.get(k * b.dim + l, 0) + x * y
        table[i1 * b.dim + j1][i2 * b.dim + j2] = out
    unit = None
    if a.unit is not None and b.unit is not None:
        unit = {}
        for k, x in a.unit:
            for l, y in b.unit:
                unit[k * b.dim + l] = x * y
    names = [f"{p}(x){q}" for p in a.basis for q in b.basis]
    return AlgebraPresentation.from_table(table, basis=names, unit=unit,
                                          name=f"{a.name or 'A'}(x){b.name or 'B'}")


def adjoin_unit(i: AlgebraPresentation) -> AlgebraPresentation:
    """``I+ = k (+) I``; the new unit is basis element 0."""
    n = i.dim + 1
    table = [[{} for _ in range(n)] for _ in range(n)]
    for x in range(n):
        table[0][x] = {x: 1}
        table[x][0] = {x: 1}
    for x in range(i.dim):
        for y in range(i.dim):
            table[x + 1][y + 1] = {k + 1: c for k, c in i.mult[x][y].items()}
    return AlgebraPresentation.from_table(table, basis=("1",) + i.basis, unit={0: 1},
                                          name=f"{i.name or 'I'}+")


def augmentation_kernel_basis(iplus: AlgebraPresentation) -> list[dict]:
    """Basis of the kernel of the augmentation ``I+ -> k`` (coefficient of basis 0)."""
    return [{k: Fraction(1)} for k in range(1, iplus.dim)]


@dataclass(frozen=True)
class Subspace:
    """Subspace of an algebra spanned by sparse vectors (kept as given)."""

    ambient_dim: int
    basis: tuple[tuple[tuple[int, Fraction], ...], ...]

    @classmethod
    def span(cls, ambient_dim: int, vectors) -> "Subspace":
        vecs = [tuple(sorted(_clean(dict(v)).items())) for v in vectors]
        # keep an independent subset
        chosen = []
        for v in vecs:
            if v and rank_of_rows([dict(w) for w in chosen + [v]]) == len(chosen) + 1:
                chosen.append(v)
        return cls(ambient_dim, tuple(chosen))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[dict]:
        return [dict(v) for v in self.basis]

    def contains(self, v: dict) -> bool:
        v = _clean(v)
        if not v:
            return True
        rows = self.vectors()
        return rank_of_rows(rows + [v]) == rank_of_rows(rows)


def check_ideal(a: AlgebraPresentation, ideal: Subspace) -> list[str]:
    out = []
    for v in ideal.vectors():
        for i in range(a.dim):
            e = a.basis_vector(i)
            for side, w in (("left", a.mul(e, v)), ("right", a.mul(v, e))):
                if not ideal.contains(w):
                    out.append(f"{side} product of {a.basis[i]} with {v} leaves the ideal")
    return out


def quotient(a: AlgebraPresentation, ideal: Subspace):
    """``a / ideal`` with its projection matrix (rows: quotient basis, cols: a basis)."""
    problems = check_ideal(a, ideal)
    if problems:
        raise NotAnIdeal(problems[0])
    # complement basis: standard vectors not in span of ideal + chosen ones
    chosen = []
    span_rows = ideal.vectors()
    for i in range(a.dim):
        cand = span_rows + [{i: Fraction(1)}]
        if rank_of_rows(cand) > rank_of_rows(span_rows):
            chosen.append(i)
            span_rows = cand
    q = len(chosen)
    # express every basis vector of a as combination of (ideal basis, chosen)
    ideal_vecs = ideal.vectors()
    gens = ideal_vecs + [{i: Fraction(1)} for i in chosen]
    # solve coordinates: columns = gens
    M = RationalMatrix(a.dim, len(gens))
    for c, v in enumerate(gens):
        for k, x in v.items():
            M[k, c] = x
    coords = _solve_all(M, a.dim)
    proj = RationalMatrix(q, a.dim)
    for i in range(a.dim):
        for c, x in coords[i].items():
            if c >= len(ideal_vecs):
                proj[c - len(ideal_vecs), i] = x
    table = [[{} for _ in range(q)] for _ in range(q)]
    for x, i in enumerate(chosen):
        for y, j in enumerate(chosen):
            prod = a.mult[i][j]
            out = {}
            for k, c in prod.items():
                for r in range(q):
                    v = proj[r, k]
                    if v:
                        out[r] = out.get(r, 0) + c * v
            table[x][y] = out
    unit = None
    if a.unit is not None:
        unit = {}
        for k, c in a.unit:
            for r in range(q):
                v = proj[r, k]
                if v:
                    unit[r] = unit.get(r, 0) + c * v
    names = [a.basis[i] for i in chosen]
    quo = AlgebraPresentation.from_table(table, basis=names, unit=unit,
                                         name=f"{a.name or 'A'}/I")
    return quo, proj


def _solve_all(M: RationalMatrix, n: int) -> list[dict[int, Fraction]]:
    """For each standard vector e_i, coordinates x with M x = e_i (M square invertible)."""
    A = M.to_dense()
    size = M.cols
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    r = 0
    piv_cols = []
    for c in range(size):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    out = []
    for i in range(n):
        sol = {}
        for row_idx, c in enumerate(piv_cols):
            v = aug[row_idx][size + i]
            if v:
                sol[c] = v
        out.append(sol)
    return out


def ideal_generated(a: AlgebraPresentation, gens) -> Subspace:
    """Two-sided ideal generated by the given vectors."""
    span = Subspace.span(a.dim, gens)
    while True:
        new = list(span.vectors())
        for v in span.vectors():
            for i in range(a.dim):
                e = a.basis_vector(i)
                new.append(a.mul(e, v))
                new.append(a.mul(v, e))
                for j in range(a.dim):
                    new.append(a.mul(a.mul(e, v), a.basis_vector(j)))
        nxt = Subspace.span(a.dim, new)
        if nxt.dim == span.dim:
            return span
        span = nxt


def algebra_from_name(name: str) -> AlgebraPresentation:
    key = name.strip().lower()
    if key in ("q", "k", "field"):
        return ground_field()
    if key in ("q[e]", "dual", "qe", "q[eps]"):
        return dual_numbers()
    if key.startswith("mat") and key[3:].isdigit():
        return matrix_algebra(ground_field(), int(key[3:]))
    raise AlgebraError(f"unknown algebra name {name!r}")
