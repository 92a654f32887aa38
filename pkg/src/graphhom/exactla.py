"""
Exact sparse linear algebra over the rationals.

Matrices are dictionaries of rows.  Rank is computed by fraction-free
elimination on integer rows (each row is scaled to integers once, then kept
primitive by dividing out the gcd), with sparse columns eliminated first.
"""

from __future__ import annotations

import heapq
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable


class NotAComplex(ValueError):
    code = "not-a-complex"

    def __init__(self, degree: int, msg: str = ""):
        self.degree = degree
        super().__init__(msg or f"d_{degree - 1} o d_{degree} != 0")


def worker_count() -> int:
    """Worker processes for independent rank computations (``GRAPHHOM_THREADS``, default 1)."""
    raw = os.environ.get("GRAPHHOM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"GRAPHHOM_THREADS must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ValueError(f"GRAPHHOM_THREADS must be a positive integer, got {raw!r}")
    return n


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass
class RationalMatrix:
    rows: int
    cols: int
    data: dict[int, dict[int, Fraction]] = field(default_factory=dict)

    @classmethod
    def from_dense(cls, dense) -> "RationalMatrix":
        dense = [list(r) for r in dense]
        ncols = len(dense[0]) if dense else 0
        m = cls(len(dense), ncols)
        for i, row in enumerate(dense):
            for j, x in enumerate(row):
                m[i, j] = x
        return m

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols)

    def __setitem__(self, key, value):
        i, j = key
        value = to_fraction(value)
        row = self.data.get(i)
        if value == 0:
            if row is not None:
                row.pop(j, None)
                if not row:
                    del self.data[i]
            return
        if row is None:
            row = self.data[i] = {}
        row[j] = value

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self.data.get(i, {}).get(j, Fraction(0))

    def add(self, i: int, j: int, value) -> None:
        if not value:
            return
        row = self.data.setdefault(i, {})
        v = row.get(j, 0) + value
        if v:
            row[j] = v
        else:
            del row[j]
            if not row:
                del self.data[i]

    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def transpose(self) -> "RationalMatrix":
        t = RationalMatrix(self.cols, self.rows)
        for i, row in self.data.items():
            for j, x in row.items():
                t.data.setdefault(j, {})[i] = x
        return t

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = RationalMatrix(self.rows, other.cols)
        for i, row in self.data.items():
            acc: dict[int, Fraction] = {}
            for k, x in row.items():
                orow = other.data.get(k)
                if not orow:
                    continue
                for j, y in orow.items():
                    acc[j] = acc.get(j, 0) + x * y
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out.data[i] = acc
        return out

    def is_zero(self) -> bool:
        return not any(self.data.values())

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, row in self.data.items():
            for j, x in row.items():
                out[i][j] = x
        return out

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            {i: r for i, r in self.data.items() if r} == {i: r for i, r in other.data.items() if r}

    def apply(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        """Matrix times a sparse column vector."""
        out: dict[int, Fraction] = {}
        cols = self.transpose().data if vec else {}
        for j, x in vec.items():
            for i, y in cols.get(j, {}).items():
                out[i] = out.get(i, 0) + x * y
        return {i: v for i, v in out.items() if v}

    def dump(self) -> str:
        """Matrix-market style text: a header then ``row col p/q`` lines."""
        lines = [f"{self.rows} {self.cols} {self.nnz()}"]
        for i in sorted(self.data):
            for j in sorted(self.data[i]):
                x = self.data[i][j]
                lines.append(f"{i} {j} {x.numerator}/{x.denominator}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "RationalMatrix":
        lines = [l for l in text.splitlines() if l.strip()]
        r, c, _ = map(int, lines[0].split())
        m = cls(r, c)
        for l in lines[1:]:
            i, j, v = l.split()
            m[int(i), int(j)] = Fraction(v)
        return m


def _integer_rows(rows: Iterable[dict]) -> list[dict[int, int]]:
    out = []
    for row in rows:
        if not row:
            continue
        den = 1
        for x in row.values():
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        r = {j: int(x * den) for j, x in row.items() if x}
        g = 0
        for v in r.values():
            g = gcd(g, v)
        if g > 1:
            r = {j: v // g for j, v in r.items()}
        if r:
            out.append(r)
    return out


def rank_of_rows(rows: Iterable[dict]) -> int:
    """Exact rank of a sparse matrix given as row dictionaries."""
    rows = _integer_rows(rows)
    if not rows:
        return 0
    # columns -> rows containing them
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            col_rows.setdefault(j, set()).add(i)
    live = {i: r for i, r in enumerate(rows)}
    heap = [(len(s), j) for j, s in col_rows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        cnt, j = heapq.heappop(heap)
        s = col_rows.get(j)
        if not s:
            continue
        if cnt != len(s):
            heapq.heappush(heap, (len(s), j))
            continue
        # pivot row: the shortest row in this column
        p = min(s, key=lambda i: (len(live[i]), i))
        prow = live.pop(p)
        for k in prow:
            col_rows[k].discard(p)
        pv = prow[j]
        touched = set()
        for i in list(s):
            r = live[i]
            f = r[j]
            for k in r:
                col_rows[k].discard(i)
            # fraction-free: r <- pv*r - f*prow
            new = {k: pv * v for k, v in r.items()}
            for k, v in prow.items():
                w = new.get(k, 0) - f * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            if not new:
                del live[i]
                continue
            g = 0
            for v in new.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                new = {k: v // g for k, v in new.items()}
            live[i] = new
            for k in new:
                col_rows.setdefault(k, set()).add(i)
                touched.add(k)
        col_rows.pop(j, None)
        for k in touched | set(prow):
            if k in col_rows and col_rows[k]:
                heapq.heappush(heap, (len(col_rows[k]), k))
        rank += 1
    return rank


def rank(m: RationalMatrix) -> int:
    return rank_of_rows(m.data.values())


def kernel_basis(m: RationalMatrix) -> list[dict[int, Fraction]]:
    """Basis of the right null space, by dense exact RREF (small matrices only)."""
    A = m.to_dense()
    ncols = m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m.rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m.rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = {fcol: Fraction(1)}
        for i, pc in enumerate(pivots):
            if A[i][fcol] != 0:
                v[pc] = -A[i][fcol]
        basis.append(v)
    return basis


@dataclass
class ChainComplex:
    """``dims[p] = dim C_p``; ``d[p]`` maps C_p -> C_{p-1} (``d[0]`` unused)."""

    dims: list[int]
    d: dict[int, RationalMatrix]

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def check(self) -> None:
        for p in range(2, self.top + 1):
            if p in self.d and p - 1 in self.d:
                if not (self.d[p - 1] @ self.d[p]).is_zero():
                    raise NotAComplex(p)

    def ranks(self) -> dict[int, int]:
        degrees = sorted(self.d)
        workers = min(worker_count(), len(degrees))
        if workers <= 1:
            return {p: rank(self.d[p]) for p in degrees}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return dict(zip(degrees, pool.map(rank, [self.d[p] for p in degrees])))

    def homology_dims(self, check: bool = True) -> list[int]:
        """Homology in every degree whose incoming differential is available."""
        if check:
            self.check()
        rk = self.ranks()
        out = []
        for p in range(self.top + 1):
            if p + 1 > self.top:
                break
            out.append(self.dims[p] - rk.get(p, 0) - rk.get(p + 1, 0))
        return out


def homology_dims(c: ChainComplex, check: bool = True) -> list[int]:
    return c.homology_dims(check)
