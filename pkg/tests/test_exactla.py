from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphhom.algebra import ground_field
from graphhom.exactla import ChainComplex, NotAComplex, RationalMatrix, homology_dims, kernel_basis, rank
from graphhom.homology import hochschild_complex

from oracles import minor_rank, sympy_rank


def test_rank_zero():
    assert rank(RationalMatrix.zero(3, 4)) == 0


def test_rank_identity():
    assert rank(RationalMatrix.identity(5)) == 5


def test_rank_proportional_rows():
    assert rank(RationalMatrix.from_dense([[1, 2], [2, 4]])) == 1


def test_rank_fractions():
    m = RationalMatrix.from_dense([[Fraction(1, 3), Fraction(2, 7)], [Fraction(7, 3), 2]])
    assert rank(m) == 1


def test_exact_complex():
    c = ChainComplex([1, 1], {1: RationalMatrix.identity(1)})
    assert homology_dims(c) == [0]
    c = ChainComplex([1, 1, 0], {1: RationalMatrix.identity(1), 2: RationalMatrix(1, 0)})
    assert homology_dims(c) == [0, 0]


def test_zero_differentials():
    c = ChainComplex([2, 3, 1], {1: RationalMatrix(2, 3), 2: RationalMatrix(3, 1)})
    assert homology_dims(c) == [2, 3]


def test_not_a_complex():
    d1 = RationalMatrix.from_dense([[1]])
    d2 = RationalMatrix.from_dense([[1]])
    with pytest.raises(NotAComplex) as exc:
        homology_dims(ChainComplex([1, 1, 1], {1: d1, 2: d2}))
    assert exc.value.degree == 2


def test_hochschild_of_ground_field():
    assert homology_dims(hochschild_complex(ground_field(), 3)) == [1, 0, 0, 0]


def test_dump_load_roundtrip():
    m = RationalMatrix.from_dense([[0, Fraction(-1, 2)], [3, 0]])
    text = m.dump()
    assert text.splitlines()[0] == "2 2 2"
    assert "0 1 -1/2" in text
    assert RationalMatrix.load(text) == m


def test_kernel_basis():
    m = RationalMatrix.from_dense([[1, 1, 0], [0, 0, 1]])
    ker = kernel_basis(m)
    assert len(ker) == 1
    assert m.apply(ker[0]) == {}


small = st.integers(-2, 2)


@st.composite
def dense(draw, max_rows=4, max_cols=4):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


@given(dense())
def test_rank_matches_minors(rows):
    assert rank(RationalMatrix.from_dense(rows)) == minor_rank(rows)


@given(dense(7, 7))
def test_rank_transpose(rows):
    m = RationalMatrix.from_dense(rows)
    assert rank(m) == rank(m.transpose()) == sympy_rank(rows)


@given(dense(5, 5), dense(5, 5))
def test_euler_identity(a, b):
    # build d2 = a, d1 with d1 d2 = 0 from the left kernel of a
    d2 = RationalMatrix.from_dense(a)
    left = kernel_basis(d2.transpose())
    n1 = len(a)
    rows = [[v.get(j, Fraction(0)) for j in range(n1)] for v in left] or [[Fraction(0)] * n1]
    d1 = RationalMatrix.from_dense(rows)
    dims = [d1.rows, n1, d2.cols, 0]
    c = ChainComplex(dims, {1: d1, 2: d2, 3: RationalMatrix(d2.cols, 0)})
    h = homology_dims(c)
    assert sum((-1) ** p * x for p, x in enumerate(h)) == sum((-1) ** p * x for p, x in enumerate(dims[:3]))
