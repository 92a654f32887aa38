from fractions import Fraction

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphhom.algebra import (
    AlgebraPresentation, NotAnIdeal, Subspace, adjoin_unit, augmentation_kernel_basis,
    check_algebra, dual_numbers, ground_field, ideal_generated, matrix_algebra, opposite,
    quotient, tensor,
)
from graphhom.algfun import (
    ArityMismatch, boundary_polygons, coeff_map, coeff_map_columns, coeff_space,
    relative_coeff_space,
)
from graphhom.catenum import build_category, compose
from graphhom.exactla import rank
from graphhom.fatgraph import contract

from conftest import LOOP, THETA, TWISTED_EIGHT

Q, E, M2 = ground_field(), dual_numbers(), matrix_algebra(ground_field(), 2)
F = Fraction


class TestAlgebras:
    def test_samples_valid(self):
        for a in (Q, E, M2):
            assert check_algebra(a) == []

    def test_planted_associativity_defect(self):
        # basis 1, x with x*x = 1 + x is fine; then break associativity by hand
        table = [[[1, 0], [0, 1]], [[0, 1], [1, 1]]]
        good = AlgebraPresentation.from_table(table, basis=["1", "x"], unit=[1, 0])
        assert check_algebra(good) == []
        bad = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
               [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
               [[0, 0, 1], [0, 0, 1], [0, 0, 0]]]
        probs = check_algebra(AlgebraPresentation.from_table(bad, unit=[1, 0, 0]))
        assert len(probs) >= 1

    def test_opposite_commutative(self):
        assert opposite(E).table == E.table

    def test_opposite_involution(self):
        assert opposite(opposite(M2)).table == M2.table

    def test_tensor_with_ground_field(self):
        t = tensor(Q, E)
        assert t.dim == 2 and t.table == E.table

    def test_tensor_dims(self):
        assert tensor(E, M2).dim == 8 and check_algebra(tensor(E, M2)) == []

    def test_matrix_units(self):
        e11, e12 = {0: F(1)}, {1: F(1)}
        assert M2.mul(e11, e12) == e12
        assert M2.mul(e12, e11) == {}
        assert M2.dim == 4

    def test_matrix_over_dual_numbers(self):
        m = matrix_algebra(E, 2)
        assert m.dim == 8 and check_algebra(m) == []

    def test_adjoin_unit(self):
        eps = AlgebraPresentation.from_table([[[0]]], basis=["e"], name="I")
        ip = adjoin_unit(eps)
        assert check_algebra(ip) == []
        assert ip.table == E.table
        assert augmentation_kernel_basis(ip) == [{1: F(1)}]

    def test_json_roundtrip(self):
        data = E.to_dict()
        assert data["table"] == [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]
        assert AlgebraPresentation.from_dict(data).table == E.table

    def test_quotient(self):
        I = Subspace.span(2, [{1: F(1)}])
        q, proj = quotient(E, I)
        assert q.dim == 1 and check_algebra(q) == []

    def test_not_an_ideal(self):
        with pytest.raises(NotAnIdeal):
            quotient(M2, Subspace.span(4, [{0: F(1)}]))

    def test_ideal_generated(self):
        assert ideal_generated(M2, [{0: F(1)}]).dim == 4


class TestPolygons:
    def test_theta(self):
        polys = boundary_polygons(THETA)
        assert [p.size for p in polys] == [2, 2, 2]

    def test_twisted_eight(self):
        assert [p.size for p in boundary_polygons(TWISTED_EIGHT)] == [4]

    def test_loop(self):
        assert [p.size for p in boundary_polygons(LOOP)] == [1, 1]

    def test_corner_triples(self):
        for g in (THETA, TWISTED_EIGHT, LOOP):
            for p in boundary_polygons(g):
                orbit = g.orbit_of_label(p.label)
                assert [c[1] for c in p.corners] == list(orbit)
                for f1, f2, v in p.corners:
                    assert g.sigma[f1] == f2 and g.vertex_of[f2] == v

    def test_edge_census(self):
        for g in (THETA, TWISTED_EIGHT, LOOP):
            edges = [e for p in boundary_polygons(g) for e in p.edges]
            assert len(edges) == 2 * g.edge_count
            assert all(edges.count(e) == 2 for e in range(g.edge_count))


class TestCoefficients:
    def test_dims(self):
        assert coeff_space(THETA, [Q, Q, Q]).dim == 1
        assert coeff_space(THETA, [E, E, E]).dim == 64
        assert coeff_space(TWISTED_EIGHT, [E]).dim == 16

    def test_arity(self):
        with pytest.raises(ArityMismatch):
            coeff_space(THETA, [Q])

    def test_theta_contraction_block(self):
        """Contracting edge 0 of theta multiplies the factors of the two 2-gons
        through that edge and leaves the third alone."""
        c = contract(THETA, 0)
        cols = coeff_map_columns(THETA, c.graph, c.dart_map, [E, E, E])
        # source index: digits (p1c1 p1c2 p2c1 p2c2 p3c1 p3c2); target (p1 p2 p3c1 p3c2)
        mult = {(0, 0): 0, (0, 1): 1, (1, 0): 1}  # 1*1=1, 1*e=e, e*1=e, e*e=0
        for a, b, cc, d in itertools.product(range(2), repeat=4):
            src = ((((a * 2 + b) * 2 + cc) * 2 + d) * 2) * 2  # third polygon (1, 1)
            col = cols[src]
            if (a, b) not in mult or (cc, d) not in mult:
                assert col == {}
                continue
            tgt = ((mult[(a, b)] * 2 + mult[(cc, d)]) * 2) * 2
            assert col == {tgt: F(1)}

    def test_all_q_is_identity(self):
        cat = build_category(0, 3)
        for m in cat.morphisms():
            assert coeff_map(cat, m, [Q, Q, Q]).to_dense() == [[1]]

    def test_identity_maps(self):
        cat = build_category(0, 3)
        for a in range(len(cat.objects)):
            m = coeff_map(cat, cat.identity(a), [E, Q, E])
            assert m.to_dense() == [[int(i == j) for j in range(m.cols)] for i in range(m.rows)]

    @pytest.mark.parametrize("algs", [[E, Q, Q], [M2, E, Q]])
    def test_functoriality(self, algs):
        cat = build_category(0, 3, max_bivalent=1)
        for g in cat.morphisms():
            for f in cat.morphisms_from(g.target):
                fg = compose(f, g)
                assert coeff_map(cat, fg, algs) == coeff_map(cat, f, algs) @ coeff_map(cat, g, algs)

    def test_contractions_surjective(self):
        cat = build_category(0, 3, max_bivalent=1)
        for m in cat.morphisms():
            if m.contracted:
                mat = coeff_map(cat, m, [E, E, Q])
                assert rank(mat) == mat.rows

    def test_functoriality_genus_one(self):
        cat = build_category(1, 1)
        for g in cat.morphisms():
            for f in cat.morphisms_from(g.target):
                assert coeff_map(cat, compose(f, g), [E]) == coeff_map(cat, f, [E]) @ coeff_map(cat, g, [E])


class TestRelative:
    def test_two_gon_kernel(self):
        # the first polygon of theta is a 2-gon: ker(Q[e]^2 -> Q^2) has dim 4 - 1
        I = Subspace.span(2, [{1: F(1)}])
        dim, inc = relative_coeff_space(THETA, [E, Q, Q], 0, I)
        assert dim == 3 and rank(inc) == 3

    def test_loop_one_gon(self):
        I = Subspace.span(2, [{1: F(1)}])
        assert relative_coeff_space(LOOP, [E, E], 0, I)[0] == 2

    def test_zero_ideal(self):
        assert relative_coeff_space(THETA, [E, E, E], 0, Subspace.span(2, []))[0] == 0

    def test_whole_algebra(self):
        whole = Subspace.span(2, [{0: F(1)}, {1: F(1)}])
        assert relative_coeff_space(THETA, [E, E, E], 1, whole)[0] == 64

    def test_not_an_ideal(self):
        with pytest.raises(NotAnIdeal):
            relative_coeff_space(THETA, [M2, Q, Q], 0, Subspace.span(4, [{1: F(1)}]))


@given(st.sampled_from([Q, E, M2]), st.sampled_from([Q, E, M2]))
def test_tensor_and_opposite_properties(a, b):
    t = tensor(a, b)
    assert t.dim == a.dim * b.dim
    assert check_algebra(t) == []
    assert check_algebra(opposite(t)) == []
    assert opposite(opposite(t)).table == t.table
