import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partconf.graphs import Graph, complete_graph, cycle_graph
from partconf.model import X, Y, Gij, build_model
from partconf.resonance import (dxi_matrix, h1_rank_at, in_union, resonance_components, surface_witness_dim,
                                verify_decomposition)


def test_dxi_at_zero_is_d():
    m = build_model(1, complete_graph(3))
    assert dxi_matrix(m, [0] * m.dim1) == m.d1


def test_dxi_empty_model():
    m = build_model(0, Graph(3))
    assert dxi_matrix(m, []).shape == (3, 0)


def test_dxi_edge_column():
    m = build_model(1, complete_graph(2))
    xi = m.vector({X(0, 1): 1, X(1, 1): -1})
    g = m.index1[Gij(0, 1)]
    assert dxi_matrix(m, xi).col(g) == m.d1.col(g)


def test_dxi_rejects_non_closed():
    m = build_model(1, complete_graph(2))
    with pytest.raises(ValueError):
        dxi_matrix(m, m.basis_vector(Gij(0, 1)))
    with pytest.raises(ValueError):
        h1_rank_at(m, m.basis_vector(Gij(0, 1)))


def test_h1_rank_examples():
    m = build_model(1, complete_graph(3))
    assert h1_rank_at(m, [0] * m.dim1) == m.h1.dim
    m2 = build_model(2, complete_graph(2))
    assert h1_rank_at(m2, m2.basis_vector(X(0, 1))) >= 1
    m1 = build_model(1, complete_graph(2))
    assert h1_rank_at(m1, m1.vector({X(0, 1): 1, X(1, 1): 1})) == 0
    assert h1_rank_at(m1, m1.vector({X(0, 1): 1, X(1, 1): -1})) >= 1


def test_component_examples():
    comps = resonance_components(build_model(2, Graph(2, [(0, 1)])))
    assert [c.dim for c in comps] == [4, 4]
    comps = resonance_components(build_model(0, complete_graph(4)))
    assert len(comps) == 1 and comps[0].dim == 2 and not comps[0].is_zero
    comps = resonance_components(build_model(0, cycle_graph(4)))
    assert len(comps) == 1 and comps[0].is_zero
    assert resonance_components(build_model(0, complete_graph(3))) == []
    comps = resonance_components(build_model(1, Graph(2)))
    assert len(comps) == 1 and comps[0].is_zero


@pytest.mark.parametrize("genus,graph", [(1, complete_graph(2)), (2, complete_graph(3)), (0, complete_graph(4))])
def test_verify_no_violations(genus, graph):
    rep = verify_decomposition(build_model(genus, graph), 20, seed=3)
    assert rep.ok and rep.checks > 0


def test_verify_vacuous():
    rep = verify_decomposition(build_model(0, complete_graph(3)), 20, seed=0)
    assert rep.vacuous and rep.ok and rep.checks == 0


def test_verify_is_reproducible():
    m = build_model(1, complete_graph(3))
    assert verify_decomposition(m, 10, 5).to_dict() == verify_decomposition(m, 10, 5).to_dict()


def test_containment_on_basis_vectors_and_sums():
    for genus, g in [(2, complete_graph(3)), (1, complete_graph(3)), (0, complete_graph(5))]:
        m = build_model(genus, g)
        for c in resonance_components(m):
            vecs = c.subspace.vectors()
            for v in vecs:
                assert h1_rank_at(m, v) >= 1
            for a in range(len(vecs)):
                for b in range(a + 1, len(vecs)):
                    assert h1_rank_at(m, [x + y for x, y in zip(vecs[a], vecs[b])]) >= 1


def test_genus2_witness_has_zero_edge_part():
    m = build_model(2, complete_graph(3))
    rng = random.Random(1)
    for c in resonance_components(m):
        for _ in range(5):
            xi = [sum(rng.randint(-3, 3) * v[k] for v in c.subspace.vectors()) for k in range(m.dim1)]
            if any(xi):
                assert surface_witness_dim(m, xi) >= 2


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=6, max_size=6), st.sampled_from([-2, -1, Fraction(1, 2), 3]))
def test_rank_is_scale_invariant(coeffs, lam):
    m = build_model(1, complete_graph(3))
    xi = [Fraction(0)] * m.dim1
    for k, c in zip(m.surface_basis, coeffs):
        xi[k] = Fraction(c)
    assert h1_rank_at(m, xi) == h1_rank_at(m, [lam * x for x in xi])


def test_union_membership_zero_component():
    m = build_model(0, cycle_graph(4))
    comps = resonance_components(m)
    assert in_union(comps, [0] * m.dim1)
    assert not in_union(comps, m.h1.vectors()[0])
