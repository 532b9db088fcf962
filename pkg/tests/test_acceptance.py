"""Acceptance criteria 1-12, exact arithmetic throughout."""
from itertools import combinations
from math import comb

import numpy as np
import pytest

from oracles import envelope_ranks, l0k4, l1k2, sympy_rank, triangle_relation_matrix
from partconf.admissible import commutes_with_d, enumerate_admissible, is_injective, is_multiplicative
from partconf.flat import (Representation, connection, decompose_flat, grid_enumerate_flat, images_from_coeffs,
                           is_flat, is_rank_one, iter_grid, lie_hom_check_batch, mc_zero_batch, push_forward, sl2,
                           sol2, verify_m3res)
from partconf.graphs import (Graph, all_labeled_graphs, b1_zero_by_shape, complete_graph, cycle_graph,
                             edgeless_graph, enumerate_k4, enumerate_triangles)
from partconf.holonomy import (Formality, formality_classify, raw_presentation, reduced_presentation,
                               redundant_relations)
from partconf.lie import GradedIdeal, LiePresentation, lcs_ranks
from partconf.model import ELLIPTIC_PUNCTURED, betti1, build_curve_model, build_model
from partconf.resonance import resonance_components, verify_decomposition


def graphs_upto(n_max, n_min=1):
    for n in range(n_min, n_max + 1):
        yield from all_labeled_graphs(n)


GRIDS = {
    "g1_k2_sol2": (1, complete_graph(2), "sol2"),
    "g1_k2_sl2": (1, complete_graph(2), "sl2"),
    "g0_k4_sol2": (0, complete_graph(4), "sol2"),
    "g1_e2_sol2": (1, edgeless_graph(2), "sol2"),
}
_scans = {}


def scan(key):
    if key not in _scans:
        genus, g, alg = GRIDS[key]
        m = build_model(genus, g)
        _scans[key] = (m, grid_enumerate_flat(m, sol2() if alg == "sol2" else sl2(), (-1, 0, 1), workers=4))
    return _scans[key]


def test_criterion_01_b1_zero_by_shape():
    bad = [g for g in graphs_upto(5) if (betti1(0, g) == 0) != b1_zero_by_shape(g)]
    assert not bad


def test_criterion_02_betti_formulas():
    for genus in (1, 2, 3):
        for g in graphs_upto(4):
            assert betti1(genus, g) == 2 * genus * g.n
    assert betti1(0, complete_graph(4)) == 2
    assert betti1(0, cycle_graph(4)) == 1


def test_criterion_03_dimension_identities():
    for genus in (0, 1, 2):
        for g in graphs_upto(5):
            m = build_model(genus, g)
            e = len(g.edges)
            assert m.dim_piece("A2_3") == 2 * genus * (g.n - 1) * e
            assert m.dim_piece("A2_4") == comb(e, 2) - len(enumerate_triangles(g))


def test_criterion_03_triangle_count_oracle():
    for g in graphs_upto(5, 3):
        rows, pairs = triangle_relation_matrix(g.n, list(g.edges))
        brute = sum(all(p in g.edge_set for p in combinations(t, 2)) for t in combinations(range(g.n), 3))
        assert (sympy_rank(rows) if rows else 0) == brute == len(enumerate_triangles(g))


@pytest.mark.parametrize("genus", [0, 1, 2])
def test_criterion_04_resonance_decomposition(genus):
    for g in graphs_upto(4):
        m = build_model(genus, g)
        for seed in (0, 1, 2):
            rep = verify_decomposition(m, 25, seed)
            assert rep.ok, (genus, g, rep.to_dict())
        labeled = [c for c in resonance_components(m) if c.origin is not None]
        expected = {0: len(enumerate_k4(g)), 1: len(g.edges)}.get(genus, g.n)
        assert len(labeled) == expected


@pytest.mark.parametrize("genus", [1, 2])
def test_criterion_05_pullbacks_are_cdga_maps(genus):
    for g in graphs_upto(5):
        m = build_model(genus, g)
        for f in enumerate_admissible(m):
            assert commutes_with_d(f, m) and is_injective(f)
            assert is_multiplicative(f, m), (genus, g, str(f.label))


def test_criterion_05_genus0_d_compatible():
    for g in graphs_upto(5, 4):
        m = build_model(0, g)
        for f in enumerate_admissible(m):
            assert commutes_with_d(f, m) and is_injective(f)


@pytest.mark.xfail(strict=True, reason="the genus-0 quad pullback is multiplicative only on cohomology")
def test_criterion_05_genus0_multiplicative():
    for g in graphs_upto(5, 4):
        m = build_model(0, g)
        for f in enumerate_admissible(m):
            assert is_multiplicative(f, m), (g, str(f.label))


def test_criterion_06_raw_matches_reduced():
    for genus in (0, 1, 2):
        for g in graphs_upto(3):
            red = lcs_ranks(reduced_presentation(genus, g), 3).ranks
            if genus == 0:
                # raw generators have weight 2, reduced weight k matches raw weight 2k
                raw = lcs_ranks(raw_presentation(build_model(0, g)), 6).ranks
                assert all(r == 0 for r in raw[0::2])
                raw = raw[1::2]
            else:
                raw = lcs_ranks(raw_presentation(build_model(genus, g)), 3).ranks
            assert raw == red, (genus, g)


@pytest.mark.parametrize("genus", [1, 2])
def test_criterion_06_redundant_relations(genus):
    for g in graphs_upto(4):
        rels = redundant_relations(genus, g)
        if not any(rels.values()):
            continue
        p = reduced_presentation(genus, g)
        ideal = GradedIdeal(p, max(e.weight(p.weights) for es in rels.values() for e in es))
        for name, elems in rels.items():
            assert all(ideal.contains(e) for e in elems), (genus, g, name)


def test_criterion_07_lcs_oracles():
    assert lcs_ranks(reduced_presentation(1, complete_graph(2)), 4).ranks == (4, 1, 2, 3) == tuple(
        envelope_ranks(*l1k2(), 4))
    assert lcs_ranks(reduced_presentation(0, complete_graph(4)), 4).ranks == (2, 1, 2, 3) == tuple(
        envelope_ranks(*l0k4(), 4))
    for n in range(1, 5):
        assert lcs_ranks(reduced_presentation(1, edgeless_graph(n)), 3).ranks == (2 * n, 0, 0)
    assert lcs_ranks(reduced_presentation(0, complete_graph(3)), 2).ranks == (0, 0)


def test_criterion_08_formality():
    for genus in (0, 1, 2, 3):
        for g in graphs_upto(5):
            brute = any(all(p in g.edge_set for p in combinations(t, 2)) for t in combinations(range(g.n), 3))
            expected = Formality.FILTERED_FORMAL_NOT_ONE_FORMAL if genus == 1 and brute else Formality.ONE_FORMAL
            assert formality_classify(genus, g) is expected


def test_criterion_08_cubic_relations_witness():
    # with a triangle the cubic relations are not consequences of the quadratic ones
    for g in graphs_upto(5, 2):
        p = reduced_presentation(1, g)
        quad = LiePresentation(p.generators, [r for r in p.relations if r.weight(p.weights) == 2])
        differs = lcs_ranks(p, 3).ranks != lcs_ranks(quad, 3).ranks
        assert differs == bool(enumerate_triangles(g)), g


@pytest.mark.parametrize("key,candidates", [("g1_k2_sol2", 3 ** 10), ("g1_k2_sl2", 3 ** 15),
                                            ("g0_k4_sol2", 3 ** 12), ("g1_e2_sol2", 3 ** 8)])
def test_criterion_09_decomposition(key, candidates):
    m, s = scan(key)
    assert s.candidates == candidates and s.flats
    maps = enumerate_admissible(m)
    verdicts = [decompose_flat(w, maps).verdict for w in s.flats]
    assert set(verdicts) <= {"RankOne", "ViaMap"}
    if key == "g1_e2_sol2":
        assert set(verdicts) == {"RankOne"}


@pytest.mark.parametrize("key", ["g1_k2_sol2", "g0_k4_sol2"])
def test_criterion_10_covariant_resonance(key):
    m, s = scan(key)
    rep = verify_m3res(m, Representation.standard(sol2()), s.flats)
    assert rep.checked == len(s.flats) and rep.ok, rep.mismatches[:3]


@pytest.mark.parametrize("key", ["g1_k2_sol2", "g0_k4_sol2", "g1_e2_sol2"])
def test_criterion_11_holonomy_flat_equivalence(key):
    genus, g, _ = GRIDS[key]
    m = build_model(genus, g)
    p = raw_presentation(m)
    alg = sol2()
    total = flat = 0
    for C in iter_grid(m, alg):
        mc = mc_zero_batch(m, alg, C)
        hom = lie_hom_check_batch(p, images_from_coeffs(alg, C))
        assert np.array_equal(mc, hom)
        total += len(C)
        flat += int(mc.sum())
    assert total == 3 ** (m.dim1 * alg.dim)
    assert flat == len(scan(key)[1].flats)


def test_criterion_12_not_algebraic_witness():
    e = build_curve_model(ELLIPTIC_PUNCTURED)
    x, y, gp = e.deg1
    src = connection(e, sl2(), {(x, "E"): 1, (y, "F"): 1, (gp, "H"): -1})
    assert is_flat(src)
    m = build_model(1, complete_graph(2))
    f = enumerate_admissible(m)[0]
    pushed = push_forward(f, src, m)
    assert is_flat(pushed) and not is_rank_one(pushed)
