from fractions import Fraction

import numpy as np
import pytest
import sympy

from partconf.admissible import enumerate_admissible
from partconf.flat import (E, F, H, BudgetExceededError, FlatConnection, NotFlatError, Representation, connection,
                           covariant_h1, decompose_flat, grid_enumerate_flat, images_from_coeffs, is_flat,
                           is_rank_one, iter_grid, lie_hom_check_batch, mc_residual, mc_zero_batch, pi_membership,
                           push_forward, rank_one_factor, sl2, sol2, verify_m3res)
from partconf.graphs import Graph, complete_graph, edgeless_graph
from partconf.holonomy import lie_hom_check, mat_bracket, raw_presentation
from partconf.linalg import QMatrix
from partconf.model import ELLIPTIC_PUNCTURED, X, Y, build_curve_model, build_model


def _elliptic_witness():
    e = build_curve_model(ELLIPTIC_PUNCTURED)
    x, y, gp = e.deg1
    return connection(e, sl2(), {(x, "E"): 1, (y, "F"): 1, (gp, "H"): -1})


def _zero(m, alg):
    return FlatConnection(m, alg, QMatrix.zeros(m.dim1, alg.dim))


def test_algebras():
    assert sl2().dim == 3 and sol2().dim == 2
    alg = sl2()
    assert alg.element(alg.structure[1][2]) == mat_bracket(E, F) == H
    assert sol2().coordinates(F) is None
    with pytest.raises(ValueError):
        Representation(sl2(), [H, F, E])
    with pytest.raises(ValueError):
        FlatConnection(build_model(1, complete_graph(2)), sl2(), QMatrix.zeros(5, 2))


def test_adjoint_is_representation():
    assert Representation.adjoint(sl2()).dim_v == 3
    assert Representation.adjoint(sol2()).dim_v == 2


def test_mc_examples():
    m = build_model(1, complete_graph(2))
    assert not any(mc_residual(_zero(m, sl2())))
    eta = m.vector({X(0, 1): 2, Y(1, 1): -1})
    assert is_flat(connection(m, sl2(), {(eta, "E"): 1}))
    assert is_flat(_elliptic_witness())
    assert not is_flat(connection(m, sl2(), {(X(0, 1), "E"): 1, (Y(0, 1), "F"): 1}))


def test_rank_one_examples():
    m = build_model(1, complete_graph(2))
    assert is_rank_one(_zero(m, sl2()))
    assert is_rank_one(connection(m, sl2(), {(m.vector({X(0, 1): 1, X(1, 1): -1}), "H"): 1}))
    f = enumerate_admissible(m)[0]
    pushed = push_forward(f, _elliptic_witness(), m)
    assert rank_one_factor(pushed) is None and not is_rank_one(pushed)


def test_rank_one_needs_closed_factor():
    m = build_model(1, complete_graph(2))
    from partconf.model import Gij
    assert not is_rank_one(connection(m, sol2(), {(Gij(0, 1), "E"): 1}))


def test_pi_examples():
    m = build_model(1, complete_graph(2))
    th = Representation.standard(sl2())
    assert pi_membership(connection(m, sl2(), {(X(0, 1), "E"): 1}), th)
    assert not pi_membership(connection(m, sl2(), {(X(0, 1), "H"): 1}), th)
    assert pi_membership(_zero(m, sl2()), th)


def test_covariant_h1_examples():
    m = build_model(1, complete_graph(2))
    th = Representation.standard(sl2())
    assert covariant_h1(_zero(m, sl2()), th) == m.h1.dim * 2
    assert covariant_h1(_zero(m, sl2()), Representation.adjoint(sl2())) == m.h1.dim * 3
    assert covariant_h1(connection(m, sl2(), {(m.vector({X(0, 1): 1, X(1, 1): -1}), "H"): 1}), th) >= 1
    assert covariant_h1(connection(m, sl2(), {(m.vector({X(0, 1): 1, X(1, 1): 1}), "E"): 1}), th) >= 1
    with pytest.raises(NotFlatError):
        covariant_h1(connection(m, sl2(), {(X(0, 1), "E"): 1, (Y(0, 1), "F"): 1}), th)


def test_covariant_h1_generic_rank_one_vanishes():
    m = build_model(1, complete_graph(2))
    omega = connection(m, sl2(), {(m.vector({X(0, 1): 1, X(1, 1): 1}), "H"): 1})
    assert covariant_h1(omega, Representation.standard(sl2())) == 0


def test_decompose_examples():
    m = build_model(1, complete_graph(2))
    assert str(decompose_flat(connection(m, sl2(), {(m.vector({Y(0, 1): 1, Y(1, 1): -1}), "F"): 1}))) == "RankOne"
    f = enumerate_admissible(m)[0]
    src = _elliptic_witness()
    d = decompose_flat(push_forward(f, src, m))
    assert str(d) == "ViaMap(edge 0-1)"
    assert d.source.coeffs == src.coeffs
    bad = connection(m, sl2(), {(X(0, 1), "E"): 1, (Y(0, 1), "F"): 1})
    assert decompose_flat(bad).verdict == "NotFlat"


def test_grid_zero_only():
    for genus, g in [(1, complete_graph(2)), (0, complete_graph(4)), (2, Graph(1))]:
        m = build_model(genus, g)
        scan = grid_enumerate_flat(m, sol2(), [0])
        assert scan.candidates == 1 and len(scan.flats) == 1 and scan.flats[0].coeffs.is_zero()


def test_grid_budget():
    with pytest.raises(BudgetExceededError):
        grid_enumerate_flat(build_model(1, complete_graph(2)), sl2(), (-1, 0, 1), budget=1000)


def test_grid_matches_exact_check_and_is_sorted():
    m = build_model(1, Graph(1))
    scan = grid_enumerate_flat(m, sol2(), (-1, 0, 1))
    assert scan.candidates == 3 ** 4
    keys = [tuple(v for row in w.coeffs.rows for v in row) for w in scan.flats]
    assert keys == sorted(keys)
    assert all(is_flat(w) for w in scan.flats)
    n_exact = 0
    for C in iter_grid(m, sol2()):
        for c in C:
            n_exact += is_flat(FlatConnection(m, sol2(), QMatrix([[int(v) for v in r] for r in c], 2)))
    assert n_exact == len(scan.flats)


def test_rational_grid_and_workers_agree():
    m = build_model(1, Graph(1))
    half = (Fraction(-1, 2), 0, Fraction(1, 2))
    a = grid_enumerate_flat(m, sol2(), half)
    b = grid_enumerate_flat(m, sol2(), (-1, 0, 1), workers=2)
    assert len(a.flats) == len(b.flats)
    assert [w.key() for w in b.flats] == [w.key() for w in grid_enumerate_flat(m, sol2(), (-1, 0, 1)).flats]


def test_edgeless_genus1_all_rank_one():
    m = build_model(1, edgeless_graph(2))
    scan = grid_enumerate_flat(m, sol2())
    assert scan.flats and all(decompose_flat(w).verdict == "RankOne" for w in scan.flats)


def test_non_rank_one_solutions_live_on_both_vertices():
    # sol2 solutions on the (1, K2) grid are all rank one; sl2 pushforwards give the others
    m = build_model(1, complete_graph(2))
    assert all(is_rank_one(w) for w in grid_enumerate_flat(m, sol2()).flats)
    f = enumerate_admissible(m)[0]
    found = 0
    for src in grid_enumerate_flat(f.target, sl2()).flats:
        w = push_forward(f, src, m)
        if not is_rank_one(w):
            found += 1
            assert decompose_flat(w).verdict == "ViaMap"
            rows = w.coeffs.rows
            assert any(rows[p] for p in (0, 1)) and any(rows[p] for p in (2, 3))
    assert found


def test_pushforward_flatness():
    m = build_model(1, complete_graph(3))
    maps = enumerate_admissible(m)
    target = maps[0].target
    srcs = grid_enumerate_flat(target, sol2()).flats
    assert srcs
    for f in maps:
        for s in srcs:
            assert is_flat(push_forward(f, s, m))


def _twisted_complex(w, th):
    m, N = w.model, th.dim_v
    ths = [th.of(w.coeffs.row(p)) for p in range(m.dim1)]
    d0 = sympy.zeros(m.dim1 * N, N)
    for p in range(m.dim1):
        for i in range(N):
            for v in range(N):
                d0[p * N + i, v] = ths[p][i][v]
    d1 = sympy.zeros(m.dim2 * N, m.dim1 * N)
    for a in range(m.dim1):
        for v in range(N):
            for r in range(m.dim2):
                d1[r * N + v, a * N + v] += m.d1[r, a]
            for p in range(m.dim1):
                for r, c in m.mu_pair(p, a).items():
                    for i in range(N):
                        d1[r * N + i, a * N + v] += c * ths[p][i][v]
    return d0, d1


@pytest.mark.parametrize("genus,graph", [(0, complete_graph(4)), (1, complete_graph(2))])
def test_covariant_complex_against_sympy(genus, graph):
    m = build_model(genus, graph)
    th = Representation.standard(sol2())
    flats = grid_enumerate_flat(m, sol2()).flats
    for w in flats[::max(1, len(flats) // 40)]:
        d0, d1 = _twisted_complex(w, th)
        assert (d1 * d0).is_zero_matrix
        assert covariant_h1(w, th) == d1.shape[1] - d1.rank() - d0.rank()


def test_batch_agrees_with_exact():
    m = build_model(1, complete_graph(2))
    alg = sol2()
    p = raw_presentation(m)
    C = next(iter_grid(m, alg))
    mc = mc_zero_batch(m, alg, C)
    hom = lie_hom_check_batch(p, images_from_coeffs(alg, C))
    assert (mc == hom).all()
    for c, ok in list(zip(C, mc))[:300]:
        w = FlatConnection(m, alg, QMatrix([[int(v) for v in r] for r in c], alg.dim))
        assert is_flat(w) == bool(ok)
        imgs = {lab: w.lie_value(k) for k, lab in enumerate(p.labels)}
        assert lie_hom_check(p, imgs) == bool(ok)


def test_resonance_comparison_examples():
    m = build_model(1, complete_graph(2))
    th = Representation.standard(sol2())
    assert verify_m3res(m, th, [_zero(m, sol2())]).ok
    with pytest.raises(ValueError):
        verify_m3res(build_model(0, complete_graph(3)), th, [])


def test_resonance_comparison_genus2_constructed_points():
    m = build_model(2, Graph(2, [(0, 1)]))
    th = Representation.standard(sl2())
    pts = [connection(m, sl2(), {(X(0, 1), "E"): 1}),
           connection(m, sl2(), {(m.vector({X(0, 1): 1, Y(0, 2): 2}), "H"): 1})]
    f = enumerate_admissible(m)[1]
    t = f.target
    pts.append(push_forward(f, connection(t, sl2(), {(t.deg1[0], "E"): 1, (t.deg1[1], "F"): 1,
                                                     (t.deg1[2], "H"): 1, (t.deg1[3], "E"): 1}), m))
    pts = [w for w in pts if is_flat(w)]
    assert len(pts) >= 2
    assert verify_m3res(m, th, pts).ok


def test_images_shape():
    m = build_model(1, complete_graph(2))
    C = np.zeros((3, m.dim1, 2), dtype=np.int64)
    assert images_from_coeffs(sol2(), C).shape == (3, m.dim1, 2, 2)
