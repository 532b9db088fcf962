"""Admissible maps of general type and their pullbacks on truncated models."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graphs import enumerate_k4
from .linalg import QMatrix, Subspace, rank
from .model import (ELLIPTIC_PUNCTURED, GENUS_TWO_PLUS, PROJ_LINE_THREE_POINTS, CurveModel, Gij, OSModel,
                    Omega, X, Y, build_curve_model)


@dataclass(frozen=True)
class MapLabel:
    kind: str  # "vertex", "edge" or "quad"
    vertices: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind} " + "-".join(map(str, self.vertices))


@dataclass(frozen=True, eq=False)
class AdmissibleMap:
    """A map f: F(g, graph) -> curve, recorded through f* on truncated models.

    ``pullback_deg1`` has shape (model dim A^1) x (target dim A^1); likewise in degree 2.
    """

    label: MapLabel
    target: CurveModel
    pullback_deg1: QMatrix
    pullback_deg2: QMatrix

    def __str__(self) -> str:
        return str(self.label)


def _columns_to_matrix(cols: list[dict[int, Fraction]], nrows: int) -> QMatrix:
    return QMatrix.from_sparse(nrows, len(cols), {(r, c): v for c, col in enumerate(cols) for r, v in col.items()})


def _vertex_map(m: OSModel, i: int, target: CurveModel) -> AdmissibleMap:
    cols = []
    for s in range(1, m.genus + 1):
        cols.append({m.index1[X(i, s)]: Fraction(1)})
        cols.append({m.index1[Y(i, s)]: Fraction(1)})
    p1 = _columns_to_matrix(cols, m.dim1)
    p2 = _columns_to_matrix([{m.index2[Omega(i)]: Fraction(1)}], m.dim2)
    return AdmissibleMap(MapLabel("vertex", (i,)), target, p1, p2)


def _edge_map(m: OSModel, i: int, j: int, target: CurveModel) -> AdmissibleMap:
    one = Fraction(1)
    cols = [{m.index1[X(i, 1)]: one, m.index1[X(j, 1)]: -one},
            {m.index1[Y(i, 1)]: one, m.index1[Y(j, 1)]: -one},
            {m.index1[Gij(i, j)]: one}]
    p1 = _columns_to_matrix(cols, m.dim1)
    dg = m.d1.col(m.index1[Gij(i, j)])
    p2 = QMatrix.from_columns([dg], m.dim2)
    return AdmissibleMap(MapLabel("edge", (i, j)), target, p1, p2)


def _quad_map(m: OSModel, q: tuple[int, int, int, int], target: CurveModel) -> AdmissibleMap:
    i, j, k, l = q
    one = Fraction(1)

    def pair_sum(a, b, c, d):
        return {m.index1[Gij(a, b)]: one, m.index1[Gij(c, d)]: one}

    cols = [pair_sum(i, l, j, k), pair_sum(j, l, i, k), pair_sum(i, j, k, l)]
    p1 = _columns_to_matrix(cols, m.dim1)
    p2 = _columns_to_matrix([{m.index2[Omega(v)]: one for v in q}], m.dim2)
    return AdmissibleMap(MapLabel("quad", q), target, p1, p2)


def enumerate_admissible(m: OSModel) -> list[AdmissibleMap]:
    g, graph = m.genus, m.graph
    if g >= 2:
        target = build_curve_model(GENUS_TWO_PLUS, g)
        return [_vertex_map(m, i, target) for i in range(graph.n)]
    if g == 1:
        target = build_curve_model(ELLIPTIC_PUNCTURED)
        return [_edge_map(m, i, j, target) for i, j in graph.edges]
    target = build_curve_model(PROJ_LINE_THREE_POINTS)
    return [_quad_map(m, q, target) for q in enumerate_k4(graph)]


def image_h1(f: AdmissibleMap, m: OSModel) -> Subspace:
    """im H^1(f) inside H^1(A), expressed in A^1 coordinates."""
    if f.pullback_deg1.nrows != m.dim1 or f.pullback_deg2.nrows != m.dim2:
        raise ValueError(f"map {f} does not belong to {m!r}")
    ker = f.target.h1
    return Subspace.span([f.pullback_deg1 @ v for v in ker.vectors()], m.dim1)


def pushforward_deg1(f: AdmissibleMap, v) -> tuple[Fraction, ...]:
    return f.pullback_deg1 @ v


def commutes_with_d(f: AdmissibleMap, m: OSModel) -> bool:
    return f.pullback_deg2 @ f.target.d1 == m.d1 @ f.pullback_deg1


def is_multiplicative(f: AdmissibleMap, m: OSModel) -> bool:
    t = f.target
    cols = f.pullback_deg1.columns()
    for p, q in combinations(range(t.dim1), 2):
        lhs = m.product(cols[p], cols[q])
        tv = [Fraction(0)] * t.dim2
        for r, c in t.mu_pair(p, q).items():
            tv[r] = c
        if lhs != f.pullback_deg2 @ tv:
            return False
    return True


def is_injective(f: AdmissibleMap) -> bool:
    return rank(f.pullback_deg1) == f.pullback_deg1.ncols


def is_multiplicative_on_cohomology(f: AdmissibleMap, m: OSModel) -> bool:
    """Products of pulled-back closed classes vanish exactly when they do in the target."""
    t = f.target
    basis = t.h1.vectors()
    for a, b in combinations(basis, 2):
        lhs = m.product(f.pullback_deg1 @ a, f.pullback_deg1 @ b)
        if lhs != f.pullback_deg2 @ t.product(a, b):
            return False
    return True
