"""Holonomy Lie algebras of the models: raw and reduced presentations, formality."""
from __future__ import annotations

from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .graphs import Graph, enumerate_triangles
from .lie import LieElement, LiePresentation, br, gen
from .linalg import as_rational
from .model import OSModel, TruncatedCDGA


def _dual_label(b) -> str:
    if b.kind == "x":
        return f"a{b.args[0]}^{b.args[1]}"
    if b.kind == "y":
        return f"b{b.args[0]}^{b.args[1]}"
    if b.kind == "G":
        return f"C{b.args[0]},{b.args[1]}"
    return f"{b.label()}*"


def _surface_degree(b, genus: int) -> tuple[int, ...]:
    """Letter multidegree (#a^s - #b^s)_s; C-type letters get zero."""
    v = [0] * genus
    if b.kind == "x":
        v[b.args[1] - 1] = 1
    elif b.kind == "y":
        v[b.args[1] - 1] = -1
    return tuple(v)


def raw_presentation(m: TruncatedCDGA) -> LiePresentation:
    """Free Lie algebra on the dual of A^1 modulo the image of d* + mu*."""
    gens = tuple((_dual_label(b), b.weight) for b in m.deg1)
    rows: list[dict] = [dict() for _ in range(m.dim2)]
    for r, row in enumerate(m.d1.rows):
        for p, v in enumerate(row):
            if v:
                rows[r][(p,)] = v
    brackets: dict[tuple[int, int], dict] = {}
    for (p, q), vec in m.mu.items():
        if p < q:
            t = {(p, q): 1, (q, p): -1}
            for r, c in vec.items():
                for w, s in t.items():
                    rows[r][w] = rows[r].get(w, 0) + c * s
    rels = tuple(LieElement.from_tensor(t) for t in rows if any(t.values()))
    genus = getattr(m, "genus", None)
    degrees = None
    if isinstance(m, OSModel) and m.genus >= 1:
        degrees = tuple(_surface_degree(b, genus) for b in m.deg1)
    return LiePresentation(gens, rels, degrees)


class ReducedGenerators:
    """Index bookkeeping for the reduced presentation with g >= 1."""

    def __init__(self, genus: int, n: int):
        self.genus, self.n = genus, n
        self.labels: list[str] = []
        self.degrees: list[tuple[int, ...]] = []
        for i in range(n):
            for s in range(1, genus + 1):
                for kind, sign in (("a", 1), ("b", -1)):
                    self.labels.append(f"{kind}{i}^{s}")
                    d = [0] * genus
                    d[s - 1] = sign
                    self.degrees.append(tuple(d))

    def a(self, i: int, s: int) -> LieElement:
        return gen(2 * (i * self.genus + s - 1))

    def b(self, i: int, s: int) -> LieElement:
        return gen(2 * (i * self.genus + s - 1) + 1)

    def C(self, i: int, j: int) -> LieElement:
        """The chosen representative [a_i^1, b_j^1] of C_ij (i < j)."""
        i, j = min(i, j), max(i, j)
        return br(self.a(i, 1), self.b(j, 1))


def reduced_presentation(genus: int, graph: Graph) -> LiePresentation:
    if genus == 0:
        return _reduced_genus0(graph)
    return _reduced_positive(genus, graph)


def _reduced_genus0(graph: Graph) -> LiePresentation:
    idx = graph.edge_index()
    gens = tuple((f"C{i},{j}", 1) for i, j in graph.edges)

    def C(i, j):
        return gen(idx[(min(i, j), max(i, j))])

    rels: list[LieElement] = []
    for i in range(graph.n):
        s = LieElement()
        for j in graph.neighbors(i):
            s = s + C(i, j)
        if s:
            rels.append(s)
    for e, f in combinations(graph.edges, 2):
        if not set(e) & set(f):
            rels.append(br(C(*e), C(*f)))
    for j in range(graph.n):
        for i, k in combinations(graph.neighbors(j), 2):
            if not graph.has_edge(i, k):
                rels.append(br(C(i, j), C(j, k)))
    for tri in enumerate_triangles(graph):
        for mid in tri:
            i, k = (v for v in tri if v != mid)
            rels.append(br(C(i, mid) + C(mid, k), C(i, k)))
    return LiePresentation(gens, tuple(r for r in rels if r))


def _reduced_positive(genus: int, graph: Graph) -> LiePresentation:
    n = graph.n
    R = ReducedGenerators(genus, n)
    a, b, C = R.a, R.b, R.C
    rels: list[LieElement] = []
    for i, j in combinations(range(n), 2):
        rep = C(i, j)
        for s in range(1, genus + 1):
            if s > 1:
                rels.append(br(a(i, s), b(j, s)) - rep)
            rels.append(br(a(j, s), b(i, s)) - rep)
        if not graph.has_edge(i, j):
            rels.append(rep)
        for s in range(1, genus + 1):
            for t in range(1, genus + 1):
                if s != t:
                    rels.append(br(a(i, s), b(j, t)))
                    rels.append(br(a(j, s), b(i, t)))
                rels.append(br(a(i, s), a(j, t)))
                rels.append(br(b(i, s), b(j, t)))
    for i in range(n):
        s_rel = LieElement()
        for j in graph.neighbors(i):
            s_rel = s_rel + C(i, j)
        for s in range(1, genus + 1):
            s_rel = s_rel - br(b(i, s), a(i, s))
        rels.append(s_rel)
    for i, j in graph.edges:
        for k in range(n):
            if k in (i, j):
                continue
            for s in range(1, genus + 1):
                rels.append(br(a(k, s), C(i, j)))
                rels.append(br(b(k, s), C(i, j)))
    gens = tuple((lab, 1) for lab in R.labels)
    return LiePresentation(gens, tuple(r for r in rels if r), tuple(R.degrees))


def redundant_relations(genus: int, graph: Graph) -> dict[str, list[LieElement]]:
    """Consequences of the reduced relations for g >= 1 that the presentation omits."""
    if genus < 1:
        raise ValueError("redundant relations are stated for g >= 1")
    R = ReducedGenerators(genus, graph.n)
    a, b, C = R.a, R.b, R.C
    out: dict[str, list[LieElement]] = {"disjoint_edges": [], "vertex_sum": [], "triangle": [], "open_path": []}
    for e, f in combinations(graph.edges, 2):
        if not set(e) & set(f):
            out["disjoint_edges"].append(br(C(*e), C(*f)))
    for i, j in combinations(range(graph.n), 2):
        for s in range(1, genus + 1):
            out["vertex_sum"].append(br(a(i, s) + a(j, s), C(i, j)))
            out["vertex_sum"].append(br(b(i, s) + b(j, s), C(i, j)))
    for i, j, k in enumerate_triangles(graph):
        out["triangle"].append(br(C(i, j) + C(j, k), C(i, k)))
    for j in range(graph.n):
        for i, k in combinations(graph.neighbors(j), 2):
            if not graph.has_edge(i, k):
                out["open_path"].append(br(C(i, j), C(j, k)))
    return out


class Formality(Enum):
    ONE_FORMAL = "OneFormal"
    FILTERED_FORMAL_NOT_ONE_FORMAL = "FilteredFormalNotOneFormal"

    def __str__(self) -> str:
        return self.value


def formality_classify(genus: int, graph: Graph) -> Formality:
    if genus == 1 and enumerate_triangles(graph):
        return Formality.FILTERED_FORMAL_NOT_ONE_FORMAL
    return Formality.ONE_FORMAL


# -- evaluation in matrix Lie algebras --------------------------------------

Matrix = tuple[tuple[Fraction, ...], ...]


def _mat(x) -> Matrix:
    return tuple(tuple(as_rational(v) for v in row) for row in x)


def _mat_mul(x: Matrix, y: Matrix) -> Matrix:
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in zip(*y)) for row in x)


def mat_bracket(x: Matrix, y: Matrix) -> Matrix:
    xy, yx = _mat_mul(x, y), _mat_mul(y, x)
    return tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(xy, yx))


def _mat_add(x: Matrix, y: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(x, y))


def _mat_scale(c, x: Matrix) -> Matrix:
    return tuple(tuple(c * a for a in r) for r in x)


def evaluate_relation(r: LieElement, images: Sequence[Matrix]) -> Matrix:
    size = len(images[0]) if images else 0
    zero = tuple(tuple(Fraction(0) for _ in range(size)) for _ in range(size))
    return r.evaluate(lambda i: images[i], mat_bracket, zero, _mat_add, _mat_scale)


def lie_hom_check(p: LiePresentation, images: Mapping[str, Sequence], algebra=None) -> bool:
    """True iff generator -> matrix extends to a Lie map killing every relation.

    ``algebra`` (a :class:`partconf.flat.MatrixLieAlgebra`) restricts images to its span.
    """
    missing = set(p.labels) - set(images)
    if missing:
        raise ValueError(f"no image for generators {sorted(missing)}")
    mats = [_mat(images[lab]) for lab in p.labels]
    if algebra is not None:
        for lab, mtx in zip(p.labels, mats):
            if algebra.coordinates(mtx) is None:
                raise ValueError(f"image of {lab} lies outside {algebra.kind}")
    for r in p.relations:
        val = evaluate_relation(r, mats)
        if any(v for row in val for v in row):
            return False
    return True
