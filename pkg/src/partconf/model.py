"""Truncated Orlik-Solomon models A^{<=2}(g, graph) and the curve models.

A model is stored as explicit ordered bases in degrees 1 and 2, the matrix
of ``d: A^1 -> A^2`` and a sparse antisymmetric product table on degree-1
basis pairs.  The weight-3 and weight-4 parts of ``A^2`` are quotients of
``A^1_1 (x) G`` and ``/\\^2 G``; we realize them by row reducing the explicit
relation matrices and keeping the non-pivot raw coordinates as basis.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import NamedTuple, Sequence

from .graphs import Graph, enumerate_triangles
from .linalg import QMatrix, Subspace, add_vectors, as_rational, kernel_basis, rref


class BasisIndex(NamedTuple):
    kind: str
    args: tuple
    degree: int
    weight: int

    def label(self) -> str:
        k, a = self.kind, self.args
        if k in ("x", "y"):
            return f"{k}{a[0]}^{a[1]}"
        if k == "G":
            return f"G{a[0]},{a[1]}"
        if k == "w":
            return f"w{a[0]}"
        if k == "cross":
            return f"{a[0].label()}*{a[1].label()}"
        if k == "tens":
            return f"{a[0].label()}*{a[1].label()}"
        if k == "wedge":
            return f"{a[0].label()}^{a[1].label()}"
        return k

    def __str__(self) -> str:
        return self.label()


def X(i: int, s: int) -> BasisIndex:
    return BasisIndex("x", (i, s), 1, 1)


def Y(i: int, s: int) -> BasisIndex:
    return BasisIndex("y", (i, s), 1, 1)


def Gij(i: int, j: int) -> BasisIndex:
    return BasisIndex("G", (min(i, j), max(i, j)), 1, 2)


def Omega(i: int) -> BasisIndex:
    return BasisIndex("w", (i,), 2, 2)


def Cross(u: BasisIndex, v: BasisIndex) -> BasisIndex:
    if u.args[0] >= v.args[0]:
        raise ValueError("Cross needs the first factor on the smaller vertex")
    return BasisIndex("cross", (u, v), 2, 2)


def Tens(u: BasisIndex, e: BasisIndex) -> BasisIndex:
    return BasisIndex("tens", (u, e), 2, 3)


def Wedge(e: BasisIndex, f: BasisIndex) -> BasisIndex:
    if not e.args < f.args:
        raise ValueError("Wedge needs e < f")
    return BasisIndex("wedge", (e, f), 2, 4)


def _named(kind: str, degree: int, weight: int) -> BasisIndex:
    return BasisIndex(kind, (), degree, weight)


Vector = tuple[Fraction, ...]


class TruncatedCDGA:
    """A connected cdga truncated above degree 2, in explicit coordinates.

    ``mu[(p, q)]`` is the sparse degree-2 coordinate dict of the product of
    degree-1 basis elements ``p`` and ``q`` (indices); missing pairs are zero.
    """

    def __init__(self, deg1: Sequence[BasisIndex], deg2: Sequence[BasisIndex], d1: QMatrix,
                 mu: dict[tuple[int, int], dict[int, Fraction]]):
        self.deg1 = tuple(deg1)
        self.deg2 = tuple(deg2)
        if d1.shape != (len(self.deg2), len(self.deg1)):
            raise ValueError(f"d1 has shape {d1.shape}, expected {(len(self.deg2), len(self.deg1))}")
        self.d1 = d1
        self.mu = {k: dict(v) for k, v in mu.items() if v}
        self.index1 = {b: k for k, b in enumerate(self.deg1)}
        self.index2 = {b: k for k, b in enumerate(self.deg2)}

    @property
    def dim1(self) -> int:
        return len(self.deg1)

    @property
    def dim2(self) -> int:
        return len(self.deg2)

    def labels1(self) -> list[str]:
        return [b.label() for b in self.deg1]

    def labels2(self) -> list[str]:
        return [b.label() for b in self.deg2]

    def basis_vector(self, b: BasisIndex) -> Vector:
        v = [Fraction(0)] * self.dim1
        v[self.index1[b]] = Fraction(1)
        return tuple(v)

    def vector(self, coeffs: dict) -> Vector:
        """Degree-1 vector from ``{BasisIndex: coefficient}``."""
        v = [Fraction(0)] * self.dim1
        for b, c in coeffs.items():
            v[self.index1[b]] += as_rational(c)
        return tuple(v)

    def mu_pair(self, p: int, q: int) -> dict[int, Fraction]:
        return self.mu.get((p, q), {})

    def product(self, u: Sequence, v: Sequence) -> Vector:
        """Product of two degree-1 elements, as a degree-2 coordinate vector."""
        out = [Fraction(0)] * self.dim2
        nu = [(p, as_rational(a)) for p, a in enumerate(u) if a]
        nv = [(q, as_rational(b)) for q, b in enumerate(v) if b]
        for p, a in nu:
            for q, b in nv:
                for r, c in self.mu.get((p, q), {}).items():
                    out[r] += a * b * c
        return tuple(out)

    def differential(self, u: Sequence) -> Vector:
        return self.d1 @ u

    def is_closed(self, u: Sequence) -> bool:
        return not any(self.differential(u))

    @cached_property
    def h1(self) -> Subspace:
        return kernel_basis(self.d1)

    def h1_dim(self) -> int:
        return self.h1.dim

    def euler_characteristic(self) -> int:
        """Euler characteristic of the cohomology of the truncated model."""
        from .linalg import rank
        r = rank(self.d1)
        h1 = self.dim1 - r
        h2 = self.dim2 - r
        return 1 - h1 + h2

    def to_dict(self) -> dict:
        d1 = [[r, c, str(self.d1[r, c])] for c in range(self.dim1) for r in range(self.dim2) if self.d1[r, c]]
        mu = [[p, q, r, str(c)] for (p, q), vec in sorted(self.mu.items()) if p < q
              for r, c in sorted(vec.items())]
        return {"deg1": self.labels1(), "deg2": self.labels2(), "d1": d1, "mu": mu}


class OSModel(TruncatedCDGA):
    """The truncated Orlik-Solomon model of F(genus, graph)."""

    def __init__(self, genus: int, graph: Graph, deg1, deg2, d1, mu, *, pieces: dict[str, range],
                 tens_raw: tuple[BasisIndex, ...], tens_projection: QMatrix,
                 wedge_raw: tuple[BasisIndex, ...], wedge_projection: QMatrix):
        super().__init__(deg1, deg2, d1, mu)
        self.genus = genus
        self.graph = graph
        self.pieces = pieces
        self.tens_raw = tens_raw
        self.tens_projection = tens_projection
        self.wedge_raw = wedge_raw
        self.wedge_projection = wedge_projection

    def __repr__(self) -> str:
        return f"OSModel(genus={self.genus}, graph={self.graph})"

    @property
    def edge_basis(self) -> list[int]:
        return [self.index1[Gij(i, j)] for i, j in self.graph.edges]

    @property
    def surface_basis(self) -> list[int]:
        return [k for k, b in enumerate(self.deg1) if b.kind in ("x", "y")]

    def dim_piece(self, name: str) -> int:
        return len(self.pieces[name])

    def h1_vector(self, b: BasisIndex) -> Vector:
        return self.basis_vector(b)

    def dG(self, i: int, j: int) -> Vector:
        """d(G_ij) evaluated from the defining formula with the written orientation ``(i, j)``."""
        out = [Fraction(0)] * self.dim2
        out[self.index2[Omega(i)]] += 1
        out[self.index2[Omega(j)]] += 1
        for s in range(1, self.genus + 1):
            yx = self.product(self.basis_vector(Y(i, s)), self.basis_vector(X(j, s)))
            xy = self.product(self.basis_vector(X(i, s)), self.basis_vector(Y(j, s)))
            out = [a + b - c for a, b, c in zip(out, yx, xy)]
        return tuple(out)

    def to_dict(self) -> dict:
        doc = super().to_dict()
        doc = {"genus": self.genus, "graph": self.graph.to_dict(),
               "pieces": {name: [self.deg2[k].label() for k in rng] if name.startswith("A2") else
                          [self.deg1[k].label() for k in rng] for name, rng in self.pieces.items()},
               **doc}
        return doc

    def dump_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _surface_classes(i: int, g: int) -> list[BasisIndex]:
    out = []
    for s in range(1, g + 1):
        out += [X(i, s), Y(i, s)]
    return out


def _quotient(raw: list[BasisIndex], relations: list[dict[int, int]]) -> tuple[list[BasisIndex], QMatrix]:
    """Basis of span(raw)/span(relations) and the raw -> quotient projection."""
    nraw = len(raw)
    if relations:
        rel = QMatrix.from_sparse(len(relations), nraw,
                                  {(r, c): v for r, row in enumerate(relations) for c, v in row.items()})
        reduced, piv = rref(rel)
    else:
        reduced, piv = QMatrix.zeros(0, nraw), []
    pivset = set(piv)
    free = [c for c in range(nraw) if c not in pivset]
    pos = {c: k for k, c in enumerate(free)}
    proj = [[Fraction(0)] * nraw for _ in free]
    for c in free:
        proj[pos[c]][c] = Fraction(1)
    for r, pc in enumerate(piv):
        for c in free:
            if reduced[r, c]:
                proj[pos[c]][pc] = -reduced[r, c]
    return [raw[c] for c in free], QMatrix(proj, nraw)


def _sym_product(u: BasisIndex, v: BasisIndex) -> tuple[BasisIndex, int] | None:
    """Product of two surface classes in H(Sigma_g^V) as (basis element, sign)."""
    (i, s), (j, t) = u.args, v.args
    if i == j:
        if s != t or u.kind == v.kind:
            return None
        return Omega(i), (1 if u.kind == "x" else -1)
    if i < j:
        return Cross(u, v), 1
    return Cross(v, u), -1


def build_model(genus: int, graph: Graph) -> OSModel:
    if genus < 0:
        raise ValueError("genus must be non-negative")
    g, n = genus, graph.n
    surf = [b for i in range(n) for b in _surface_classes(i, g)]
    gens = [Gij(i, j) for i, j in graph.edges]
    deg1 = surf + gens

    a22 = [Omega(i) for i in range(n)]
    for i, j in combinations(range(n), 2):
        for u in _surface_classes(i, g):
            for v in _surface_classes(j, g):
                a22.append(Cross(u, v))

    tens_raw = [Tens(u, e) for e in gens for u in surf]
    tpos = {b: k for k, b in enumerate(tens_raw)}
    tens_rel = []
    for e in gens:
        i, j = e.args
        for s in range(1, g + 1):
            for cls in (X, Y):
                tens_rel.append({tpos[Tens(cls(i, s), e)]: 1, tpos[Tens(cls(j, s), e)]: -1})
    a23, tproj = _quotient(tens_raw, tens_rel)

    wedge_raw = [Wedge(e, f) for e, f in combinations(gens, 2)]
    wpos = {b: k for k, b in enumerate(wedge_raw)}
    wedge_rel = []
    for i, j, k in enumerate_triangles(graph):
        gij, gik, gjk = Gij(i, j), Gij(i, k), Gij(j, k)
        # G_jk^G_ik - G_ij^G_ik + G_ij^G_jk, rewritten with e < f
        wedge_rel.append({wpos[Wedge(gik, gjk)]: -1, wpos[Wedge(gij, gik)]: -1, wpos[Wedge(gij, gjk)]: 1})
    a24, wproj = _quotient(wedge_raw, wedge_rel)

    deg2 = a22 + a23 + a24
    idx2 = {b: k for k, b in enumerate(deg2)}
    off23, off24 = len(a22), len(a22) + len(a23)
    pieces = {
        "A1_1": range(0, len(surf)),
        "A1_2": range(len(surf), len(deg1)),
        "A2_2": range(0, off23),
        "A2_3": range(off23, off24),
        "A2_4": range(off24, len(deg2)),
    }

    def tens_class(u: BasisIndex, e: BasisIndex) -> dict[int, Fraction]:
        col = tpos[Tens(u, e)]
        return {off23 + r: tproj[r, col] for r in range(tproj.nrows) if tproj[r, col]}

    def wedge_class(e: BasisIndex, f: BasisIndex) -> dict[int, Fraction]:
        col = wpos[Wedge(e, f)]
        return {off24 + r: wproj[r, col] for r in range(wproj.nrows) if wproj[r, col]}

    mu: dict[tuple[int, int], dict[int, Fraction]] = {}
    for p, q in combinations(range(len(deg1)), 2):
        u, v = deg1[p], deg1[q]
        if u.kind != "G" and v.kind != "G":
            res = _sym_product(u, v)
            vec = {idx2[res[0]]: Fraction(res[1])} if res else {}
        elif u.kind != "G":
            vec = tens_class(u, v)
        elif v.kind != "G":
            vec = {r: -c for r, c in tens_class(v, u).items()}
        else:
            vec = wedge_class(u, v)
        if vec:
            mu[(p, q)] = vec
            mu[(q, p)] = {r: -c for r, c in vec.items()}

    idx1 = {b: k for k, b in enumerate(deg1)}
    d1 = {}
    for e in gens:
        i, j = e.args
        col = idx1[e]
        terms = [{idx2[Omega(i)]: 1}, {idx2[Omega(j)]: 1}]
        for s in range(1, g + 1):
            terms.append(mu[(idx1[Y(i, s)], idx1[X(j, s)])])
            terms.append({r: -c for r, c in mu[(idx1[X(i, s)], idx1[Y(j, s)])].items()})
        for r, c in add_vectors(*terms).items():
            d1[(r, col)] = c
    d1m = QMatrix.from_sparse(len(deg2), len(deg1), d1)

    return OSModel(genus, graph, deg1, deg2, d1m, mu, pieces=pieces,
                   tens_raw=tuple(tens_raw), tens_projection=tproj,
                   wedge_raw=tuple(wedge_raw), wedge_projection=wproj)


def h1_basis(m: TruncatedCDGA) -> Subspace:
    """Basis of H^1 = ker(d: A^1 -> A^2), in A^1 coordinates."""
    return m.h1


def betti1(genus: int, graph: Graph) -> int:
    return h1_basis(build_model(genus, graph)).dim


# -- curve models ---------------------------------------------------------

class CurveModel(TruncatedCDGA):
    def __init__(self, kind: str, deg1, deg2, d1, mu, genus: int | None = None):
        super().__init__(deg1, deg2, d1, mu)
        self.kind = kind
        self.genus = genus

    def __repr__(self) -> str:
        return f"CurveModel({self.kind}{'' if self.genus is None else f', g={self.genus}'})"


GENUS_TWO_PLUS = "GenusTwoPlus"
ELLIPTIC_PUNCTURED = "EllipticPunctured"
PROJ_LINE_THREE_POINTS = "ProjLineThreePoints"


def build_curve_model(kind: str, genus: int | None = None) -> CurveModel:
    if kind == GENUS_TWO_PLUS:
        if genus is None or genus < 2:
            raise ValueError("GenusTwoPlus needs genus >= 2")
        deg1 = []
        for s in range(1, genus + 1):
            deg1 += [_named(f"x^{s}", 1, 1), _named(f"y^{s}", 1, 1)]
        mu = {}
        for s in range(genus):
            mu[(2 * s, 2 * s + 1)] = {0: Fraction(1)}
            mu[(2 * s + 1, 2 * s)] = {0: Fraction(-1)}
        return CurveModel(kind, deg1, [_named("w", 2, 2)], QMatrix.zeros(1, 2 * genus), mu, genus)
    if kind == ELLIPTIC_PUNCTURED:
        deg1 = [_named("x", 1, 1), _named("y", 1, 1), _named("g'", 1, 2)]
        mu = {(0, 1): {0: Fraction(1)}, (1, 0): {0: Fraction(-1)}}
        return CurveModel(kind, deg1, [_named("O", 2, 2)], QMatrix([[0, 0, 1]]), mu, 1)
    if kind == PROJ_LINE_THREE_POINTS:
        deg1 = [_named("G0", 1, 2), _named("G1", 1, 2), _named("Ginf", 1, 2)]
        return CurveModel(kind, deg1, [_named("wbar", 2, 2)], QMatrix([[1, 1, 1]]), {}, 0)
    raise ValueError(f"unknown curve model kind {kind!r}")
