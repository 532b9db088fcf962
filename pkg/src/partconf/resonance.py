"""Rank-one resonance: pointwise tests and the structural decomposition."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .admissible import MapLabel, enumerate_admissible, image_h1
from .linalg import QMatrix, Subspace, rank_of_rows, subspace_membership
from .model import OSModel, TruncatedCDGA


@dataclass(frozen=True)
class ResonanceComponent:
    subspace: Subspace
    origin: MapLabel | None  # None marks the zero component

    @property
    def is_zero(self) -> bool:
        return self.origin is None

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def __str__(self) -> str:
        return "{0}" if self.is_zero else f"im H1({self.origin}) (dim {self.dim})"


def _require_closed(m: TruncatedCDGA, xi: Sequence) -> None:
    if len(xi) != m.dim1:
        raise ValueError(f"expected a vector of length {m.dim1}, got {len(xi)}")
    if not m.is_closed(xi):
        raise ValueError("xi is not closed")


def _dxi_columns(m: TruncatedCDGA, xi: Sequence) -> list[dict[int, Fraction]]:
    cols = [dict() for _ in range(m.dim1)]
    for r, row in enumerate(m.d1.rows):
        for q, v in enumerate(row):
            if v:
                cols[q][r] = v
    for p, a in enumerate(xi):
        if not a:
            continue
        for q in range(m.dim1):
            for r, c in m.mu_pair(p, q).items():
                cols[q][r] = cols[q].get(r, 0) + a * c
    return [{r: v for r, v in col.items() if v} for col in cols]


def dxi_matrix(m: TruncatedCDGA, xi: Sequence) -> QMatrix:
    """Matrix of eta -> d eta + xi * eta from A^1 to A^2."""
    _require_closed(m, xi)
    cols = _dxi_columns(m, xi)
    return QMatrix.from_sparse(m.dim2, m.dim1, {(r, q): v for q, col in enumerate(cols) for r, v in col.items()})


def h1_rank_at(m: TruncatedCDGA, xi: Sequence) -> int:
    _require_closed(m, xi)
    nullity = m.dim1 - rank_of_rows(_dxi_columns(m, xi))
    return nullity - (1 if any(xi) else 0)


def surface_witness_dim(m: OSModel, xi: Sequence) -> int:
    """dim of {eta in span(X, Y) : d_xi eta = 0}; at least 2 iff a witness with zero G-part exists."""
    _require_closed(m, xi)
    cols = _dxi_columns(m, xi)
    surf = m.surface_basis
    return len(surf) - rank_of_rows(cols[q] for q in surf)


def resonance_components(m: OSModel) -> list[ResonanceComponent]:
    h1 = m.h1
    if h1.dim == 0:
        return []
    comps = [ResonanceComponent(image_h1(f, m), f.label) for f in enumerate_admissible(m)]
    if not comps:
        comps.append(ResonanceComponent(Subspace.zero(m.dim1), None))
    return comps


def in_union(components: Sequence[ResonanceComponent], v: Sequence) -> bool:
    for c in components:
        if c.is_zero:
            if not any(v):
                return True
        elif subspace_membership(c.subspace, v):
            return True
    return False


def _random_combination(rng: random.Random, basis: list) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * len(basis[0])
    for b in basis:
        c = rng.randint(-3, 3)
        if c:
            out = [o + c * x for o, x in zip(out, b)]
    return tuple(out)


@dataclass(frozen=True)
class Violation:
    kind: str  # "component" or "biconditional"
    point: tuple[Fraction, ...]
    h1_rank: int
    in_union: bool
    component: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "point": [str(x) for x in self.point], "h1_rank": self.h1_rank,
                "in_union": self.in_union, "component": self.component}


@dataclass
class DecompositionReport:
    genus: int
    graph: str
    betti1: int
    components: list[str]
    samples: int
    seed: int
    checks: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def vacuous(self) -> bool:
        return self.betti1 == 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"genus": self.genus, "graph": self.graph, "betti1": self.betti1, "components": self.components,
                "samples": self.samples, "seed": self.seed, "checks": self.checks, "vacuous": self.vacuous,
                "violations": [v.to_dict() for v in self.violations]}


def verify_decomposition(m: OSModel, samples: int, seed: int = 0) -> DecompositionReport:
    """Sample points of each component and of H^1 and test the rank-one resonance biconditional."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = random.Random(seed)
    comps = resonance_components(m)
    rep = DecompositionReport(m.genus, str(m.graph), m.h1.dim, [str(c) for c in comps], samples, seed)
    if rep.vacuous:
        return rep
    found = []
    for c in comps:
        pts = [tuple([Fraction(0)] * m.dim1)] if c.is_zero else \
            [_random_combination(rng, c.subspace.vectors()) for _ in range(samples)]
        for pt in pts:
            r = h1_rank_at(m, pt)
            rep.checks += 1
            if r < 1:
                found.append(Violation("component", pt, r, True, str(c)))
    h1 = m.h1.vectors()
    for _ in range(samples):
        pt = _random_combination(rng, h1)
        r = h1_rank_at(m, pt)
        inside = in_union(comps, pt)
        rep.checks += 1
        if (r >= 1) != inside:
            found.append(Violation("biconditional", pt, r, inside))
    rep.violations = sorted(found, key=lambda v: (v.kind, v.point))
    return rep
