"""Simple graphs: parsing, components and small clique enumeration."""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator


class GraphParseError(ValueError):
    """Base class for graph file errors."""


class MalformedLineError(GraphParseError):
    pass


class VertexRangeError(GraphParseError):
    pass


class LoopEdgeError(GraphParseError):
    pass


class DuplicateEdgeError(GraphParseError):
    pass


Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Finite simple graph on vertices ``0..n-1``; edges are stored as sorted pairs ``(i, j)``, ``i < j``."""

    n: int
    edges: tuple[Edge, ...]

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        seen = set()
        for e in edges:
            i, j = e
            if i == j:
                raise LoopEdgeError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise VertexRangeError(f"edge {i}-{j} outside 0..{n - 1}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edge_set

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def edge_index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    def neighbors(self, i: int) -> list[int]:
        return sorted({b if a == i else a for a, b in self.edges if i in (a, b)})

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def __str__(self) -> str:
        es = " ".join(f"{i}-{j}" for i, j in self.edges)
        return f"Graph(n={self.n}, E={{{es}}})"


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def edgeless_graph(n: int) -> Graph:
    return Graph(n, ())


def all_labeled_graphs(n: int) -> Iterator[Graph]:
    """All 2^C(n,2) labeled simple graphs on ``n`` vertices."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, (p for b, p in enumerate(pairs) if mask >> b & 1))


def _parse_json(text: str) -> Graph:
    try:
        doc = json.loads(text)
        n = doc["n"]
        edges = doc.get("edges", [])
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedLineError(f"bad JSON graph document: {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise MalformedLineError("'n' must be a non-negative integer")
    pairs = []
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise MalformedLineError(f"bad edge entry {e!r}")
        pairs.append(tuple(e))
    return Graph(n, pairs)


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document (or the equivalent JSON form)."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((lineno, line))
    if not lines:
        raise MalformedLineError("missing vertex count")
    lineno, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise MalformedLineError(f"line {lineno}: expected vertex count, got {first!r}") from None
    if n < 0:
        raise MalformedLineError(f"line {lineno}: negative vertex count")
    edges = []
    seen = set()
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLineError(f"line {lineno}: expected 'i j', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLineError(f"line {lineno}: non-integer vertex in {line!r}") from None
        if i < 0 or j < 0 or i >= n or j >= n:
            raise VertexRangeError(f"line {lineno}: vertex out of range 0..{n - 1}")
        if i == j:
            raise LoopEdgeError(f"line {lineno}: loop at vertex {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdgeError(f"line {lineno}: duplicate edge {key[0]}-{key[1]}")
        seen.add(key)
        edges.append(key)
    return Graph(n, edges)


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def format_graph(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{i} {j}" for i, j in g.edges]) + "\n"


def connected_components(g: Graph) -> list[frozenset[int]]:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    comps: dict[int, set[int]] = {}
    for v in range(g.n):
        comps.setdefault(find(v), set()).add(v)
    return [frozenset(c) for _, c in sorted(comps.items())]


def enumerate_triangles(g: Graph) -> list[tuple[int, int, int]]:
    es = g.edge_set
    return [t for t in combinations(range(g.n), 3)
            if all(p in es for p in combinations(t, 2))]


def enumerate_k4(g: Graph) -> list[tuple[int, int, int, int]]:
    es = g.edge_set
    return [q for q in combinations(range(g.n), 4)
            if all(p in es for p in combinations(q, 2))]


def b1_zero_by_shape(g: Graph) -> bool:
    """True iff each component is a tree, or unicyclic with an odd cycle."""
    for comp in connected_components(g):
        cedges = [e for e in g.edges if e[0] in comp]
        nv, ne = len(comp), len(cedges)
        if ne == nv - 1:
            continue
        if ne != nv:
            return False
        degree = {v: 0 for v in comp}
        for i, j in cedges:
            degree[i] += 1
            degree[j] += 1
        alive = set(comp)
        leaves = [v for v in comp if degree[v] == 1]
        while leaves:
            v = leaves.pop()
            alive.discard(v)
            for i, j in cedges:
                if v in (i, j):
                    w = j if v == i else i
                    if w in alive:
                        degree[w] -= 1
                        if degree[w] == 1:
                            leaves.append(w)
        if len(alive) % 2 == 0:
            return False
    return True
