"""Free Lie algebras over a weighted alphabet, in the Lyndon basis.

Letters are generator indices ``0..k-1``.  A Lie element is stored by its
coordinates on the Lyndon basis ``P_w`` (standard factorization bracketing).
All computations go through the embedding into the tensor algebra, where
``P_w = w + (lexicographically larger words)``; that triangularity gives the
normal form and lets ideal spans be echelonized by their smallest word.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .linalg import EchelonBasis, as_rational

Word = tuple[int, ...]
Tensor = dict[Word, Fraction]

SAFETY_BOUND = 100_000


class InhomogeneousRelationError(ValueError):
    pass


class LieBudgetError(RuntimeError):
    """Raised when a free Lie algebra component is too large to handle."""


def is_lyndon(w: Word) -> bool:
    n = len(w)
    return n > 0 and all(w < w[i:] for i in range(1, n))


@lru_cache(maxsize=None)
def standard_factorization(w: Word) -> tuple[Word, Word]:
    """Split a Lyndon word of length >= 2 as ``u v`` with ``v`` its longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


def lyndon_words(k: int, max_len: int) -> Iterator[Word]:
    """Duval's generator: Lyndon words over ``0..k-1`` of length <= max_len, in lexicographic order."""
    if k <= 0 or max_len <= 0:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def word_weight(w: Word, weights: Sequence[int]) -> int:
    return sum(weights[a] for a in w)


def lyndon_words_of_weight(weights: Sequence[int], k: int) -> list[Word]:
    return [w for w in lyndon_words(len(weights), k) if word_weight(w, weights) == k]


def _mobius(n: int) -> int:
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def free_lie_dims(weights: Sequence[int], max_weight: int) -> list[int]:
    """Dimensions of the weight 1..max_weight pieces of the free Lie algebra (weighted Witt formula)."""
    W = [0] * (max_weight + 1)
    for w in weights:
        if w <= max_weight:
            W[w] += 1
    # a_n: coefficients of -log(1 - W(t)) = sum_m W(t)^m / m
    a = [Fraction(0)] * (max_weight + 1)
    power = [1] + [0] * max_weight
    for m in range(1, max_weight + 1):
        nxt = [0] * (max_weight + 1)
        for i, c in enumerate(power):
            if c:
                for j in range(1, max_weight + 1 - i):
                    if W[j]:
                        nxt[i + j] += c * W[j]
        power = nxt
        for n in range(max_weight + 1):
            if power[n]:
                a[n] += Fraction(power[n], m)
    out = []
    for k in range(1, max_weight + 1):
        s = sum(_mobius(k // d) * d * a[d] for d in range(1, k + 1) if k % d == 0)
        out.append(int(s / k))
    return out


@lru_cache(maxsize=None)
def _lyndon_tensor(w: Word) -> tuple[tuple[Word, int], ...]:
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    return tuple(sorted(commutator(dict(_lyndon_tensor(u)), dict(_lyndon_tensor(v))).items()))


def lyndon_tensor(w: Word) -> Tensor:
    return dict(_lyndon_tensor(w))


def commutator(x: dict, y: dict) -> dict:
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            c = ca * cb
            k1, k2 = a + b, b + a
            v = out.get(k1, 0) + c
            if v:
                out[k1] = v
            else:
                out.pop(k1, None)
            v = out.get(k2, 0) - c
            if v:
                out[k2] = v
            else:
                out.pop(k2, None)
    return out


def tensor_to_lyndon(t: dict) -> dict[Word, Fraction]:
    """Lyndon coordinates of a Lie element given in the tensor algebra."""
    t = {k: as_rational(v) for k, v in t.items() if v}
    out: dict[Word, Fraction] = {}
    while t:
        w = min(t)
        c = t[w]
        if not is_lyndon(w):
            raise ValueError("tensor is not a Lie element")
        out[w] = c
        for word, coeff in _lyndon_tensor(w):
            nv = t.get(word, 0) - c * coeff
            if nv:
                t[word] = nv
            else:
                t.pop(word, None)
    return out


class LieElement:
    """An element of a free Lie algebra, stored by Lyndon coordinates."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Word, Fraction] | None = None):
        self.terms = {w: as_rational(c) for w, c in (terms or {}).items() if c}

    @classmethod
    def generator(cls, i: int) -> LieElement:
        return cls({(i,): Fraction(1)})

    @classmethod
    def from_tensor(cls, t: dict) -> LieElement:
        return cls(tensor_to_lyndon(t))

    def to_tensor(self) -> Tensor:
        out: dict = {}
        for w, c in self.terms.items():
            for word, coeff in _lyndon_tensor(w):
                out[word] = out.get(word, 0) + c * coeff
        return {k: v for k, v in out.items() if v}

    def bracket(self, other: LieElement) -> LieElement:
        return LieElement.from_tensor(commutator(self.to_tensor(), other.to_tensor()))

    def __add__(self, other: LieElement) -> LieElement:
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return LieElement(out)

    def __neg__(self) -> LieElement:
        return LieElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: LieElement) -> LieElement:
        return self + (-other)

    def __rmul__(self, c) -> LieElement:
        c = as_rational(c)
        return LieElement({w: c * v for w, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, LieElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def weights(self, weights: Sequence[int]) -> set[int]:
        return {word_weight(w, weights) for w in self.terms}

    def weight(self, weights: Sequence[int]) -> int:
        ws = self.weights(weights)
        if len(ws) != 1:
            raise InhomogeneousRelationError(f"element is not weight homogeneous (weights {sorted(ws)})")
        return ws.pop()

    def relabel(self, perm: Sequence[int]) -> LieElement:
        """Image under the letter substitution ``i -> perm[i]``."""
        t = {tuple(perm[a] for a in w): c for w, c in self.to_tensor().items()}
        return LieElement.from_tensor(t)

    def evaluate(self, value: Callable[[int], object], bracket: Callable, zero, add: Callable, scale: Callable):
        """Image under the Lie map sending letter ``i`` to ``value(i)``."""
        cache: dict[Word, object] = {}

        def ev(w: Word):
            if w not in cache:
                if len(w) == 1:
                    cache[w] = value(w[0])
                else:
                    u, v = standard_factorization(w)
                    cache[w] = bracket(ev(u), ev(v))
            return cache[w]

        total = zero
        for w, c in sorted(self.terms.items()):
            total = add(total, scale(c, ev(w)))
        return total

    def format(self, labels: Sequence[str]) -> str:
        if not self.terms:
            return "0"

        def fmt(w: Word) -> str:
            if len(w) == 1:
                return labels[w[0]]
            u, v = standard_factorization(w)
            return f"[{fmt(u)},{fmt(v)}]"

        parts = []
        for w, c in sorted(self.terms.items()):
            s = fmt(w)
            if c == 1:
                parts.append(f"+{s}")
            elif c == -1:
                parts.append(f"-{s}")
            else:
                parts.append(f"{'+' if c > 0 else '-'}{abs(c)}*{s}")
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    def __repr__(self) -> str:
        return f"LieElement({self.format([f'g{i}' for i in range(1 + max(max(w) for w in self.terms))]) if self.terms else '0'})"


def gen(i: int) -> LieElement:
    return LieElement.generator(i)


def br(x: LieElement, y: LieElement) -> LieElement:
    return x.bracket(y)


@dataclass(frozen=True)
class LiePresentation:
    """Weighted generators and homogeneous relations.

    ``degrees`` optionally gives each generator an integer vector under which
    every relation is homogeneous; ideal computations then split by it.
    """

    generators: tuple[tuple[str, int], ...]
    relations: tuple[LieElement, ...]
    degrees: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        labels = [g[0] for g in self.generators]
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be unique")
        if any(w < 1 for _, w in self.generators):
            raise ValueError("generator weights must be positive")
        if self.degrees is not None and len(self.degrees) != len(self.generators):
            raise ValueError("one multidegree per generator expected")
        for r in self.relations:
            if r.weight(self.weights) < 1:
                raise ValueError("relation weights must be positive")
            self.multidegree(r)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w for _, w in self.generators)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(g for g, _ in self.generators)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def gen(self, label: str) -> LieElement:
        return gen(self.index(label))

    def letter_degree(self, i: int) -> tuple[int, ...]:
        return () if self.degrees is None else self.degrees[i]

    def multidegree(self, x: LieElement) -> tuple[int, ...]:
        if self.degrees is None or not x:
            return ()
        found = {tuple(map(sum, zip(*(self.degrees[a] for a in w)))) for w in x.terms}
        if len(found) != 1:
            raise InhomogeneousRelationError("element is not homogeneous for the generator multidegrees")
        return found.pop()

    def format_relation(self, r: LieElement) -> str:
        return r.format(self.labels)

    def permuted(self, perm: Sequence[int]) -> LiePresentation:
        """The same presentation with generator ``i`` moved to position ``perm[i]``."""
        gens: list = [None] * len(self.generators)
        degs: list | None = None if self.degrees is None else [None] * len(self.generators)
        for i, g in enumerate(self.generators):
            gens[perm[i]] = g
            if degs is not None:
                degs[perm[i]] = self.degrees[i]
        return LiePresentation(tuple(gens), tuple(r.relabel(perm) for r in self.relations),
                               None if degs is None else tuple(degs))


@dataclass(frozen=True)
class GradedRanks:
    max_weight: int
    ranks: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        """Rank of the weight-``k`` piece, ``1 <= k <= max_weight``."""
        if not 1 <= k <= self.max_weight:
            raise IndexError(k)
        return self.ranks[k - 1]


def _vadd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


class GradedIdeal:
    """Weight pieces of the Lie ideal generated by a presentation's relations.

    ``I_k = R_k + sum_x [x, I_{k - wt x}]``, each piece kept as an echelon
    basis in the tensor algebra keyed by the smallest word.  Pieces are
    computed lazily and split by the presentation's multidegrees if given.
    """

    def __init__(self, p: LiePresentation, max_weight: int, *, bound: int = SAFETY_BOUND):
        if max_weight < 1:
            raise ValueError("max weight must be at least 1")
        self.p = p
        self.max_weight = max_weight
        self.free_dims = free_lie_dims(p.weights, max_weight)
        if max(self.free_dims) > bound:
            raise LieBudgetError(f"free Lie algebra piece of dimension {max(self.free_dims)} exceeds {bound}")
        self.rels: dict[tuple[int, tuple], list[Tensor]] = {}
        for r in p.relations:
            k = r.weight(p.weights)
            if k <= max_weight:
                self.rels.setdefault((k, p.multidegree(r)), []).append(r.to_tensor())
        self._pieces: dict[tuple[int, tuple], EchelonBasis] = {}
        self._deltas: dict[int, frozenset] = {}

    def deltas(self, k: int) -> frozenset:
        """Multidegrees at which the weight-``k`` piece may be nonzero."""
        if k < 1:
            return frozenset()
        if k not in self._deltas:
            out = {d for (kk, d) in self.rels if kk == k}
            for x, wx in enumerate(self.p.weights):
                dx = self.p.letter_degree(x)
                out |= {_vadd(d, dx) for d in self.deltas(k - wx)}
            self._deltas[k] = frozenset(out)
        return self._deltas[k]

    def piece(self, k: int, delta: tuple = ()) -> EchelonBasis:
        key = (k, delta)
        if key in self._pieces:
            return self._pieces[key]
        basis = EchelonBasis()
        for r in self.rels.get(key, []):
            basis.add(r)
        for x, wx in enumerate(self.p.weights):
            lower_k = k - wx
            if lower_k < 1:
                continue
            lower_d = _vsub(delta, self.p.letter_degree(x))
            if lower_d not in self.deltas(lower_k):
                continue
            gx = {(x,): 1}
            for v in list(self.piece(lower_k, lower_d).pivots.values()):
                basis.add(commutator(gx, v))
        self._pieces[key] = basis
        return basis

    def dim(self, k: int) -> int:
        return sum(len(self.piece(k, d)) for d in self.deltas(k))

    def rank(self, k: int) -> int:
        return self.free_dims[k - 1] - self.dim(k)

    def ranks(self) -> GradedRanks:
        return GradedRanks(self.max_weight, tuple(self.rank(k) for k in range(1, self.max_weight + 1)))

    def contains(self, x: LieElement) -> bool:
        if not x:
            return True
        k = x.weight(self.p.weights)
        if k > self.max_weight:
            raise ValueError(f"element of weight {k} beyond computed range {self.max_weight}")
        d = self.p.multidegree(x)
        if d not in self.deltas(k):
            return False
        return self.piece(k, d).contains(x.to_tensor())


def lcs_ranks(p: LiePresentation, max_weight: int, *, bound: int = SAFETY_BOUND) -> GradedRanks:
    return GradedIdeal(p, max_weight, bound=bound).ranks()


def relation_span_rank(relations: Iterable[LieElement]) -> int:
    basis = EchelonBasis()
    for r in relations:
        basis.add(r.to_tensor())
    return len(basis)
