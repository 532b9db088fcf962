"""Exact linear algebra over the rationals.

Everything here works with :class:`fractions.Fraction` entries and Python
integers; there is no floating point anywhere.  Dense matrices are stored as
tuples of rows, while elimination runs on sparse ``{column: value}`` rows,
which keeps the cost proportional to the (small) supports that occur in the
models.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Hashable, Iterable, Sequence


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or int")
    return Fraction(x)


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class QMatrix:
    """Immutable dense matrix with rational entries."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        self._rows = data
        self._ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> QMatrix:
        z = Fraction(0)
        return cls(((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls(((1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, entries) -> QMatrix:
        """Build from ``{(row, col): value}`` or an iterable of triplets."""
        items = entries.items() if isinstance(entries, dict) else (((r, c), v) for r, c, v in entries)
        dense = [[Fraction(0)] * ncols for _ in range(nrows)]
        for (r, c), v in items:
            dense[r][c] += as_rational(v)
        return cls(dense, ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> QMatrix:
        return cls(zip(*columns), len(columns)) if columns else cls.zeros(nrows, 0)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), self._ncols

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        if not 0 <= j < self._ncols:
            raise IndexError(j)
        return tuple(row[j] for row in self._rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self._ncols)]

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.nrows and 0 <= j < self._ncols):
            raise IndexError(key)
        return self._rows[i][j]

    @property
    def T(self) -> QMatrix:
        if not self._rows:
            return QMatrix.zeros(self._ncols, 0)
        return QMatrix(zip(*self._rows), self.nrows)

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            if self._ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return QMatrix(
                ([sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in cols]
                 for row in self._rows),
                other.ncols,
            )
        vec = [as_rational(x) for x in other]
        if len(vec) != self._ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(vec)}")
        return tuple(sum((a * b for a, b in zip(row, vec) if a and b), Fraction(0)) for row in self._rows)

    def __add__(self, other: QMatrix) -> QMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QMatrix(([a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)), self._ncols)

    def __sub__(self, other: QMatrix) -> QMatrix:
        return self + (-other)

    def __neg__(self) -> QMatrix:
        return QMatrix(([-a for a in r] for r in self._rows), self._ncols)

    def scale(self, c) -> QMatrix:
        c = as_rational(c)
        return QMatrix(([c * a for a in r] for r in self._rows), self._ncols)

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._rows, self._ncols))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"QMatrix([{body}], ncols={self._ncols})"

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def vstack(self, other: QMatrix) -> QMatrix:
        if self._ncols != other._ncols:
            raise ValueError("column mismatch")
        return QMatrix(self._rows + other._rows, self._ncols)

    def hstack(self, other: QMatrix) -> QMatrix:
        if self.nrows != other.nrows:
            raise ValueError("row mismatch")
        return QMatrix((a + b for a, b in zip(self._rows, other._rows)), self._ncols + other._ncols)

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [{j: x for j, x in enumerate(r) if x} for r in self._rows]

    def rank(self) -> int:
        return rank(self)


class EchelonBasis:
    """Incrementally maintained echelon basis of a span of sparse vectors.

    Vectors are ``{key: coefficient}`` dicts over any totally ordered keys.
    The leading key of a vector is its smallest key.  Arithmetic is
    fraction free: rational inputs are scaled to primitive integer vectors,
    so a remainder returned by :meth:`reduce` is a nonzero multiple of the
    true remainder (which is all that zero tests and membership need).
    """

    def __init__(self):
        self.pivots: dict = {}

    def __len__(self) -> int:
        return len(self.pivots)

    @staticmethod
    def _primitive(vec: dict) -> dict:
        den = 1
        for v in vec.values():
            if isinstance(v, Fraction):
                den = _lcm(den, v.denominator)
        if den != 1:
            vec = {k: int(v * den) for k, v in vec.items()}
        else:
            vec = {k: int(v) for k, v in vec.items() if v}
        g = 0
        for v in vec.values():
            g = gcd(g, v)
            if g == 1:
                break
        if g > 1:
            vec = {k: v // g for k, v in vec.items()}
        return vec

    def reduce(self, vec: dict) -> dict:
        v = self._primitive({k: c for k, c in vec.items() if c})
        pivots = self.pivots
        while v:
            lead = min(v)
            p = pivots.get(lead)
            if p is None:
                return v
            a, b = v[lead], p[lead]
            if b != 1:
                v = {k: c * b for k, c in v.items()}
            # v <- b*v - a*p
            for k, c in p.items():
                nc = v.get(k, 0) - a * c
                if nc:
                    v[k] = nc
                else:
                    v.pop(k, None)
            if b != 1 and v:
                v = self._primitive(v)
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True iff it was independent of the basis."""
        r = self.reduce(vec)
        if not r:
            return False
        r = self._primitive(r)
        lead = min(r)
        if r[lead] < 0:
            r = {k: -c for k, c in r.items()}
        self.pivots[lead] = r
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def leads(self) -> list:
        return sorted(self.pivots)


def _frac_echelon(rows: Iterable[dict]) -> dict[int, dict[int, Fraction]]:
    """Gauss-Jordan on sparse rational rows; pivot rows have leading 1."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        v = {k: as_rational(c) for k, c in row.items() if c}
        while v:
            lead = min(v)
            p = pivots.get(lead)
            if p is None:
                break
            a = v[lead]
            for k, c in p.items():
                nc = v.get(k, 0) - a * c
                if nc:
                    v[k] = nc
                else:
                    v.pop(k, None)
        if v:
            lead = min(v)
            inv = 1 / v[lead]
            pivots[lead] = {k: c * inv for k, c in v.items()}
    # back substitution, highest pivot first
    for col in sorted(pivots, reverse=True):
        prow = pivots[col]
        for other_col, other in pivots.items():
            if other_col != col and col in other:
                a = other[col]
                for k, c in prow.items():
                    nc = other.get(k, 0) - a * c
                    if nc:
                        other[k] = nc
                    else:
                        other.pop(k, None)
    return pivots


def rref(m: QMatrix) -> tuple[QMatrix, list[int]]:
    """Reduced row echelon form (zero rows kept at the bottom) and pivot columns."""
    pivots = _frac_echelon(m.sparse_rows())
    cols = sorted(pivots)
    z = Fraction(0)
    out = []
    for c in cols:
        row = [z] * m.ncols
        for k, v in pivots[c].items():
            row[k] = v
        out.append(row)
    out.extend([[z] * m.ncols for _ in range(m.nrows - len(cols))])
    return QMatrix(out, m.ncols), cols


def rank(m: QMatrix) -> int:
    nr, nc = m.shape
    if nr == 0 or nc == 0:
        return 0
    basis = EchelonBasis()
    vectors = m.sparse_rows() if nr <= nc else m.T.sparse_rows()
    for v in vectors:
        basis.add(v)
    return len(basis)


def rank_of_rows(rows: Iterable[dict]) -> int:
    basis = EchelonBasis()
    for v in rows:
        basis.add(v)
    return len(basis)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^ambient_dim, stored by its RREF basis rows."""

    ambient_dim: int
    basis: QMatrix

    def __post_init__(self):
        if self.basis.ncols != self.ambient_dim:
            raise ValueError("basis rows must have length ambient_dim")

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
        vecs = [tuple(as_rational(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("vector length differs from ambient dimension")
        if not vecs:
            return cls.zero(ambient_dim)
        reduced, piv = rref(QMatrix(vecs, ambient_dim))
        return cls(ambient_dim, QMatrix(reduced.rows[: len(piv)], ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, QMatrix.zeros(0, ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, QMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return list(self.basis.rows)

    def __contains__(self, v) -> bool:
        return subspace_membership(self, v)

    def contains_subspace(self, other: Subspace) -> bool:
        return all(subspace_membership(self, v) for v in other.basis.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))


def kernel_basis(m: QMatrix) -> Subspace:
    """Right null space of ``m``."""
    reduced, piv = rref(m)
    n = m.ncols
    pivset = set(piv)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -reduced[r, f]
        vecs.append(v)
    if not vecs:
        return Subspace.zero(n)
    return Subspace.span(vecs, n)


def nullity(m: QMatrix) -> int:
    return m.ncols - rank(m)


def subspace_membership(s: Subspace, v: Sequence) -> bool:
    if len(v) != s.ambient_dim:
        raise ValueError(f"vector of length {len(v)} in ambient dimension {s.ambient_dim}")
    vec = {j: as_rational(x) for j, x in enumerate(v) if x}
    if not vec:
        return True
    basis = EchelonBasis()
    for row in s.basis.rows:
        basis.add({j: x for j, x in enumerate(row) if x})
    return basis.contains(vec)


def solve(m: QMatrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of ``m x = b`` (free variables set to zero), or None."""
    if len(b) != m.nrows:
        raise ValueError("right-hand side length differs from row count")
    aug = m.hstack(QMatrix([[x] for x in b], 1)) if m.nrows else QMatrix.zeros(0, m.ncols + 1)
    reduced, piv = rref(aug)
    if piv and piv[-1] == m.ncols:
        return None
    x = [Fraction(0)] * m.ncols
    for r, pc in enumerate(piv):
        x[pc] = reduced[r, m.ncols]
    return tuple(x)


def is_integral(m: QMatrix) -> bool:
    return all(x.denominator == 1 for r in m.rows for x in r)


def clear_denominators(v: Sequence) -> tuple[int, ...]:
    """Smallest positive integer multiple of ``v`` with integer entries."""
    den = 1
    for x in v:
        den = _lcm(den, as_rational(x).denominator)
    return tuple(int(as_rational(x) * den) for x in v)


def add_vectors(*vs: dict) -> dict:
    out: dict[Hashable, Fraction] = {}
    for v in vs:
        for k, c in v.items():
            nc = out.get(k, 0) + c
            if nc:
                out[k] = nc
            else:
                out.pop(k, None)
    return out
