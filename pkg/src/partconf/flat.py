"""Flat connections with values in sl2 and sol2 on truncated models.

Exact checks work with Fractions.  Exhaustive grid scans are vectorized
with numpy int64 over the integer-scaled Maurer-Cartan equation.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Sequence

import numpy as np

from .admissible import AdmissibleMap, enumerate_admissible
from .holonomy import Matrix, mat_bracket
from .lie import LiePresentation, standard_factorization
from .linalg import QMatrix, as_rational, rank, rank_of_rows, solve
from .model import OSModel, TruncatedCDGA

DEFAULT_BUDGET = 20_000_000


class BudgetExceededError(RuntimeError):
    pass


class NotFlatError(ValueError):
    pass


def _m(rows) -> Matrix:
    return tuple(tuple(Fraction(v) for v in r) for r in rows)


H = _m([[1, 0], [0, -1]])
E = _m([[0, 1], [0, 0]])
F = _m([[0, 0], [1, 0]])


class MatrixLieAlgebra:
    """sl2 (basis H, E, F) or its trace-zero Borel subalgebra sol2 (basis H, E)."""

    def __init__(self, kind: str):
        if kind == "sl2":
            self.basis_names, self.basis = ("H", "E", "F"), (H, E, F)
        elif kind == "sol2":
            self.basis_names, self.basis = ("H", "E"), (H, E)
        else:
            raise ValueError(f"unknown Lie algebra {kind!r}")
        self.kind = kind
        n = len(self.basis)
        self.structure = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for k in range(n):
            for l in range(n):
                c = self.coordinates(mat_bracket(self.basis[k], self.basis[l]))
                if c is None:
                    raise AssertionError(f"{kind} basis is not closed under brackets")
                self.structure[k][l] = list(c)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, mtx) -> tuple[Fraction, ...] | None:
        """Coordinates of a 2x2 matrix on the basis, or None if it is outside the span."""
        flat = [as_rational(v) for row in mtx for v in row]
        cols = [[v for row in b for v in row] for b in self.basis]
        return solve(QMatrix.from_columns(cols, 4), flat)

    def element(self, coords: Sequence) -> Matrix:
        out = [[Fraction(0)] * 2 for _ in range(2)]
        for c, b in zip(coords, self.basis):
            c = as_rational(c)
            for i in range(2):
                for j in range(2):
                    out[i][j] += c * b[i][j]
        return tuple(tuple(r) for r in out)

    def structure_array(self) -> np.ndarray:
        return np.array([[[int(v) for v in self.structure[k][l]] for l in range(self.dim)] for k in range(self.dim)],
                        dtype=np.int64)

    def __repr__(self) -> str:
        return f"MatrixLieAlgebra({self.kind})"


def sl2() -> MatrixLieAlgebra:
    return MatrixLieAlgebra("sl2")


def sol2() -> MatrixLieAlgebra:
    return MatrixLieAlgebra("sol2")


class Representation:
    def __init__(self, algebra: MatrixLieAlgebra, theta: Sequence):
        self.algebra = algebra
        self.theta = tuple(tuple(tuple(as_rational(v) for v in r) for r in t) for t in theta)
        if len(self.theta) != algebra.dim:
            raise ValueError("one matrix per basis element expected")
        self.dim_v = len(self.theta[0])
        for k in range(algebra.dim):
            for l in range(algebra.dim):
                lhs = self.of(algebra.structure[k][l])
                if lhs != mat_bracket(self.theta[k], self.theta[l]):
                    raise ValueError("theta is not a Lie algebra homomorphism")

    def of(self, coords: Sequence) -> Matrix:
        """theta of the element with the given coordinates."""
        n = self.dim_v
        out = [[Fraction(0)] * n for _ in range(n)]
        for c, t in zip(coords, self.theta):
            if c:
                for i in range(n):
                    for j in range(n):
                        out[i][j] += c * t[i][j]
        return tuple(tuple(r) for r in out)

    @classmethod
    def standard(cls, algebra: MatrixLieAlgebra) -> Representation:
        return cls(algebra, algebra.basis)

    @classmethod
    def adjoint(cls, algebra: MatrixLieAlgebra) -> Representation:
        n = algebra.dim
        mats = [[[algebra.structure[k][l][r] for l in range(n)] for r in range(n)] for k in range(n)]
        return cls(algebra, mats)


def _det(m: Matrix) -> Fraction:
    """Determinant by fraction-exact elimination."""
    a = [list(r) for r in m]
    n, det = len(a), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


@dataclass(frozen=True, eq=False)
class FlatConnection:
    """omega = sum_{p,k} coeffs[p,k] e_p (x) g_k."""

    model: TruncatedCDGA
    algebra: MatrixLieAlgebra
    coeffs: QMatrix

    def __post_init__(self):
        if self.coeffs.shape != (self.model.dim1, self.algebra.dim):
            raise ValueError(f"coefficient shape {self.coeffs.shape} does not match "
                             f"({self.model.dim1}, {self.algebra.dim})")

    @classmethod
    def from_rows(cls, model: TruncatedCDGA, algebra: MatrixLieAlgebra, rows) -> FlatConnection:
        return cls(model, algebra, QMatrix(rows, algebra.dim))

    def lie_value(self, p: int) -> Matrix:
        return self.algebra.element(self.coeffs.row(p))

    def key(self) -> tuple:
        return tuple(self.coeffs.rows)


def connection(model: TruncatedCDGA, algebra: MatrixLieAlgebra, terms: dict) -> FlatConnection:
    """Build omega from ``{(basis_index_or_vector, lie_basis_name): coefficient}``."""
    rows = [[Fraction(0)] * algebra.dim for _ in range(model.dim1)]
    for (a, gname), c in terms.items():
        k = algebra.basis_names.index(gname)
        vec = model.basis_vector(a) if not isinstance(a, (tuple, list)) or hasattr(a, "kind") else a
        for p, v in enumerate(vec):
            rows[p][k] += as_rational(c) * v
    return FlatConnection(model, algebra, QMatrix(rows, algebra.dim))


def mc_residual(omega: FlatConnection) -> tuple[Fraction, ...]:
    """d omega + 1/2 [omega, omega], flattened as index r * dim g + m."""
    m, alg, c = omega.model, omega.algebra, omega.coeffs
    ng = alg.dim
    out = [Fraction(0)] * (m.dim2 * ng)
    for r, row in enumerate(m.d1.rows):
        for p, v in enumerate(row):
            if v:
                for k in range(ng):
                    out[r * ng + k] += v * c[p, k]
    rows = c.rows
    for (p, q), vec in m.mu.items():
        if p >= q or not any(rows[p]) or not any(rows[q]):
            continue
        br = [Fraction(0)] * ng
        for k, a in enumerate(rows[p]):
            if a:
                for l, b in enumerate(rows[q]):
                    if b:
                        for t, s in enumerate(alg.structure[k][l]):
                            br[t] += a * b * s
        for r, cr in vec.items():
            for t in range(ng):
                out[r * ng + t] += cr * br[t]
    return tuple(out)


def is_flat(omega: FlatConnection) -> bool:
    return not any(mc_residual(omega))


def rank_one_factor(omega: FlatConnection) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]] | None:
    """``(eta, g)`` with omega = eta (x) g if the coefficient matrix has rank <= 1."""
    c = omega.coeffs
    if rank(c) > 1:
        return None
    for k in range(c.ncols):
        col = c.col(k)
        if any(col):
            p = next(i for i, v in enumerate(col) if v)
            g = tuple(x / col[p] for x in c.row(p))
            return col, g
    return tuple([Fraction(0)] * c.nrows), tuple([Fraction(0)] * c.ncols)


def is_rank_one(omega: FlatConnection) -> bool:
    fac = rank_one_factor(omega)
    return fac is not None and omega.model.is_closed(fac[0])


def pi_membership(omega: FlatConnection, theta: Representation) -> bool:
    fac = rank_one_factor(omega)
    if fac is None or not omega.model.is_closed(fac[0]):
        return False
    if not any(fac[0]):
        return True
    return _det(theta.of(fac[1])) == 0


def _theta_of_rows(omega: FlatConnection, theta: Representation) -> list[Matrix]:
    return [theta.of(omega.coeffs.row(p)) for p in range(omega.model.dim1)]


def covariant_h1(omega: FlatConnection, theta: Representation) -> int:
    """dim H^1(A (x) V, d_omega)."""
    if not is_flat(omega):
        raise NotFlatError("omega does not satisfy the Maurer-Cartan equation")
    m, N = omega.model, theta.dim_v
    th = _theta_of_rows(omega, theta)
    # d0: V -> A^1 (x) V, columns indexed by basis vectors of V
    d0_cols = []
    for v in range(N):
        col = {}
        for p in range(m.dim1):
            for i in range(N):
                if th[p][i][v]:
                    col[p * N + i] = th[p][i][v]
        d0_cols.append(col)
    # d1: A^1 (x) V -> A^2 (x) V
    d1_cols = []
    for a in range(m.dim1):
        for v in range(N):
            col: dict[int, Fraction] = {}
            for r, row in enumerate(m.d1.rows):
                if row[a]:
                    col[r * N + v] = col.get(r * N + v, 0) + row[a]
            for p in range(m.dim1):
                for r, cr in m.mu_pair(p, a).items():
                    for i in range(N):
                        if th[p][i][v]:
                            key = r * N + i
                            col[key] = col.get(key, 0) + cr * th[p][i][v]
            d1_cols.append({k: x for k, x in col.items() if x})
    kernel = m.dim1 * N - rank_of_rows(d1_cols)
    return kernel - rank_of_rows(d0_cols)


# -- decomposition -----------------------------------------------------------

@dataclass(frozen=True)
class FlatDecomposition:
    verdict: str  # "NotFlat", "RankOne", "ViaMap" or "Failure"
    map_label: str | None = None
    source: FlatConnection | None = None

    def __str__(self) -> str:
        return self.verdict if self.map_label is None else f"{self.verdict}({self.map_label})"


def pull_back_source(f: AdmissibleMap, omega: FlatConnection) -> FlatConnection | None:
    """The unique curve-model connection whose pushforward under f* is omega, if any."""
    cols = []
    P = f.pullback_deg1
    for k in range(omega.algebra.dim):
        s = solve(P, omega.coeffs.col(k))
        if s is None:
            return None
        cols.append(s)
    return FlatConnection(f.target, omega.algebra, QMatrix.from_columns(cols, P.ncols))


def push_forward(f: AdmissibleMap, source: FlatConnection, model: TruncatedCDGA) -> FlatConnection:
    return FlatConnection(model, source.algebra, f.pullback_deg1 @ source.coeffs)


def find_map_source(omega: FlatConnection, maps: Sequence[AdmissibleMap]) -> FlatDecomposition | None:
    for f in maps:
        src = pull_back_source(f, omega)
        if src is not None and is_flat(src):
            return FlatDecomposition("ViaMap", str(f.label), src)
    return None


def decompose_flat(omega: FlatConnection, maps: Sequence[AdmissibleMap] | None = None) -> FlatDecomposition:
    if not is_flat(omega):
        return FlatDecomposition("NotFlat")
    if is_rank_one(omega):
        return FlatDecomposition("RankOne")
    if maps is None:
        if not isinstance(omega.model, OSModel):
            raise ValueError("admissible maps are only enumerated for graph models")
        maps = enumerate_admissible(omega.model)
    found = find_map_source(omega, maps)
    return found if found is not None else FlatDecomposition("Failure")


# -- exhaustive grids --------------------------------------------------------

def _model_arrays(m: TruncatedCDGA) -> tuple[np.ndarray, np.ndarray]:
    d1 = np.zeros((m.dim2, m.dim1), dtype=np.int64)
    for r, row in enumerate(m.d1.rows):
        for p, v in enumerate(row):
            if v.denominator != 1:
                raise ValueError("model has non-integral differential")
            d1[r, p] = int(v)
    mu = np.zeros((m.dim2, m.dim1, m.dim1), dtype=np.int64)
    for (p, q), vec in m.mu.items():
        if p < q:
            for r, c in vec.items():
                if c.denominator != 1:
                    raise ValueError("model has non-integral products")
                mu[r, p, q] = int(c)
    return d1, mu


def _scaled_grid(grid: Sequence) -> tuple[np.ndarray, int]:
    vals = sorted({as_rational(v) for v in grid})
    den = 1
    for v in vals:
        den = lcm(den, v.denominator)
    return np.array([int(v * den) for v in vals], dtype=np.int64), den


def _residual_batch(C: np.ndarray, d1: np.ndarray, mu: np.ndarray, st: np.ndarray, den: int) -> np.ndarray:
    """den^2 times the MC residual for a batch of integer-scaled coefficient arrays (B, dim1, ng)."""
    B, _, ng = C.shape
    out = np.einsum("rp,bpk->brk", d1, C) * den
    st2 = st.reshape(ng * ng, ng)
    for p, q in zip(*np.nonzero(mu.any(axis=0))):
        outer = (C[:, p, :, None] * C[:, q, None, :]).reshape(B, ng * ng)
        br = outer @ st2
        for r in np.nonzero(mu[:, p, q])[0]:
            out[:, r, :] += mu[r, p, q] * br
    return out


@dataclass
class GridScan:
    candidates: int
    flats: list[FlatConnection] = field(default_factory=list)


def _scan_prefixes(args) -> list[tuple[int, ...]]:
    prefixes, vals, suffix_len, shape, d1, mu, st, den = args
    nvars = shape[0] * shape[1]
    suffix = np.array(list(itertools.product(range(len(vals)), repeat=suffix_len)), dtype=np.int64).reshape(-1, suffix_len)
    sfx_vals = vals[suffix]
    out = []
    for pre in prefixes:
        B = sfx_vals.shape[0]
        full = np.empty((B, nvars), dtype=np.int64)
        full[:, :nvars - suffix_len] = vals[np.array(pre, dtype=np.int64)] if pre else 0
        full[:, nvars - suffix_len:] = sfx_vals
        C = full.reshape(B, shape[0], shape[1])
        res = _residual_batch(C, d1, mu, st, den)
        ok = ~res.reshape(B, -1).any(axis=1)
        for idx in np.nonzero(ok)[0]:
            out.append(tuple(int(x) for x in full[idx]))
    return out


def candidate_count(m: TruncatedCDGA, algebra: MatrixLieAlgebra, grid: Sequence) -> int:
    return len({as_rational(v) for v in grid}) ** (m.dim1 * algebra.dim)


def grid_enumerate_flat(m: TruncatedCDGA, algebra: MatrixLieAlgebra, grid: Sequence = (-1, 0, 1), *,
                        budget: int = DEFAULT_BUDGET, workers: int = 1, chunk: int = 60_000) -> GridScan:
    """All grid coefficient matrices satisfying MC, in lexicographic order of the flattened matrix."""
    total = candidate_count(m, algebra, grid)
    if total > budget:
        raise BudgetExceededError(f"{total} candidates exceed the budget of {budget}")
    vals, den = _scaled_grid(grid)
    nvars = m.dim1 * algebra.dim
    if nvars == 0:
        return GridScan(1, [FlatConnection(m, algebra, QMatrix.zeros(m.dim1, algebra.dim))])
    d1, mu = _model_arrays(m)
    st = algebra.structure_array()
    suffix_len = 1
    while suffix_len < nvars and len(vals) ** (suffix_len + 1) <= chunk:
        suffix_len += 1
    prefixes = list(itertools.product(range(len(vals)), repeat=nvars - suffix_len))
    shape = (m.dim1, algebra.dim)
    if workers > 1 and len(prefixes) > 1:
        step = -(-len(prefixes) // (4 * workers))
        blocks = [prefixes[i:i + step] for i in range(0, len(prefixes), step)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_prefixes, [(b, vals, suffix_len, shape, d1, mu, st, den) for b in blocks]))
        hits = [h for part in parts for h in part]
    else:
        hits = _scan_prefixes((prefixes, vals, suffix_len, shape, d1, mu, st, den))
    flats = []
    for h in hits:
        rows = [[Fraction(h[p * algebra.dim + k], den) for k in range(algebra.dim)] for p in range(m.dim1)]
        flats.append(FlatConnection(m, algebra, QMatrix(rows, algebra.dim)))
    return GridScan(total, flats)


def iter_grid(m: TruncatedCDGA, algebra: MatrixLieAlgebra, grid: Sequence = (-1, 0, 1), *,
              chunk: int = 60_000) -> Iterator[np.ndarray]:
    """All integer-grid candidates as (B, dim1, dim g) arrays, in lexicographic order."""
    vals, den = _scaled_grid(grid)
    if den != 1:
        raise ValueError("batch iteration needs an integer grid")
    nvars = m.dim1 * algebra.dim
    suffix_len = min(nvars, max(1, int(np.floor(np.log(chunk) / np.log(max(len(vals), 2))))))
    suffix = vals[np.array(list(itertools.product(range(len(vals)), repeat=suffix_len)), dtype=np.int64)
                  .reshape(-1, suffix_len)]
    for pre in itertools.product(range(len(vals)), repeat=nvars - suffix_len):
        full = np.empty((suffix.shape[0], nvars), dtype=np.int64)
        full[:, :nvars - suffix_len] = vals[np.array(pre, dtype=np.int64)] if pre else 0
        full[:, nvars - suffix_len:] = suffix
        yield full.reshape(-1, m.dim1, algebra.dim)


def mc_zero_batch(m: TruncatedCDGA, algebra: MatrixLieAlgebra, C: np.ndarray) -> np.ndarray:
    d1, mu = _model_arrays(m)
    res = _residual_batch(C, d1, mu, algebra.structure_array(), 1)
    return ~res.reshape(C.shape[0], -1).any(axis=1)


def lie_hom_check_batch(p: LiePresentation, images: np.ndarray) -> np.ndarray:
    """Vectorized lie_hom_check for integer images of shape (B, #generators, n, n)."""
    B, ngen = images.shape[:2]
    if ngen != len(p.generators):
        raise ValueError("one image per generator expected")
    ok = np.ones(B, dtype=bool)
    cache: dict = {}

    def ev(w):
        if w not in cache:
            if len(w) == 1:
                cache[w] = images[:, w[0]]
            else:
                u, v = standard_factorization(w)
                x, y = ev(u), ev(v)
                cache[w] = x @ y - y @ x
        return cache[w]

    for r in p.relations:
        den = 1
        for c in r.terms.values():
            den = lcm(den, c.denominator)
        total = np.zeros_like(images[:, 0])
        for w, c in sorted(r.terms.items()):
            total = total + int(c * den) * ev(w)
        ok &= ~total.reshape(B, -1).any(axis=1)
    return ok


def images_from_coeffs(algebra: MatrixLieAlgebra, C: np.ndarray) -> np.ndarray:
    """Generator images sum_k C[b,p,k] g_k as integer matrices of shape (B, dim1, 2, 2)."""
    basis = np.array([[[int(v) for v in row] for row in b] for b in algebra.basis], dtype=np.int64)
    return np.einsum("bpk,kij->bpij", C, basis)


# -- verification of the resonance description ------------------------------

@dataclass
class M3ResReport:
    checked: int = 0
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_m3res(m: OSModel, theta: Representation, flats: Sequence[FlatConnection]) -> M3ResReport:
    """Compare H^1(A (x) V, d_omega) != 0 with membership in Pi(A, theta) or a pulled-back flat locus."""
    if m.h1.dim == 0:
        raise ValueError("H^1(A) must be nonzero")
    maps = enumerate_admissible(m)
    rep = M3ResReport()
    for omega in flats:
        if omega.model is not m:
            raise ValueError("connection belongs to a different model")
        lhs = covariant_h1(omega, theta) >= 1
        rhs = pi_membership(omega, theta) or find_map_source(omega, maps) is not None
        rep.checked += 1
        if lhs != rhs:
            rep.mismatches.append({"coeffs": [[str(v) for v in row] for row in omega.coeffs.rows],
                                   "covariant_h1": covariant_h1(omega, theta), "rhs": rhs})
    return rep
