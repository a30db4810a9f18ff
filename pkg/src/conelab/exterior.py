"""Exterior-algebra coordinates.

Multi-index bookkeeping for the k-fold exterior power of R^d, Plücker
coordinates of k-dimensional subspaces, and the two induced actions of a
d x d matrix on the exterior power: the multiplicative compound (minors)
and its infinitesimal counterpart, the additive compound.

Basis order is lexicographic on the k-subsets of {1..d}; every sign
convention in the package follows from that choice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, InputError, NumericalUnderflowError
from .linalg import DEFAULT_RANK_EPS, mat_exp, rank_tol

MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"

# flow arcs are split so each piece has 1-norm at most this before its
# compound is taken; minors of a strongly expanding exponential lose all
# accuracy to cancellation, renormalized small steps do not
FLOW_STEP_CAP = 2.0


@dataclass(frozen=True)
class MultiIndexTable:
    """All k-subsets of {1..d} in lexicographic order, with position lookup."""

    d: int
    k: int
    indices: tuple[tuple[int, ...], ...]
    positions: dict[tuple[int, ...], int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.indices)

    def position(self, index) -> int:
        key = tuple(int(i) for i in index)
        if key not in self.positions:
            raise InputError(f"{key} is not a valid multi-index for (d={self.d}, k={self.k})")
        return self.positions[key]


def multi_index_table(d: int, k: int) -> MultiIndexTable:
    """Ordered set of k-element multi-indices in {1..d}."""
    if not (isinstance(d, int) and isinstance(k, int)):
        raise InputError("d and k must be integers")
    if d < 2 or k < 1 or k > d:
        raise InputError(f"need d >= 2 and 1 <= k <= d, got d={d}, k={k}")
    indices = tuple(itertools.combinations(range(1, d + 1), k))
    positions = {I: p for p, I in enumerate(indices)}
    return MultiIndexTable(d=d, k=k, indices=indices, positions=positions)


@dataclass
class ExteriorVector:
    """Coordinates of an element of the k-fold exterior power."""

    table: MultiIndexTable
    coords: np.ndarray

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=float)
        if self.coords.shape != (self.table.dim,):
            raise InputError(
                f"coords must have length {self.table.dim}, got {self.coords.shape}")
        if not np.all(np.isfinite(self.coords)):
            raise InputError("coords contain non-finite entries")

    def unit(self) -> np.ndarray:
        n = np.linalg.norm(self.coords)
        if n == 0:
            raise DegenerateInputError("zero exterior vector has no direction")
        return self.coords / n


@dataclass
class CompoundMatrix:
    """Induced linear map on the k-fold exterior power."""

    table: MultiIndexTable
    entries: np.ndarray
    kind: str

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        n = self.table.dim
        if self.entries.shape != (n, n):
            raise InputError(f"entries must be {n}x{n}, got {self.entries.shape}")
        if self.kind not in (MULTIPLICATIVE, ADDITIVE):
            raise InputError(f"unknown compound kind {self.kind!r}")

    def apply(self, v: ExteriorVector) -> ExteriorVector:
        if v.table is not self.table and (v.table.d, v.table.k) != (self.table.d, self.table.k):
            raise InputError("exterior vector belongs to a different table")
        return ExteriorVector(self.table, self.entries @ v.coords)


def plucker(P, rank_eps: float = DEFAULT_RANK_EPS) -> ExteriorVector:
    """Plücker coordinates of the column span of a full-rank d x k matrix.

    The coordinate at multi-index I is the k x k minor of P on rows I.
    """
    P = np.asarray(P, dtype=float)
    if P.ndim != 2:
        raise InputError("P must be a d x k matrix")
    d, k = P.shape
    if k < 1 or k > d:
        raise InputError(f"need 1 <= k <= d, got shape {P.shape}")
    if rank_tol(P, rank_eps) < k:
        raise DegenerateInputError("P has linearly dependent columns")
    table = multi_index_table(d, k)
    rows = np.array(table.indices) - 1
    subs = P[rows]                      # (dim, k, k)
    return ExteriorVector(table, np.linalg.det(subs))


def compound_matrix(g, k: int) -> CompoundMatrix:
    """Multiplicative compound: entry (I, J) is the minor of g with rows I
    and columns J.  By Cauchy-Binet, compound(g) . plucker(P) = plucker(gP).
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise InputError("g must be a square matrix")
    d = g.shape[0]
    table = multi_index_table(d, k)
    idx = np.array(table.indices) - 1   # (dim, k)
    subs = g[idx[:, None, :, None], idx[None, :, None, :]]   # (dim, dim, k, k)
    return CompoundMatrix(table, np.linalg.det(subs), MULTIPLICATIVE)


def additive_compound(X, k: int) -> CompoundMatrix:
    """Additive compound: derivative at t = 0 of compound(exp(tX), k).

    Entry (I, I) is the trace of X over I.  Entry (I, J) with |I ∩ J| = k-1
    is (-1)**(r+s) * X[a, b] where a = I \\ J at slot r of I and b = J \\ I
    at slot s of J.  All other entries vanish.  The map is linear in X and
    satisfies compound(exp(tX), k) = exp(t * additive_compound(X, k)).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise InputError("X must be a square matrix")
    d = X.shape[0]
    table = multi_index_table(d, k)
    n = table.dim
    L = np.zeros((n, n))
    diag = np.diag(X)
    for p, I in enumerate(table.indices):
        L[p, p] = sum(diag[i - 1] for i in I)
        set_I = set(I)
        for r, a in enumerate(I):
            rest = set_I - {a}
            for b in range(1, d + 1):
                if b in set_I:
                    continue
                J = tuple(sorted(rest | {b}))
                s = J.index(b)
                q = table.positions[J]
                L[p, q] = (-1.0) ** (r + s) * X[a - 1, b - 1]
    return CompoundMatrix(table, L, ADDITIVE)


def flow_substeps(X, t: float, cap: float = FLOW_STEP_CAP) -> int:
    """Number of equal pieces keeping each arc's 1-norm at most cap."""
    norm = float(np.abs(t * np.asarray(X, dtype=float)).sum(axis=0).max())
    return max(1, math.ceil(norm / cap))


def apply_flow(X, k: int, v: np.ndarray, t: float) -> np.ndarray:
    """Unit direction of compound(exp(tX), k) applied to v.

    The arc is split into pieces of bounded 1-norm and the direction is
    renormalized after each piece, which keeps the minor evaluations well
    conditioned for arbitrarily long arcs.
    """
    X = np.asarray(X, dtype=float)
    n_sub = flow_substeps(X, t)
    C = compound_matrix(mat_exp((t / n_sub) * X), k).entries
    v = np.asarray(v, dtype=float)
    for _ in range(n_sub):
        v = C @ v
        nv = float(np.linalg.norm(v))
        if nv < 1e-300:
            raise NumericalUnderflowError("flow iterate collapsed to zero")
        v = v / nv
    return v
