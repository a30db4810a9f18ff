"""Minimal dense numerical kernel.

Matrix exponential (scaling and squaring with a truncated-series core),
tolerant rank via row reduction, the commutator bracket, and a certified
test for membership of the origin in a convex hull.  Hull results carry
self-verifying certificates: convex coefficients when the origin is
inside, a strictly separating functional when it is not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, nnls

from .errors import ConelabError, InputError

DEFAULT_RANK_EPS = 1e-9
DEFAULT_HULL_EPS = 1e-7
HULL_WITNESS_MARGIN = 1e-9

# scaling threshold before repeated squaring in mat_exp
_EXP_SCALE_LIMIT = 0.5
_EXP_MAX_TERMS = 30


def _as_square(X, name="X"):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise InputError(f"{name} must be a square matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{name} has non-finite entries")
    return X


def mat_exp(X, tol: float = 1e-10) -> np.ndarray:
    """exp(X) by scaling-and-squaring around a truncated Taylor core.

    X is scaled by 2**s until its 1-norm is at most 0.5, the series is
    summed to enough terms that the core truncation error is below tol,
    and the result is squared s times.
    """
    X = _as_square(X)
    if tol <= 0:
        raise InputError("tol must be positive")
    n = X.shape[0]
    norm = np.abs(X).sum(axis=0).max() if n else 0.0
    s = 0
    if norm > _EXP_SCALE_LIMIT:
        s = int(math.ceil(math.log2(norm / _EXP_SCALE_LIMIT)))
    Y = X / (2.0 ** s)

    # pick the series order so the remainder at 0.5 is comfortably below tol
    terms = 6
    while terms < _EXP_MAX_TERMS:
        rem = _EXP_SCALE_LIMIT ** (terms + 1) / math.factorial(terms + 1)
        if rem < 0.01 * tol:
            break
        terms += 1

    # Horner-style accumulation of I + Y + Y^2/2! + ...
    E = np.eye(n) / math.factorial(terms)
    for i in range(terms - 1, -1, -1):
        E = Y @ E + np.eye(n) / math.factorial(i)
    for _ in range(s):
        E = E @ E
    return E


def rank_tol(M, eps: float = DEFAULT_RANK_EPS) -> int:
    """Numerical rank: pivots above eps*max(1, max|M|) under row reduction
    with partial pivoting.  The threshold is relative, so the result is
    stable under uniform rescaling of the input.
    """
    if eps <= 0:
        raise InputError("eps must be positive")
    M = np.array(M, dtype=float, copy=True)
    if M.ndim != 2:
        M = np.atleast_2d(M)
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return 0
    scale = max(1.0, float(np.abs(M).max()))
    thresh = eps * scale
    rank = 0
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = r + int(np.argmax(np.abs(M[r:, c])))
        if abs(M[p, c]) <= thresh:
            continue
        if p != r:
            M[[r, p]] = M[[p, r]]
        M[r + 1:] -= np.outer(M[r + 1:, c] / M[r, c], M[r])
        r += 1
        rank += 1
    return rank


def bracket(X, Y) -> np.ndarray:
    """Commutator XY - YX."""
    X = _as_square(X, "X")
    Y = _as_square(Y, "Y")
    if X.shape != Y.shape:
        raise InputError(f"shape mismatch {X.shape} vs {Y.shape}")
    return X @ Y - Y @ X


@dataclass
class HullResult:
    """Outcome of the origin-in-convex-hull test.

    inside        -- whether 0 lies in conv(points) within tolerance
    coefficients  -- convex coefficients certifying membership (inside only)
    witness_functional -- lambda with lambda . w_i >= margin > 0 (outside only)
    margin        -- the verified separation margin (outside only)
    residual      -- ||sum coeff_i w_i|| for the inside certificate
    """

    inside: bool
    coefficients: np.ndarray | None = None
    witness_functional: np.ndarray | None = None
    margin: float = 0.0
    residual: float = 0.0

    def verify(self, points, eps: float = DEFAULT_HULL_EPS) -> bool:
        """Re-check the certificate against the generating points."""
        W = np.asarray(points, dtype=float)
        if self.inside:
            c = np.asarray(self.coefficients, dtype=float)
            if c.shape[0] != W.shape[0] or np.any(c < -1e-12):
                return False
            if abs(c.sum() - 1.0) > 1e-9:
                return False
            return float(np.linalg.norm(c @ W)) <= eps
        lam = np.asarray(self.witness_functional, dtype=float)
        return bool(np.all(W @ lam >= HULL_WITNESS_MARGIN))


def origin_in_hull(points, eps: float = DEFAULT_HULL_EPS) -> HullResult:
    """Decide whether the origin lies in the convex hull of the points.

    The nearest point of the hull to the origin is found by non-negative
    least squares on the lifted system [W^T; rho 1^T] theta = (0, rho); if
    its distance is within eps the convex coefficients are the inside
    certificate.  Otherwise a separating functional comes from a max-margin
    LP over the unit box and is verified before returning.
    """
    W = np.asarray(points, dtype=float)
    if W.ndim != 2 or W.shape[0] == 0:
        raise InputError("points must be a nonempty list of vectors")
    if not np.all(np.isfinite(W)):
        raise InputError("points contain non-finite entries")
    if eps <= 0:
        raise InputError("eps must be positive")
    m, n = W.shape

    # nearest point in the hull: weight the convexity row heavily so the
    # simplex constraint binds, then renormalize and measure directly
    rho = 1e4 * max(1.0, float(np.abs(W).max()))
    A = np.vstack([W.T, rho * np.ones((1, m))])
    b = np.zeros(n + 1)
    b[-1] = rho
    theta, _ = nnls(A, b)
    s = theta.sum()
    if s <= 0.0:
        raise ConelabError("nnls returned an empty combination")
    theta = theta / s
    resid = float(np.linalg.norm(theta @ W))
    if resid <= eps:
        return HullResult(inside=True, coefficients=theta, residual=resid)

    # max margin  s.t.  w_i . lam >= margin,  |lam_j| <= 1
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.zeros((m, n + 1))
    A_ub[:, :n] = -W
    A_ub[:, -1] = 1.0
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m),
                  bounds=[(-1, 1)] * n + [(None, None)], method="highs")
    if res.status != 0:
        raise ConelabError("separating-functional LP failed")
    lam = res.x[:n]
    nl = float(np.linalg.norm(lam))
    if nl > 0:
        lam = lam / nl
    margin = float(np.min(W @ lam))
    if margin >= HULL_WITNESS_MARGIN:
        return HullResult(inside=False, witness_functional=lam, margin=margin)
    raise ConelabError(
        f"hull membership indeterminate: distance {resid:.3e} exceeds eps "
        f"but best separation margin is {margin:.3e}")
