"""Independent brute-force oracles used to freeze expected values.

Everything here is deliberately naive (cofactor expansions, explicit
minor enumeration, central differences) and shares no code path with the
package implementation it checks.
"""

import itertools

import numpy as np
from scipy.linalg import expm as scipy_expm  # independent exponential


def det_cofactor(M) -> float:
    """Determinant by first-row cofactor expansion."""
    M = [list(map(float, row)) for row in np.asarray(M)]
    n = len(M)
    if n == 1:
        return M[0][0]
    total = 0.0
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1.0) ** j * M[0][j] * det_cofactor(sub)
    return total


def ksubsets(d: int, k: int):
    return list(itertools.combinations(range(d), k))


def compound_oracle(g, k: int) -> np.ndarray:
    """Minor-by-minor multiplicative compound."""
    g = np.asarray(g, dtype=float)
    idx = ksubsets(g.shape[0], k)
    C = np.empty((len(idx), len(idx)))
    for a, I in enumerate(idx):
        for b, J in enumerate(idx):
            C[a, b] = det_cofactor([[g[i, j] for j in J] for i in I])
    return C


def plucker_oracle(P) -> np.ndarray:
    """Row-minor Plücker coordinates."""
    P = np.asarray(P, dtype=float)
    d, k = P.shape
    return np.array([det_cofactor([[P[i, c] for c in range(k)] for i in I])
                     for I in ksubsets(d, k)])


def additive_compound_oracle(X, k: int, h: float = 1e-6) -> np.ndarray:
    """Central difference of t -> compound(exp(tX), k) at t = 0."""
    X = np.asarray(X, dtype=float)
    plus = compound_oracle(scipy_expm(h * X), k)
    minus = compound_oracle(scipy_expm(-h * X), k)
    return (plus - minus) / (2.0 * h)


def invariant_orthants_bruteforce(X, tol: float = 1e-9):
    """All normalized sign patterns passing the cross-sign condition,
    by explicit enumeration."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    out = []
    for bits in itertools.product((1, -1), repeat=n - 1):
        s = np.array((1,) + bits, dtype=float)
        M = np.outer(s, s) * X
        np.fill_diagonal(M, 0.0)
        if M.min() >= -tol:
            out.append((1,) + bits)
    return out
