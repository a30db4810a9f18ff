"""Invariant-orthant detection.

A matrix X leaves the closed orthant with signs sigma flow-invariant
exactly when sigma_i sigma_j x_ij >= 0 for every off-diagonal entry (the
cross-sign condition).  Applied to additive compounds, this finds orthant
cones in every exterior power that the whole control family A + uB leaves
invariant, and packages them as re-verifiable certificates.

The search over sign patterns is exact: every entry above tolerance pins
the relative sign of its two axes, so the passing patterns are the
solutions of a parity constraint system solved by union-find.  Patterns
are reported modulo global sign, first coordinate normalized to +1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InputError
from .exterior import additive_compound
from .system import FINITE_SET, INTERVAL, UNBOUNDED, SystemSpec

MAX_SIDE = 70
EXHAUSTIVE_SIDE = 25
DEFAULT_ORTHANT_TOL = 1e-9
MAX_PATTERNS = 1 << 20


@dataclass(frozen=True)
class SignPattern:
    """A vector of +-1 signs, normalized so the first entry is +1."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if not self.signs or any(s not in (-1, 1) for s in self.signs):
            raise InputError("signs must be a nonempty tuple of +-1")
        if self.signs[0] == -1:
            object.__setattr__(self, "signs", tuple(-s for s in self.signs))

    def __len__(self) -> int:
        return len(self.signs)

    def as_array(self) -> np.ndarray:
        return np.array(self.signs, dtype=float)

    def sort_key(self) -> tuple[int, ...]:
        # lexicographic with +1 before -1
        return tuple(0 if s == 1 else 1 for s in self.signs)


ALL_PLUS = None  # filled per dimension by all_plus()


def all_plus(n: int) -> SignPattern:
    return SignPattern(tuple([1] * n))


@dataclass
class CrossPositiveResult:
    """Outcome of the cross-sign check with the minimal slack entry."""

    ok: bool
    slack: float
    worst_pair: tuple[int, int] | None   # 1-based (i, j), the argmin entry

    def __bool__(self) -> bool:
        return self.ok


def cross_positive(X, sigma: SignPattern, tol: float = DEFAULT_ORTHANT_TOL) -> CrossPositiveResult:
    """Check sigma_i sigma_j x_ij >= -tol for all i != j.

    The slack is the minimum of sigma_i sigma_j x_ij over off-diagonal
    entries; worst_pair names the entry attaining it, which is the failure
    trace when the check is negative.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if X.shape != (n, n):
        raise InputError("X must be square")
    if len(sigma) != n:
        raise InputError(f"sign pattern has length {len(sigma)}, need {n}")
    s = sigma.as_array()
    M = np.outer(s, s) * X
    np.fill_diagonal(M, np.inf)
    if n == 1:
        return CrossPositiveResult(True, np.inf, None)
    flat = int(np.argmin(M))
    i, j = divmod(flat, n)
    slack = float(M[i, j])
    return CrossPositiveResult(slack >= -tol, slack, (i + 1, j + 1))


class _ParityUnionFind:
    """Union-find over sign axes with an 'opposite sign' parity bit."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n   # parity relative to parent

    def find(self, x: int) -> tuple[int, int]:
        if self.parent[x] == x:
            return x, 0
        root, par = self.find(self.parent[x])
        self.parent[x] = root
        self.parity[x] ^= par
        return root, self.parity[x]

    def union(self, a: int, b: int, parity: int) -> bool:
        """Require sign(a) = sign(b) XOR parity; False on contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == parity
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ parity
        return True


def _patterns_from_constraints(n: int, constraints) -> list[SignPattern]:
    """All normalized sign patterns satisfying sign(i)sign(j) = required."""
    uf = _ParityUnionFind(n)
    for i, j, parity in constraints:
        if not uf.union(i, j, parity):
            return []
    roots = sorted({uf.find(i)[0] for i in range(n)})
    root_of_first, _ = uf.find(0)
    free = [r for r in roots if r != root_of_first]
    if len(free) > 20 or (1 << len(free)) > MAX_PATTERNS:
        raise CapacityError(
            f"{1 << len(free)} sign patterns satisfy the constraints; "
            f"refusing to enumerate more than {MAX_PATTERNS}")
    out = []
    for bits in itertools.product((1, -1), repeat=len(free)):
        assign = {root_of_first: 1}
        assign.update(dict(zip(free, bits)))
        signs = []
        for i in range(n):
            r, p = uf.find(i)
            signs.append(assign[r] * (1 if p == 0 else -1))
        out.append(SignPattern(tuple(signs)))
    out.sort(key=SignPattern.sort_key)
    return out


def _sign_constraints(mats, tol: float):
    """Parity constraints forced by the off-diagonal entries of the matrices."""
    constraints = []
    for M in mats:
        M = np.asarray(M, dtype=float)
        n = M.shape[0]
        for i in range(n):
            for j in range(n):
                if i == j or abs(M[i, j]) <= tol:
                    continue
                constraints.append((i, j, 0 if M[i, j] > 0 else 1))
    return constraints


def invariant_orthants(X, tol: float = DEFAULT_ORTHANT_TOL) -> list[SignPattern]:
    """All normalized orthant sign patterns left invariant by the flow of X.

    Exact for every size: entries above tolerance pin relative signs and
    entries below it impose nothing, so the answer is the solution set of
    the parity system.  Raises CapacityError rather than truncating when
    the solution set itself is too large to list.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if X.shape != (n, n):
        raise InputError("X must be square")
    if n > MAX_SIDE:
        raise CapacityError(f"matrix side {n} exceeds the supported {MAX_SIDE}")
    return _patterns_from_constraints(n, _sign_constraints([X], tol))


@dataclass
class OrthantCertificate:
    """An orthant cone in the k-th exterior power invariant under the family.

    Re-verifiable from the system alone: the sign pattern must pass the
    cross-sign condition on the checked generators, whose minimal slack is
    recorded here.
    """

    k: int
    pattern: SignPattern
    slack: float
    checked_u: tuple[float, ...] = field(default_factory=tuple)

    def verify(self, spec: SystemSpec, tol: float = DEFAULT_ORTHANT_TOL) -> bool:
        mats, _ = _family_generators(spec, self.k, tol)
        if mats is None:
            return False
        return all(cross_positive(M, self.pattern, tol).ok for M in mats)


def _family_generators(spec: SystemSpec, k: int, tol: float):
    """Generator compounds whose cross-sign condition certifies the family.

    Returns (matrices, checked_u); matrices is None when no orthant can be
    family-invariant (unbounded u with a nonvanishing off-diagonal B
    compound forces the sign both ways).
    """
    cA = additive_compound(spec.A, k).entries
    cB = additive_compound(spec.B, k).entries
    if spec.u_model.kind == UNBOUNDED:
        off = cB - np.diag(np.diag(cB))
        if float(np.abs(off).max()) > tol:
            return None, ()
        return [cA], (0.0,)
    if spec.u_model.kind == INTERVAL:
        us = (spec.u_model.lo, spec.u_model.hi)
    elif spec.u_model.kind == FINITE_SET:
        us = tuple(sorted(set(spec.u_model.values)))
    else:  # pragma: no cover
        raise InputError(f"unknown control model {spec.u_model.kind!r}")
    return [cA + u * cB for u in us], us


def family_invariant_orthants(spec: SystemSpec, k: int,
                              tol: float = DEFAULT_ORTHANT_TOL) -> list[OrthantCertificate]:
    """Orthant cones in the k-th exterior power invariant for every control.

    For an unbounded control the off-diagonal entries of the B compound
    must vanish (the affine-in-u slack is unbounded below otherwise) and
    the A compound alone decides; for intervals the endpoints decide; for
    finite sets every value is checked.
    """
    if not (1 <= k <= spec.d):
        raise InputError(f"need 1 <= k <= d, got k={k}")
    mats, checked_u = _family_generators(spec, k, tol)
    if mats is None:
        return []
    constraints = _sign_constraints(mats, tol)
    patterns = _patterns_from_constraints(len(mats[0]), constraints)
    certs = []
    for pat in patterns:
        slack = min(cross_positive(M, pat, tol).slack for M in mats)
        certs.append(OrthantCertificate(k=k, pattern=pat, slack=slack, checked_u=checked_u))
    return certs


def simulate_orthant_invariance(spec: SystemSpec, cert: OrthantCertificate,
                                n_rays: int = 200,
                                times: tuple[float, ...] = (0.1, 0.5, 1.0),
                                tol: float = 1e-7,
                                rng=None) -> float:
    """Flow-simulation oracle for an orthant certificate.

    Pushes random boundary rays of the certified orthant through the
    compound action of exp(t(A + uB)) for sampled u and checks that the
    normalized images stay in the orthant coordinatewise.  Returns the
    worst signed coordinate seen (>= -tol when the certificate is good).
    """
    from .exterior import apply_flow               # local to avoid cycle on import

    if rng is None:
        rng = np.random.default_rng(spec.rng_seed)
    n = len(cert.pattern)
    s = cert.pattern.as_array()
    if spec.u_model.kind == UNBOUNDED:
        u_pool = [0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0, 10.0, -10.0]
    elif spec.u_model.kind == INTERVAL:
        lo, hi = spec.u_model.lo, spec.u_model.hi
        u_pool = [lo, hi] + list(rng.uniform(lo, hi, size=6))
    else:
        u_pool = list(spec.u_model.values)

    worst = np.inf
    for _ in range(n_rays):
        ray = rng.uniform(0.0, 1.0, size=n)
        ray[rng.integers(0, n)] = 0.0          # boundary: at least one face
        if not ray.any():
            ray[0] = 1.0
        ray = s * ray / np.linalg.norm(ray)
        u = float(u_pool[rng.integers(0, len(u_pool))])
        for t in times:
            img = apply_flow(spec.generator(u), cert.k, ray, t)
            worst = min(worst, float(np.min(s * img)))
    return worst
