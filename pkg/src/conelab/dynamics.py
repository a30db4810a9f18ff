"""Monte-Carlo exploration of the system semigroup on exterior powers.

Orbit clouds approximate the minimal invariant cone containing a seed
direction: sampled semigroup words act on the seed through compound
matrices, and attractor refinement pushes every recorded direction along
long flow arcs toward dominant eigendirections.  Pointedness of the cone
spanned by a cloud is then certified either way: an antipodal pair or a
convex combination of directions vanishing at the origin proves the cone
contains a line, a separating functional proves it is pointed.

All word actions are applied arc by arc with renormalization and bounded
substeps (see exterior.apply_flow): compounds of strongly expanding
elements are otherwise dominated by cancellation noise, which would
produce false line-pair certificates.

Every certificate carries the words that produced it and re-verifies
from the system specification alone.  Sampling is deterministic: streams
are derived from (rng_seed, degree, seed index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linprog

from .errors import InputError, NumericalUnderflowError
from .exterior import compound_matrix, flow_substeps, multi_index_table
from .linalg import DEFAULT_HULL_EPS, HullResult, mat_exp, origin_in_hull, rank_tol
from .system import FINITE_SET, INTERVAL, SemigroupWord, SystemSpec, UNBOUNDED, word

ANTIPODAL_DELTA = 1e-6
RAY_DEDUPE_ALIGNMENT = 1.0 - 1e-9

LINE_PAIR = "line-pair"
HULL = "hull"


@dataclass(frozen=True)
class Budget:
    """Sampling effort for the semigroup exploration."""

    seeds: int = 8
    words_per_seed: int = 400
    word_len: int = 6
    t_max: float = 2.0
    u_grid: tuple[float, ...] = (0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0, 10.0, -10.0)
    heavy_tail_fraction: float = 0.2
    heavy_tail_clip: float = 30.0
    special_times: tuple[float, ...] = (0.25, 0.5, 1.0, math.pi / 2, 2.0, math.pi, 2 * math.pi)
    refine_controls: tuple[float, ...] = (0.0, 2.0, -2.0, 10.0, -10.0)
    refine_norm: float = 300.0
    word_norm_cap: float = 250.0

    def describe(self) -> dict:
        return {
            "seeds": self.seeds,
            "words_per_seed": self.words_per_seed,
            "word_len": self.word_len,
            "t_max": self.t_max,
        }


DEFAULT_BUDGET = Budget()


class CompoundFlow:
    """Cached letter-by-letter compound action for one (system, degree)."""

    def __init__(self, spec: SystemSpec, k: int):
        self.spec = spec
        self.k = k
        self.table = multi_index_table(spec.d, k)
        self._letters: dict[tuple[float, float], tuple[np.ndarray, int]] = {}

    def letter(self, t: float, u: float) -> tuple[np.ndarray, int]:
        """Substep compound and repeat count for one flow arc."""
        key = (float(t), float(u))
        hit = self._letters.get(key)
        if hit is None:
            X = self.spec.generator(u)
            n_sub = flow_substeps(X, t)
            C = compound_matrix(mat_exp((t / n_sub) * X), self.k).entries
            hit = (C, n_sub)
            self._letters[key] = hit
        return hit

    def apply(self, v: np.ndarray, letters) -> np.ndarray:
        """Unit direction of the word action on v."""
        v = np.asarray(v, dtype=float)
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            raise InputError("cannot act on the zero direction")
        v = v / nv
        for t, u in letters:
            C, n_sub = self.letter(t, u)
            for _ in range(n_sub):
                v = C @ v
                nv = float(np.linalg.norm(v))
                if nv < 1e-300:
                    raise NumericalUnderflowError("word action collapsed to zero")
                v = v / nv
        return v

    def apply_rows(self, V: np.ndarray, t: float, u: float) -> np.ndarray:
        """Apply one arc to every row of V, renormalizing rows."""
        C, n_sub = self.letter(t, u)
        V = np.asarray(V, dtype=float)
        for _ in range(n_sub):
            V = V @ C.T
            norms = np.linalg.norm(V, axis=1, keepdims=True)
            if float(norms.min()) < 1e-300:
                raise NumericalUnderflowError("refinement collapsed a direction")
            V = V / norms
        return V


@dataclass
class OrbitCloud:
    """Unit directions reached from a seed, with one word per direction."""

    k: int
    seed_coords: np.ndarray
    directions: np.ndarray
    provenance: list[SemigroupWord]

    def __post_init__(self):
        self.seed_coords = np.asarray(self.seed_coords, dtype=float)
        self.directions = np.asarray(self.directions, dtype=float)
        if self.directions.ndim != 2 or len(self.provenance) != self.directions.shape[0]:
            raise InputError("provenance must match directions one to one")
        norms = np.linalg.norm(self.directions, axis=1)
        if self.directions.size and not np.allclose(norms, 1.0, atol=1e-8):
            raise InputError("cloud directions must be unit vectors")

    def __len__(self) -> int:
        return self.directions.shape[0]


@dataclass
class Pointed:
    """Pointedness witness: a functional strictly positive on the cloud."""

    functional: np.ndarray
    margin: float

    def verify(self, cloud: OrbitCloud) -> bool:
        return bool(np.all(cloud.directions @ self.functional >= 1e-9))


@dataclass
class NonPointedCertificate:
    """Evidence that the minimal invariant cone over a seed contains a line.

    line-pair mode: two words drive the seed to opposite unit directions
    (alignment at most -1 + delta).  hull mode: convex coefficients over
    the recorded directions sum to (nearly) zero.  Either way the payload
    re-verifies from the system specification alone.
    """

    k: int
    mode: str
    seed_coords: np.ndarray
    words: list[SemigroupWord]
    alignment: float = 0.0
    coefficients: np.ndarray | None = None
    residual: float = 0.0

    def directions(self, spec: SystemSpec) -> np.ndarray:
        flow = CompoundFlow(spec, self.k)
        return np.array([flow.apply(self.seed_coords, w.letters) for w in self.words])

    def verify(self, spec: SystemSpec, delta: float = ANTIPODAL_DELTA,
               hull_eps: float = DEFAULT_HULL_EPS) -> bool:
        try:
            dirs = self.directions(spec)
        except (InputError, NumericalUnderflowError):
            return False
        if self.mode == LINE_PAIR:
            if len(self.words) != 2:
                return False
            return float(dirs[0] @ dirs[1]) <= -1.0 + delta
        if self.mode == HULL:
            c = np.asarray(self.coefficients, dtype=float)
            if c.shape[0] != dirs.shape[0] or np.any(c < -1e-12):
                return False
            if abs(c.sum() - 1.0) > 1e-9:
                return False
            return float(np.linalg.norm(c @ dirs)) <= hull_eps
        return False

    def flip(self) -> tuple[SemigroupWord, np.ndarray] | None:
        """When one pair word extends the other, the extra letters map the
        shorter word's direction to its negative; return (suffix, base).
        """
        if self.mode != LINE_PAIR:
            return None
        a, b = self.words
        base, longer = (a, b) if len(a.letters) <= len(b.letters) else (b, a)
        base_letters = tuple(l for l in base.letters if l[0] > 0.0)
        if longer.letters[:len(base_letters)] != base_letters:
            return None
        suffix = longer.letters[len(base_letters):]
        if not suffix:
            return None
        return word(*suffix), np.asarray(self.seed_coords, dtype=float)


def _sample_letters(spec: SystemSpec, budget: Budget, rng, length: int):
    """Random word letters with a cap on the cumulative flow norm."""
    letters = []
    total = 0.0
    for _ in range(length):
        t = float(rng.uniform(0.0, budget.t_max))
        if spec.u_model.kind == UNBOUNDED:
            if rng.uniform() < budget.heavy_tail_fraction:
                u = float(np.clip(rng.standard_cauchy() * 2.0,
                                  -budget.heavy_tail_clip, budget.heavy_tail_clip))
            else:
                u = float(budget.u_grid[rng.integers(0, len(budget.u_grid))])
        elif spec.u_model.kind == INTERVAL:
            u = float(rng.uniform(spec.u_model.lo, spec.u_model.hi))
        else:
            assert spec.u_model.kind == FINITE_SET
            u = float(spec.u_model.values[rng.integers(0, len(spec.u_model.values))])
        arc = float(np.abs(t * spec.generator(u)).sum(axis=0).max())
        if letters and total + arc > budget.word_norm_cap:
            break
        letters.append((t, u))
        total += arc
    return letters


def sample_element(spec: SystemSpec, word_len: int, t_max: float,
                   rng) -> tuple[np.ndarray, SemigroupWord]:
    """One random semigroup element with its word.

    Deterministic given the generator state; the cumulative arc norm is
    capped so the matrix product stays representable.
    """
    if word_len < 1 or t_max <= 0:
        raise InputError("need word_len >= 1 and t_max > 0")
    budget = Budget(t_max=t_max)
    letters = _sample_letters(spec, budget, rng, word_len)
    if not letters:
        letters = [(0.0, 0.0)]
    w = SemigroupWord(tuple(letters))
    return w.matrix(spec), w


def attractor_direction(h, k: int, v0, iters: int) -> np.ndarray:
    """Renormalized power iteration of the compound of h on v0.

    Converges to the dominant compound eigendirection for h with a simple
    dominant eigenvalue and generic v0; an exact non-dominant eigenvector
    stays put.
    """
    h = np.asarray(h, dtype=float)
    C = compound_matrix(h, k).entries
    v = np.asarray(v0, dtype=float).copy()
    if float(np.linalg.norm(v)) == 0.0:
        raise InputError("v0 must be nonzero")
    v = v / np.linalg.norm(v)
    for _ in range(iters):
        v = C @ v
        nv = float(np.linalg.norm(v))
        if nv < 1e-300:
            raise NumericalUnderflowError("attractor iterate collapsed to zero")
        v = v / nv
    return v


def _special_u(spec: SystemSpec) -> float:
    return spec.u_model.nearest(0.0)


def _admissible_refine_controls(spec: SystemSpec, budget: Budget):
    if spec.u_model.kind == UNBOUNDED:
        return budget.refine_controls
    seen, out = set(), []
    for u in budget.refine_controls:
        v = spec.u_model.nearest(u)
        if v not in seen:
            seen.add(v)
            out.append(v)
    return tuple(out)


def orbit_directions(spec: SystemSpec, k: int, seed, n_samples: int,
                     word_len: int, t_max: float,
                     budget: Budget | None = None, stream: int = 0) -> OrbitCloud:
    """Sampled orbit of a seed direction under the semigroup action.

    The cloud always contains the trivial-word direction, the images under
    a fixed grid of pure-drift arcs (rotation periods show up there), the
    images under random words, and attractor-refined copies of everything
    recorded, obtained by appending one long arc per refinement control.
    """
    budget = budget or DEFAULT_BUDGET
    budget = replace(budget, words_per_seed=n_samples, word_len=word_len, t_max=t_max)
    seed = np.asarray(getattr(seed, "coords", seed), dtype=float)
    flow = CompoundFlow(spec, k)
    rng = np.random.default_rng([spec.rng_seed, k, stream])

    u0 = _special_u(spec)
    directions = [seed / np.linalg.norm(seed)]
    provenance = [word((0.0, u0))]

    for t in budget.special_times:
        w = word((float(t), u0))
        directions.append(flow.apply(seed, w.letters))
        provenance.append(w)

    for _ in range(n_samples):
        length = int(rng.integers(1, word_len + 1))
        letters = _sample_letters(spec, budget, rng, length)
        if not letters:
            continue
        w = SemigroupWord(tuple(letters))
        directions.append(flow.apply(seed, w.letters))
        provenance.append(w)

    # attractor refinement: push each distinct direction along one long arc
    base = np.array(directions)
    keep = _dedupe_rows(base)
    for u_r in _admissible_refine_controls(spec, budget):
        X = spec.generator(u_r)
        norm1 = float(np.abs(X).sum(axis=0).max())
        t_r = budget.refine_norm / max(norm1, 1e-12)
        refined = flow.apply_rows(base[keep], t_r, u_r)
        for row, idx in zip(refined, keep):
            directions.append(row)
            provenance.append(provenance[idx].concat(word((t_r, u_r))))

    return OrbitCloud(k=k, seed_coords=seed,
                      directions=np.array(directions), provenance=provenance)


def _dedupe_rows(M: np.ndarray, alignment: float = RAY_DEDUPE_ALIGNMENT):
    """Indices of rows pairwise below the alignment threshold (first wins)."""
    keep: list[int] = []
    for i in range(M.shape[0]):
        if all(float(M[i] @ M[j]) < alignment for j in keep):
            keep.append(i)
    return keep


def pointedness(cloud: OrbitCloud, delta: float = ANTIPODAL_DELTA,
                hull_eps: float = DEFAULT_HULL_EPS):
    """Certify the cone spanned by the cloud as pointed or not.

    Antipodal pairs are scanned first (recording order, first hit wins);
    failing that, the origin-in-hull test either produces a vanishing
    convex combination (not pointed) or a separating functional (pointed).
    """
    if len(cloud) == 0:
        raise InputError("cloud is empty")
    D = cloud.directions
    G = D @ D.T
    n = len(cloud)
    hit = None
    for i in range(n):
        row = G[i, i + 1:]
        if row.size and float(row.min()) <= -1.0 + delta:
            j = i + 1 + int(np.argmin(row))
            hit = (i, j)
            break
    if hit is not None:
        i, j = hit
        return NonPointedCertificate(
            k=cloud.k, mode=LINE_PAIR, seed_coords=cloud.seed_coords,
            words=[cloud.provenance[i], cloud.provenance[j]],
            alignment=float(G[i, j]))
    res: HullResult = origin_in_hull(D, eps=hull_eps)
    if res.inside:
        support = np.flatnonzero(res.coefficients > 1e-12)
        coeffs = res.coefficients[support]
        coeffs = coeffs / coeffs.sum()
        return NonPointedCertificate(
            k=cloud.k, mode=HULL, seed_coords=cloud.seed_coords,
            words=[cloud.provenance[int(i)] for i in support],
            coefficients=coeffs,
            residual=float(np.linalg.norm(coeffs @ D[support])))
    return Pointed(functional=res.witness_functional, margin=res.margin)


def standard_seeds(spec: SystemSpec, k: int, budget: Budget) -> list[np.ndarray]:
    """Coordinate-plane seeds in recording order, then attractor-derived
    extras up to the seed budget."""
    table = multi_index_table(spec.d, k)
    seeds = [np.eye(table.dim)[i] for i in range(table.dim)]
    if len(seeds) >= budget.seeds:
        return seeds[:budget.seeds]
    flow = CompoundFlow(spec, k)
    generic = np.ones(table.dim) / math.sqrt(table.dim)
    for u in (1.0, -1.0):
        if len(seeds) >= budget.seeds:
            break
        u_adm = spec.u_model.nearest(u)
        X = spec.generator(u_adm)
        t_r = budget.refine_norm / max(float(np.abs(X).sum(axis=0).max()), 1e-12)
        try:
            cand = flow.apply(generic, [(t_r, u_adm)])
        except NumericalUnderflowError:
            continue
        if all(abs(float(cand @ s)) < RAY_DEDUPE_ALIGNMENT for s in seeds):
            seeds.append(cand)
    return seeds


def nonpointedness_search(spec: SystemSpec, k: int,
                          budget: Budget | None = None) -> NonPointedCertificate | None:
    """Look for a verified line or vanishing hull in the minimal cones.

    Two passes over the seeds: first a cheap deterministic probe per seed
    (trivial word, the drift grid where rotation periods live, attractor
    refinements), then the full sampling budget.  The first certificate
    that re-verifies wins.  None means no evidence within the budget,
    never a proof of pointedness.
    """
    budget = budget or DEFAULT_BUDGET
    seeds = standard_seeds(spec, k, budget)
    for n_words in (0, budget.words_per_seed):
        for si, seed in enumerate(seeds):
            cloud = orbit_directions(spec, k, seed, n_words, budget.word_len,
                                     budget.t_max, budget=budget, stream=si)
            res = pointedness(cloud)
            if isinstance(res, NonPointedCertificate) and res.verify(spec):
                return res
    return None


@dataclass
class ConeHull:
    """Ray generators of the closed conic hull of a point set."""

    rays: list[np.ndarray]
    whole_space: bool


def cone_from_convex(generators) -> ConeHull:
    """Conic hull of a set: its ray directions, deduplicated by alignment,
    with a flag when the hull is actually the whole space (the origin is a
    strictly positive combination of spanning generators)."""
    G = np.asarray(generators, dtype=float)
    if G.ndim != 2 or G.shape[0] == 0:
        raise InputError("generators must be a nonempty list of vectors")
    norms = np.linalg.norm(G, axis=1)
    nz = norms > 0.0
    if not nz.any():
        raise InputError("all generators are zero")
    U = G[nz] / norms[nz, None]
    keep = _dedupe_rows(U)
    rays = [U[i] for i in keep]
    whole = False
    if rank_tol(U, 1e-12) == U.shape[1]:
        whole = _origin_strictly_inside(U)
    return ConeHull(rays=rays, whole_space=whole)


def _origin_strictly_inside(U: np.ndarray) -> bool:
    """Max eps with U^T theta = 0, sum theta = 1, theta >= eps; > 0 means
    the conic hull is everything."""
    m, n = U.shape
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.zeros((n + 1, m + 1))
    A_eq[:n, :m] = U.T
    A_eq[n, :m] = 1.0
    b_eq = np.zeros(n + 1)
    b_eq[n] = 1.0
    A_ub = np.zeros((m, m + 1))
    A_ub[:, :m] = -np.eye(m)
    A_ub[:, -1] = 1.0
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * m + [(None, None)], method="highs")
    return res.status == 0 and res.x is not None and res.x[-1] > 1e-12
