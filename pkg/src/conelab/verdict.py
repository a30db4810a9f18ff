"""Per-degree certificates combined into a controllability verdict.

For each exterior degree k the pipeline is: exhaustive family-orthant
search first (a certificate proves an invariant cone exists and the
system is not controllable); otherwise the sampled non-pointedness
search, directly at k and through the inverse system at degree d-k.  A
line in every candidate minimal cone at every degree is evidence (never
proof) of controllability, provided the bracket closure of {A, B} is the
full traceless algebra so the semigroup has interior.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .dynamics import Budget, DEFAULT_BUDGET, NonPointedCertificate, nonpointedness_search
from .errors import CapacityError, InputError, InternalConsistencyError
from .larc import bracket_closure_dim, larc_algorithm1
from .orthants import OrthantCertificate, family_invariant_orthants
from .system import SystemSpec, inverse_system

CONE_CERTIFIED = "ConeCertified"
NO_CONE_EVIDENCE = "NoConeEvidence"
INCONCLUSIVE = "Inconclusive"

NOT_CONTROLLABLE = "NotControllable"
CONTROLLABLE_EVIDENCE = "ControllableEvidence"

HEURISTIC_NOTE = ("controllable verdict is evidence, not proof: non-pointedness was "
                  "certified for the sampled minimal cones only")


@dataclass
class KReport:
    """Certificates and status for one exterior degree."""

    k: int
    larc_interior: bool
    orthant_certs: list[OrthantCertificate]
    nonpointed_cert: NonPointedCertificate | None = None
    dual_nonpointed_cert: NonPointedCertificate | None = None
    status: str = INCONCLUSIVE
    reason: str = ""
    budget: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.orthant_certs and (self.nonpointed_cert or self.dual_nonpointed_cert):
            raise InternalConsistencyError(
                f"degree {self.k}: an invariant orthant and a non-pointedness "
                f"certificate cannot both hold (invariant cones are pointed)")
        expected = _expected_status(self)
        if self.status != expected:
            raise InternalConsistencyError(
                f"degree {self.k}: status {self.status!r} but certificates imply {expected!r}")


def _expected_status(rep: KReport) -> str:
    if rep.orthant_certs:
        return CONE_CERTIFIED
    if rep.nonpointed_cert is not None or rep.dual_nonpointed_cert is not None:
        return NO_CONE_EVIDENCE
    return INCONCLUSIVE


@dataclass
class AnalysisReport:
    """Full analysis: interior check, per-degree reports, verdict."""

    spec: SystemSpec
    closure_dim: int
    closure_target: int
    algorithm1: bool
    larc_interior: bool
    larc_disagreement: bool
    k_reports: list[KReport]
    flag_type_estimate: list[int]
    inconclusive_k: list[int]
    verdict: str
    notes: list[str]
    budget: dict


def analyze_k(spec: SystemSpec, k: int, budget: Budget | None = None,
              larc_interior: bool = True) -> KReport:
    """Certificate pipeline for one degree.

    Family orthants are exhaustive, so a hit settles the degree.  When no
    orthant exists, the non-pointedness search runs at k; the dual search
    (inverse system at degree d-k) runs when the direct one fails and
    also, as corroboration, whenever k lies in the upper half of degrees,
    where the duality argument is the natural one.
    """
    budget = budget or DEFAULT_BUDGET
    if not (1 <= k <= spec.d - 1):
        raise InputError(f"need 1 <= k <= d-1, got k={k}")
    try:
        orthants = family_invariant_orthants(spec, k)
    except CapacityError as exc:
        return KReport(k=k, larc_interior=larc_interior, orthant_certs=[],
                       status=INCONCLUSIVE, reason=f"orthant search capacity: {exc}",
                       budget=budget.describe())
    if orthants:
        return KReport(k=k, larc_interior=larc_interior, orthant_certs=orthants,
                       status=CONE_CERTIFIED, budget=budget.describe())

    direct = nonpointedness_search(spec, k, budget)
    dual = None
    if direct is None or 2 * k > spec.d:
        dual = nonpointedness_search(inverse_system(spec), spec.d - k, budget)
    status = NO_CONE_EVIDENCE if (direct or dual) else INCONCLUSIVE
    reason = "" if status != INCONCLUSIVE else "no certificate within budget"
    return KReport(k=k, larc_interior=larc_interior, orthant_certs=[],
                   nonpointed_cert=direct, dual_nonpointed_cert=dual,
                   status=status, reason=reason, budget=budget.describe())


def analyze(spec: SystemSpec, budget: Budget | None = None,
            threads: int | None = None) -> AnalysisReport:
    """Full pipeline over k = 1 .. d-1.

    The saturation closure is the authoritative interior check; the
    published backtracking search runs alongside it and any disagreement
    is flagged rather than silently resolved.  Without a full closure all
    cone machinery is skipped (every theorem in play assumes interior).
    """
    budget = budget or DEFAULT_BUDGET
    target = spec.d * spec.d - 1
    closure = bracket_closure_dim(spec.A, spec.B)
    try:
        alg1 = larc_algorithm1(spec.A, spec.B, target)
    except CapacityError:
        alg1 = False
    interior = closure == target
    disagreement = alg1 != interior
    notes: list[str] = []
    if disagreement:
        notes.append(
            f"rank-condition disagreement: backtracking search says {alg1}, "
            f"bracket closure dimension is {closure}/{target}; the closure decides")

    ks = list(range(1, spec.d))
    if not interior:
        reports = [KReport(k=k, larc_interior=False, orthant_certs=[],
                           status=INCONCLUSIVE,
                           reason="bracket closure is a proper subalgebra; "
                                  "interior hypothesis fails",
                           budget=budget.describe())
                   for k in ks]
        verdict = INCONCLUSIVE
        notes.append("semigroup interior not established; no cone conclusions drawn")
    else:
        if threads is None:
            threads = _threads_from_env()
        if threads > 1:
            with ThreadPoolExecutor(max_workers=min(threads, len(ks))) as pool:
                reports = list(pool.map(
                    lambda k: analyze_k(spec, k, budget, larc_interior=True), ks))
        else:
            reports = [analyze_k(spec, k, budget, larc_interior=True) for k in ks]
        certified = [r.k for r in reports if r.status == CONE_CERTIFIED]
        if certified:
            verdict = NOT_CONTROLLABLE
        elif all(r.status == NO_CONE_EVIDENCE for r in reports):
            verdict = CONTROLLABLE_EVIDENCE
            notes.append(HEURISTIC_NOTE)
        else:
            verdict = INCONCLUSIVE
            notes.append("some degrees are inconclusive within the budget")

    return AnalysisReport(
        spec=spec,
        closure_dim=closure,
        closure_target=target,
        algorithm1=alg1,
        larc_interior=interior,
        larc_disagreement=disagreement,
        k_reports=reports,
        flag_type_estimate=[r.k for r in reports if r.status == CONE_CERTIFIED],
        inconclusive_k=[r.k for r in reports if r.status == INCONCLUSIVE],
        verdict=verdict,
        notes=notes,
        budget=budget.describe(),
    )


def _threads_from_env() -> int:
    raw = os.environ.get("CONELAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
