"""Report files: lossless JSON serialization and certificate re-checking.

The emitted report mirrors the analysis structure and carries every
certificate payload in full, so `verify` can re-derive each claim from
the system specification without trusting the original run.  Emission is
canonical (sorted keys, fixed separators): identical analyses serialize
to identical bytes.  Wall-clock metadata lives in a single optional
field that verification and the determinism guarantee ignore.
"""

from __future__ import annotations

import json

import numpy as np

from . import __version__
from .dynamics import NonPointedCertificate
from .errors import InputError
from .larc import bracket_closure_dim, larc_algorithm1
from .orthants import OrthantCertificate, SignPattern, family_invariant_orthants
from .system import (FINITE_SET, INTERVAL, UNBOUNDED, SemigroupWord, SystemSpec,
                     UModel, inverse_system)
from .verdict import (AnalysisReport, CONE_CERTIFIED, INCONCLUSIVE, KReport,
                      NO_CONE_EVIDENCE)

TOOL_NAME = "conelab"


def u_model_to_dict(m: UModel) -> dict:
    if m.kind == UNBOUNDED:
        return {"kind": UNBOUNDED}
    if m.kind == FINITE_SET:
        return {"kind": FINITE_SET, "values": list(m.values)}
    return {"kind": INTERVAL, "lo": m.lo, "hi": m.hi}


def u_model_from_dict(data) -> UModel:
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("u_model must be an object with a 'kind' field")
    kind = data["kind"]
    if kind == UNBOUNDED:
        return UModel(UNBOUNDED)
    if kind == FINITE_SET:
        return UModel(FINITE_SET, tuple(data.get("values", ())))
    if kind == INTERVAL:
        if "lo" not in data or "hi" not in data:
            raise InputError("interval u_model needs 'lo' and 'hi'")
        return UModel(INTERVAL, lo=float(data["lo"]), hi=float(data["hi"]))
    raise InputError(f"unknown u_model kind {kind!r}")


def spec_to_dict(spec: SystemSpec) -> dict:
    return {
        "d": spec.d,
        "A": np.asarray(spec.A).tolist(),
        "B": np.asarray(spec.B).tolist(),
        "u_model": u_model_to_dict(spec.u_model),
        "seed": spec.rng_seed,
    }


def spec_from_dict(data) -> SystemSpec:
    for key in ("d", "A", "B"):
        if key not in data:
            raise InputError(f"system file is missing the {key!r} field")
    try:
        d = int(data["d"])
        A = np.asarray(data["A"], dtype=float)
        B = np.asarray(data["B"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"system file has malformed matrices: {exc}") from exc
    model = u_model_from_dict(data.get("u_model", {"kind": UNBOUNDED}))
    seed = int(data.get("seed", 42))
    return SystemSpec(d=d, A=A, B=B, u_model=model, rng_seed=seed)


def _word_to_list(w: SemigroupWord) -> list:
    return [[t, u] for t, u in w.letters]


def _word_from_list(data) -> SemigroupWord:
    return SemigroupWord(tuple((float(t), float(u)) for t, u in data))


def _nonpointed_to_dict(cert: NonPointedCertificate | None):
    if cert is None:
        return None
    return {
        "k": cert.k,
        "mode": cert.mode,
        "seed_coords": np.asarray(cert.seed_coords).tolist(),
        "words": [_word_to_list(w) for w in cert.words],
        "alignment": cert.alignment,
        "coefficients": (None if cert.coefficients is None
                         else np.asarray(cert.coefficients).tolist()),
        "residual": cert.residual,
    }


def _nonpointed_from_dict(data) -> NonPointedCertificate | None:
    if data is None:
        return None
    return NonPointedCertificate(
        k=int(data["k"]),
        mode=data["mode"],
        seed_coords=np.asarray(data["seed_coords"], dtype=float),
        words=[_word_from_list(w) for w in data["words"]],
        alignment=float(data["alignment"]),
        coefficients=(None if data.get("coefficients") is None
                      else np.asarray(data["coefficients"], dtype=float)),
        residual=float(data["residual"]),
    )


def _orthant_to_dict(cert: OrthantCertificate) -> dict:
    return {
        "k": cert.k,
        "pattern": list(cert.pattern.signs),
        "slack": cert.slack,
        "checked_u": list(cert.checked_u),
    }


def _orthant_from_dict(data) -> OrthantCertificate:
    return OrthantCertificate(
        k=int(data["k"]),
        pattern=SignPattern(tuple(int(s) for s in data["pattern"])),
        slack=float(data["slack"]),
        checked_u=tuple(float(u) for u in data.get("checked_u", ())),
    )


def _kreport_to_dict(rep: KReport) -> dict:
    return {
        "k": rep.k,
        "status": rep.status,
        "reason": rep.reason,
        "orthant_certificates": [_orthant_to_dict(c) for c in rep.orthant_certs],
        "nonpointed_certificate": _nonpointed_to_dict(rep.nonpointed_cert),
        "dual_nonpointed_certificate": _nonpointed_to_dict(rep.dual_nonpointed_cert),
        "budget": dict(rep.budget),
    }


def _kreport_from_dict(data, larc_interior: bool) -> KReport:
    return KReport(
        k=int(data["k"]),
        larc_interior=larc_interior,
        orthant_certs=[_orthant_from_dict(c) for c in data["orthant_certificates"]],
        nonpointed_cert=_nonpointed_from_dict(data.get("nonpointed_certificate")),
        dual_nonpointed_cert=_nonpointed_from_dict(data.get("dual_nonpointed_certificate")),
        status=data["status"],
        reason=data.get("reason", ""),
        budget=dict(data.get("budget", {})),
    )


def report_to_dict(report: AnalysisReport, elapsed: float | None = None) -> dict:
    data = {
        "tool": {"name": TOOL_NAME, "version": __version__},
        "system": spec_to_dict(report.spec),
        "closure": {
            "dim": report.closure_dim,
            "target": report.closure_target,
            "algorithm1": report.algorithm1,
            "interior": report.larc_interior,
            "disagreement": report.larc_disagreement,
        },
        "k_reports": [_kreport_to_dict(r) for r in report.k_reports],
        "flag_type_estimate": list(report.flag_type_estimate),
        "inconclusive_k": list(report.inconclusive_k),
        "verdict": report.verdict,
        "notes": list(report.notes),
        "budget": dict(report.budget),
    }
    if elapsed is not None:
        data["elapsed_seconds"] = elapsed
    return data


def report_from_dict(data) -> AnalysisReport:
    spec = spec_from_dict(data["system"])
    closure = data["closure"]
    return AnalysisReport(
        spec=spec,
        closure_dim=int(closure["dim"]),
        closure_target=int(closure["target"]),
        algorithm1=bool(closure["algorithm1"]),
        larc_interior=bool(closure["interior"]),
        larc_disagreement=bool(closure["disagreement"]),
        k_reports=[_kreport_from_dict(r, bool(closure["interior"]))
                   for r in data["k_reports"]],
        flag_type_estimate=[int(k) for k in data["flag_type_estimate"]],
        inconclusive_k=[int(k) for k in data["inconclusive_k"]],
        verdict=data["verdict"],
        notes=list(data["notes"]),
        budget=dict(data.get("budget", {})),
    )


def report_to_json(report: AnalysisReport, elapsed: float | None = None) -> str:
    """Canonical JSON: identical analyses emit identical bytes (the
    optional elapsed-time field excepted)."""
    return json.dumps(report_to_dict(report, elapsed=elapsed),
                      sort_keys=True, indent=1)


def report_from_json(text: str) -> AnalysisReport:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"report is not valid JSON: {exc}") from exc
    return report_from_dict(data)


def verify_report(data: dict) -> list[tuple[str, bool, str]]:
    """Re-check every certificate and consistency claim in a report dict.

    Returns (check name, passed, detail) triples; the report verifies when
    every triple passes.
    """
    checks: list[tuple[str, bool, str]] = []
    spec = spec_from_dict(data["system"])
    closure = data["closure"]

    dim = bracket_closure_dim(spec.A, spec.B)
    checks.append(("closure_dim", dim == closure["dim"],
                   f"recomputed {dim}, reported {closure['dim']}"))
    alg1 = larc_algorithm1(spec.A, spec.B, int(closure["target"]))
    checks.append(("algorithm1", alg1 == closure["algorithm1"],
                   f"recomputed {alg1}, reported {closure['algorithm1']}"))

    inv = inverse_system(spec)
    for rep in data["k_reports"]:
        k = int(rep["k"])
        tag = f"k={k}"
        certs = [_orthant_from_dict(c) for c in rep["orthant_certificates"]]
        recomputed = family_invariant_orthants(spec, k)
        rec_patterns = {c.pattern.signs for c in recomputed}
        for c in certs:
            ok = c.verify(spec) and c.pattern.signs in rec_patterns
            checks.append((f"{tag} orthant {c.pattern.signs}", ok,
                           f"slack {c.slack:.3e}"))
        if rep["status"] == CONE_CERTIFIED and not certs:
            checks.append((f"{tag} status", False, "ConeCertified without certificates"))
        if rep["status"] != CONE_CERTIFIED and recomputed:
            checks.append((f"{tag} status", False,
                           "orthant exists but status is not ConeCertified"))

        direct = _nonpointed_from_dict(rep.get("nonpointed_certificate"))
        if direct is not None:
            ok = direct.k == k and direct.verify(spec)
            checks.append((f"{tag} nonpointed", ok,
                           f"mode {direct.mode}, alignment {direct.alignment:.3e}"))
        dual = _nonpointed_from_dict(rep.get("dual_nonpointed_certificate"))
        if dual is not None:
            ok = dual.k == spec.d - k and dual.verify(inv)
            checks.append((f"{tag} dual nonpointed", ok,
                           f"mode {dual.mode} at degree {dual.k} of the inverse system"))
        if rep["status"] == NO_CONE_EVIDENCE and direct is None and dual is None:
            checks.append((f"{tag} status", False, "NoConeEvidence without a certificate"))

    verdict = data["verdict"]
    statuses = [r["status"] for r in data["k_reports"]]
    if CONE_CERTIFIED in statuses:
        expected = "NotControllable"
    elif all(s == NO_CONE_EVIDENCE for s in statuses) and closure["interior"]:
        expected = "ControllableEvidence"
    else:
        expected = INCONCLUSIVE
    checks.append(("verdict", verdict == expected,
                   f"reported {verdict}, certificates imply {expected}"))
    return checks
