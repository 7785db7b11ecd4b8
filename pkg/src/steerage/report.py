"""Structured (JSON) form of a :class:`ParadoxReport`.

``report_to_dict`` / ``report_from_dict`` are inverse to each other, and
``recompute`` re-derives verdict, delta and case label from the parsed
classification alone, so a stored report can be audited without the state.
"""

from __future__ import annotations

import json

import numpy as np

from .paradox import (
    CaseLabel,
    Classification,
    ClassWeights,
    ContradictionCertificate,
    HiddenStateClass,
    LHSModel,
    Member,
    ParadoxReport,
    Verdict,
    Violation,
    verdict_from_classification,
)

FORMAT_VERSION = 1


class ReportFormatError(ValueError):
    pass


def _ket_out(ket) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(ket)]


def _ket_in(raw) -> np.ndarray:
    return np.array([complex(re, im) for re, im in raw])


def _weights_out(w: dict[int, float]) -> dict[str, float]:
    return {str(l): float(v) for l, v in w.items()}


def _weights_in(raw) -> dict[int, float]:
    return {int(l): float(v) for l, v in raw.items()}


def _class_out(c: HiddenStateClass) -> dict:
    return {
        "index": c.index,
        "ket": _ket_out(c.ket),
        "members": [[m.setting, m.outcome, float(m.weight)] for m in c.members],
        "settings_present": list(c.settings_present),
        "per_setting_weight": _weights_out(c.per_setting_weight),
        "canonical_weight": float(c.canonical_weight),
    }


def _row_out(row: ClassWeights) -> dict:
    return {
        "class": row.class_index,
        "settings_present": list(row.settings_present),
        "per_setting_weight": _weights_out(row.per_setting_weight),
        "canonical_weight": float(row.canonical_weight),
        "missing_settings": list(row.missing_settings),
        "consistent": row.consistent,
    }


def report_to_dict(report: ParadoxReport, seed: int | None = None) -> dict:
    cls = report.classification
    doc = {
        "format_version": FORMAT_VERSION,
        "verdict": report.verdict.value,
        "k": report.k,
        "delta_k": report.delta_k,
        "case_label": report.case_label.value,
        "paradox_string": report.paradox_string,
        "requirement_met": report.requirement_met,
        "setting_labels": list(report.setting_labels),
        "outcome_labels": [list(o) for o in report.outcome_labels],
        "tolerances": {"tol": report.tol},
        "digests": dict(report.digests),
        "seed": seed,
        "classes": None,
        "zero_outcomes": None,
        "certificate": None,
        "lhs_model": None,
        "violation": None,
    }
    if cls is not None:
        doc["classes"] = [_class_out(c) for c in cls.classes]
        doc["zero_outcomes"] = [list(z) for z in cls.zero_outcomes]
    if report.certificate is not None:
        cert = report.certificate
        doc["certificate"] = {
            "quantum_trace": cert.quantum_trace,
            "classical_trace": cert.classical_trace,
            "shared_classes": [
                {"class": i, "multiplicity": m, "canonical_weight": float(p)} for i, m, p in cert.shared_classes
            ],
            "derivation": [_row_out(r) for r in cert.derivation],
        }
    if report.lhs_model is not None:
        doc["lhs_model"] = {
            "weights": [float(w) for w in report.lhs_model.weights],
            "responses": report.lhs_model.responses.tolist(),
        }
    if report.violation is not None:
        v = report.violation
        doc["violation"] = {"setting": v.setting, "outcome": v.outcome, "eigen_gap": float(v.eigen_gap)}
    return doc


def dumps(report: ParadoxReport, seed: int | None = None) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(report_to_dict(report, seed), sort_keys=True, indent=2) + "\n"


def report_from_dict(doc: dict) -> ParadoxReport:
    try:
        if doc.get("format_version") != FORMAT_VERSION:
            raise ReportFormatError(f"unsupported format_version {doc.get('format_version')!r}")
        k = int(doc["k"])
        cls = None
        if doc["classes"] is not None:
            classes = tuple(
                HiddenStateClass(
                    int(c["index"]),
                    _ket_in(c["ket"]),
                    tuple(Member(int(l), int(a), float(w)) for l, a, w in c["members"]),
                )
                for c in doc["classes"]
            )
            zeros = tuple((int(l), int(a)) for l, a in doc["zero_outcomes"])
            cls = Classification(classes, zeros, k)
        cert = None
        if doc["certificate"] is not None:
            c = doc["certificate"]
            cert = ContradictionCertificate(
                quantum_trace=float(c["quantum_trace"]),
                classical_trace=float(c["classical_trace"]),
                shared_classes=tuple(
                    (int(s["class"]), int(s["multiplicity"]), float(s["canonical_weight"]))
                    for s in c["shared_classes"]
                ),
                derivation=tuple(
                    ClassWeights(
                        int(r["class"]),
                        tuple(r["settings_present"]),
                        _weights_in(r["per_setting_weight"]),
                        float(r["canonical_weight"]),
                        tuple(r["missing_settings"]),
                        bool(r["consistent"]),
                    )
                    for r in c["derivation"]
                ),
            )
        model = None
        if doc["lhs_model"] is not None:
            m = doc["lhs_model"]
            model = LHSModel(tuple(float(w) for w in m["weights"]), np.array(m["responses"], dtype=float))
        violation = None
        if doc["violation"] is not None:
            v = doc["violation"]
            violation = Violation(int(v["setting"]), int(v["outcome"]), float(v["eigen_gap"]))
        return ParadoxReport(
            verdict=Verdict(doc["verdict"]),
            k=k,
            delta_k=None if doc["delta_k"] is None else float(doc["delta_k"]),
            case_label=CaseLabel(doc["case_label"]),
            classification=cls,
            certificate=cert,
            lhs_model=model,
            requirement_met=doc["requirement_met"],
            violation=violation,
            tol=float(doc["tolerances"]["tol"]),
            setting_labels=tuple(doc["setting_labels"]),
            outcome_labels=tuple(tuple(o) for o in doc["outcome_labels"]),
            digests=dict(doc["digests"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ReportFormatError):
            raise
        raise ReportFormatError(f"malformed report: {exc!r}") from None


def loads(text: str | bytes) -> ParadoxReport:
    return report_from_dict(json.loads(text))


def recompute(report: ParadoxReport) -> tuple[Verdict, float | None, CaseLabel]:
    """Re-derive (verdict, delta_k, case_label) from the stored classification."""
    if report.classification is None:
        return Verdict.PREMISE_VIOLATED, None, CaseLabel.NOT_APPLICABLE
    verdict, delta, label, _ = verdict_from_classification(report.classification, report.tol)
    return verdict, delta, label
