"""Steering paradox "k_Q = (1 + delta_k)_C" for assemblages with pure members.

When every conditional state is pure, a local-hidden-state (LHS) model can
only explain ``rho~_a^l`` with hidden states proportional to ``rho~_a^l``
itself. The hidden states are therefore the rays of the assemblage, and the
whole question reduces to bookkeeping over those rays:

* group identical rays into classes (:func:`classify`);
* a class with hidden weight ``p`` must carry total weight ``p`` in *every*
  setting, so an LHS model exists iff every class appears in every setting
  with the same weight (:func:`lhs_reduce`);
* otherwise summing all ``k`` settings gives ``k`` on the quantum side but
  ``1 + sum_xi (m_xi - 1) p_xi`` on the classical side, where ``m_xi`` is the
  number of settings the class appears in.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .assemblage import Assemblage, compute_assemblage
from .linalg import ZERO_TRACE, SubsystemShape, projector_fidelity, purity_ratio, rank_one_decompose_many
from .measurements import Protocol
from .states import StateSpec, to_density

DEFAULT_TOL = 1e-9
RHO_B_TOL = 1e-9


class ToleranceAmbiguityError(ValueError):
    """Two conditional states are neither clearly equal nor clearly distinct."""


class Verdict(str, Enum):
    PARADOX = "Paradox"
    NO_CONTRADICTION = "NoContradiction"
    PREMISE_VIOLATED = "PremiseViolated"


class CaseLabel(str, Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    CASE4 = "Case4"
    MIXED = "Mixed"
    NOT_APPLICABLE = "NotApplicable"


# -- premise ----------------------------------------------------------------


@dataclass(frozen=True)
class AllPure:
    """Rank-1 data ``(weight, ket)`` for every nonzero entry, keyed by (setting, outcome)."""

    kets: dict[tuple[int, int], tuple[float, np.ndarray]]
    zero_outcomes: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Violation:
    setting: int
    outcome: int
    eigen_gap: float  # 1 - lambda_max / trace


def check_premise(asm: Assemblage, tol: float = DEFAULT_TOL) -> AllPure | Violation:
    traces = asm.traces()
    keys = [key for key in asm.keys() if traces[key] >= ZERO_TRACE]
    zeros = tuple(key for key in asm.keys() if traces[key] < ZERO_TRACE)
    decs = rank_one_decompose_many(np.array([asm.entries[key] for key in keys]), tol) if keys else []
    kets = {}
    for key, dec in zip(keys, decs):
        if dec is None:
            return Violation(key[0], key[1], 1.0 - purity_ratio(asm.entries[key]))
        kets[key] = dec
    return AllPure(kets, zeros)


# -- classification ---------------------------------------------------------


class Member(NamedTuple):
    setting: int
    outcome: int
    weight: float


@dataclass(frozen=True)
class HiddenStateClass:
    index: int
    ket: np.ndarray
    members: tuple[Member, ...]

    @property
    def settings_present(self) -> tuple[int, ...]:
        return tuple(sorted({m.setting for m in self.members}))

    @property
    def multiplicity(self) -> int:
        return len(self.settings_present)

    @property
    def per_setting_weight(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for m in self.members:
            out[m.setting] = out.get(m.setting, 0.0) + m.weight
        return dict(sorted(out.items()))

    @property
    def canonical_weight(self) -> float:
        """Weight forced by the lowest-index setting the class appears in."""
        return self.per_setting_weight[self.settings_present[0]]

    def members_in(self, setting: int) -> tuple[Member, ...]:
        return tuple(m for m in self.members if m.setting == setting)


@dataclass(frozen=True)
class Classification:
    classes: tuple[HiddenStateClass, ...]
    zero_outcomes: tuple[tuple[int, int], ...]
    k: int

    def class_of(self, setting: int, outcome: int) -> int | None:
        for c in self.classes:
            if any(m.setting == setting and m.outcome == outcome for m in c.members):
                return c.index
        return None

    def setting_sets(self) -> list[frozenset[int]]:
        sets = [set() for _ in range(self.k)]
        for c in self.classes:
            for l in c.settings_present:
                sets[l].add(c.index)
        return [frozenset(s) for s in sets]


def classify(asm: Assemblage, premise: AllPure, tol: float = DEFAULT_TOL) -> Classification:
    """Group nonzero entries whose normalized states are the same ray.

    Classes are ordered by first occurrence in setting-major, outcome-minor
    order. A fidelity inside ``(1 - 10 tol, 1 - tol)`` is refused.
    """
    keys = [key for key in asm.keys() if key in premise.kets]
    n = len(keys)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        ki = premise.kets[keys[i]][1]
        for j in range(i + 1, n):
            f = projector_fidelity(ki, premise.kets[keys[j]][1])
            if f >= 1.0 - tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            elif f > 1.0 - 10 * tol:
                raise ToleranceAmbiguityError(
                    f"entries {keys[i]} and {keys[j]} have fidelity 1 - {1 - f:.3g}, "
                    f"inside the ambiguity band of tol={tol:g}; choose a different tol"
                )

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    classes = []
    for idx, root in enumerate(sorted(groups)):
        members = tuple(Member(keys[i][0], keys[i][1], premise.kets[keys[i]][0]) for i in groups[root])
        classes.append(HiddenStateClass(idx, premise.kets[keys[groups[root][0]]][1], members))
    return Classification(tuple(classes), premise.zero_outcomes, asm.k)


def measurement_requirement(cls: Classification, k: int | None = None) -> bool:
    """True iff the per-setting sets of conditional rays are not all identical."""
    sets = cls.setting_sets()
    if k is not None and k != len(sets):
        raise ValueError(f"classification has {len(sets)} settings, not {k}")
    return any(s != sets[0] for s in sets[1:])


def case_label(cls: Classification) -> CaseLabel:
    if cls.k > 2:
        return CaseLabel.MIXED
    within = any(len(c.members_in(l)) > 1 for c in cls.classes for l in c.settings_present)
    across = any(c.multiplicity > 1 for c in cls.classes)
    return {
        (False, False): CaseLabel.CASE1,
        (True, False): CaseLabel.CASE2,
        (False, True): CaseLabel.CASE3,
        (True, True): CaseLabel.CASE4,
    }[(within, across)]


# -- LHS reduction ----------------------------------------------------------


@dataclass(frozen=True)
class LHSModel:
    """A consistent LHS model: hidden weights and responses p(a | l, xi)."""

    weights: tuple[float, ...]
    responses: np.ndarray  # shape (k, n_outcomes, n_classes)

    def reconstruct(self, cls: Classification) -> np.ndarray:
        """sum_xi p(a|l,xi) p_xi rho_xi for every (l, a)."""
        projs = np.array([np.outer(c.ket, c.ket.conj()) for c in cls.classes])
        joint = self.responses * np.asarray(self.weights)
        return np.einsum("lac,cij->laij", joint, projs)


@dataclass(frozen=True)
class ClassWeights:
    """One row of the derivation table."""

    class_index: int
    settings_present: tuple[int, ...]
    per_setting_weight: dict[int, float]
    canonical_weight: float
    missing_settings: tuple[int, ...]
    consistent: bool


@dataclass(frozen=True)
class ContradictionCertificate:
    quantum_trace: float
    classical_trace: float
    shared_classes: tuple[tuple[int, int, float], ...]  # (class, m_xi, canonical p_xi)
    derivation: tuple[ClassWeights, ...]

    @property
    def delta(self) -> float:
        return self.classical_trace - 1.0

    @property
    def canonical_weight_sum(self) -> float:
        return float(sum(row.canonical_weight for row in self.derivation))


def weight_table(cls: Classification, tol: float = DEFAULT_TOL) -> tuple[ClassWeights, ...]:
    rows = []
    for c in cls.classes:
        w = c.per_setting_weight
        missing = tuple(l for l in range(cls.k) if l not in w)
        vals = list(w.values())
        consistent = not missing and max(vals) - min(vals) <= tol
        rows.append(ClassWeights(c.index, c.settings_present, w, c.canonical_weight, missing, consistent))
    return tuple(rows)


def classical_trace(cls: Classification) -> float:
    return 1.0 + float(sum((c.multiplicity - 1) * c.canonical_weight for c in cls.classes))


def lhs_reduce(
    asm: Assemblage, cls: Classification, tol: float = DEFAULT_TOL
) -> LHSModel | ContradictionCertificate:
    """Build the forced LHS model, or explain why none exists."""
    table = weight_table(cls, tol)
    if all(row.consistent for row in table):
        weights = tuple(c.canonical_weight for c in cls.classes)
        resp = np.zeros((cls.k, asm.n_outcomes, len(cls.classes)))
        for c in cls.classes:
            for m in c.members:
                resp[m.setting, m.outcome, c.index] = m.weight / c.canonical_weight
        model = LHSModel(weights, resp)
        rebuilt = sum(w * np.outer(c.ket, c.ket.conj()) for w, c in zip(weights, cls.classes))
        resid = float(np.max(np.abs(rebuilt - asm.rho_B)))
        if resid > RHO_B_TOL:
            raise RuntimeError(f"LHS model reproduces rho_B only up to {resid:.3g}")
        return model
    shared = tuple((c.index, c.multiplicity, c.canonical_weight) for c in cls.classes if c.multiplicity > 1)
    return ContradictionCertificate(
        quantum_trace=float(asm.traces().sum()),
        classical_trace=classical_trace(cls),
        shared_classes=shared,
        derivation=table,
    )


# -- end to end -------------------------------------------------------------


def format_value(x: float) -> str:
    """Short exact-looking rendering: 1/3 for 0.333..., else up to 10 digits."""
    frac = Fraction(x).limit_denominator(1000)
    if abs(float(frac) - x) < 1e-9:
        return str(frac)
    return f"{x:.10g}"


def paradox_string(verdict: Verdict, k: int, delta: float) -> str:
    if verdict is Verdict.NO_CONTRADICTION:
        return f"{k}_Q = {k}_C"
    if verdict is Verdict.PREMISE_VIOLATED:
        return ""
    if abs(delta) < 1e-12:
        return f"{k}_Q = (1+0)_C"
    return f"{k}_Q = ({format_value(1.0 + delta)})_C"


@dataclass(frozen=True)
class ParadoxReport:
    verdict: Verdict
    k: int
    delta_k: float | None
    case_label: CaseLabel
    classification: Classification | None
    certificate: ContradictionCertificate | None = None
    lhs_model: LHSModel | None = None
    requirement_met: bool | None = None
    violation: Violation | None = None
    tol: float = DEFAULT_TOL
    setting_labels: tuple[str, ...] = ()
    outcome_labels: tuple[tuple[str, ...], ...] = ()
    digests: dict[str, str] = field(default_factory=dict)

    @property
    def paradox_string(self) -> str:
        return paradox_string(self.verdict, self.k, self.delta_k or 0.0)

    @property
    def classical_trace(self) -> float | None:
        if self.verdict is Verdict.PREMISE_VIOLATED:
            return None
        return 1.0 + self.delta_k


def _digest(arr) -> str:
    a = np.round(np.asarray(arr, dtype=complex), 12) + 0.0
    buf = np.ascontiguousarray(np.stack([a.real, a.imag]) + 0.0).tobytes()
    return hashlib.sha256(buf).hexdigest()


def verdict_from_classification(cls: Classification, tol: float = DEFAULT_TOL):
    """Verdict, delta and label given a classification (the post-premise half of analyze)."""
    requirement = measurement_requirement(cls)
    table = weight_table(cls, tol)
    if all(row.consistent for row in table):
        return Verdict.NO_CONTRADICTION, float(cls.k - 1), CaseLabel.NOT_APPLICABLE, requirement
    return Verdict.PARADOX, classical_trace(cls) - 1.0, case_label(cls), requirement


def analyze(
    state: StateSpec | np.ndarray,
    shape: SubsystemShape | None,
    protocol: Protocol,
    tol: float = DEFAULT_TOL,
) -> ParadoxReport:
    """compute_assemblage -> check_premise -> classify -> requirement -> lhs_reduce."""
    asm = compute_assemblage(state, shape, protocol)
    rho = to_density(state) if isinstance(state, StateSpec) else np.asarray(state)
    digests = {
        "rho_AB": _digest(rho),
        "protocol": _digest(np.concatenate([np.ravel(p) for s in protocol.settings for p in s.projectors])),
        "alice_sites": ",".join(map(str, asm.shape.alice)),
    }
    common = dict(
        k=protocol.k,
        tol=tol,
        setting_labels=asm.setting_labels,
        outcome_labels=asm.outcome_labels,
        digests=digests,
    )
    premise = check_premise(asm, tol)
    if isinstance(premise, Violation):
        return ParadoxReport(
            verdict=Verdict.PREMISE_VIOLATED,
            delta_k=None,
            case_label=CaseLabel.NOT_APPLICABLE,
            classification=None,
            violation=premise,
            **common,
        )
    cls = classify(asm, premise, tol)
    requirement = measurement_requirement(cls, protocol.k)
    result = lhs_reduce(asm, cls, tol)
    if isinstance(result, LHSModel):
        return ParadoxReport(
            verdict=Verdict.NO_CONTRADICTION,
            delta_k=float(protocol.k - 1),
            case_label=CaseLabel.NOT_APPLICABLE,
            classification=cls,
            lhs_model=result,
            requirement_met=requirement,
            **common,
        )
    return ParadoxReport(
        verdict=Verdict.PARADOX,
        delta_k=result.delta,
        case_label=case_label(cls),
        classification=cls,
        certificate=result,
        requirement_met=requirement,
        **common,
    )
