"""Pure and mixed states on a declared subsystem layout, plus their file format.

A state is kept as an ensemble ``[(weight, ket), ...]`` until a density
matrix is actually needed. The state file is a JSON document::

    {
      "dims": [2, 2],
      "alice_sites": [0],
      "kind": "pure",
      "amplitudes": [[0.7071, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071, 0.0]]
    }

or, for a mixture, ``"kind": "mixture"`` with
``"terms": [{"weight": 0.5, "amplitudes": [...]}, ...]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import cos, pi, sin, sqrt
from typing import Sequence

import numpy as np

from .linalg import ShapeError, SubsystemShape

NORM_TOL = 1e-10


class StateValidationError(ValueError):
    """Bad amplitudes, weights or dimensions in a state description."""


@dataclass(frozen=True)
class StateSpec:
    """A pure ket (one term of weight 1) or a finite mixture of kets."""

    shape: SubsystemShape
    kind: str
    weights: tuple[float, ...]
    kets: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.kind not in ("pure", "mixture"):
            raise StateValidationError(f"kind must be 'pure' or 'mixture', got {self.kind!r}")
        if len(self.weights) != len(self.kets) or not self.kets:
            raise StateValidationError("a state needs one weight per ket and at least one ket")
        if self.kind == "pure" and len(self.kets) != 1:
            raise StateValidationError("a pure state has exactly one ket")
        dim = self.shape.dim
        for i, ket in enumerate(self.kets):
            ket.setflags(write=False)
            if ket.shape != (dim,):
                raise StateValidationError(
                    f"term {i}: {ket.size} amplitudes but dims {list(self.shape.local_dims)} need {dim}"
                )
            norm = float(np.linalg.norm(ket))
            if abs(norm - 1.0) > NORM_TOL:
                raise StateValidationError(f"term {i}: ket norm is {norm:.12g}, expected 1")
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0):
            raise StateValidationError(f"weights must be nonnegative, got {list(self.weights)}")
        if abs(w.sum() - 1.0) > NORM_TOL:
            raise StateValidationError(f"weights sum to {w.sum():.12g}, expected 1")

    @property
    def ensemble(self) -> list[tuple[float, np.ndarray]]:
        return list(zip(self.weights, self.kets))

    def with_alice(self, alice_sites: Sequence[int]) -> StateSpec:
        return StateSpec(SubsystemShape(self.shape.local_dims, alice_sites), self.kind, self.weights, self.kets)


def pure_state(dims: Sequence[int], amplitudes, alice_sites: Sequence[int] = (0,)) -> StateSpec:
    ket = np.array(amplitudes, dtype=complex).ravel()
    return StateSpec(SubsystemShape(dims, alice_sites), "pure", (1.0,), (ket,))


def mixed_state(dims: Sequence[int], terms, alice_sites: Sequence[int] = (0,)) -> StateSpec:
    """``terms`` is an iterable of ``(weight, amplitudes)`` pairs."""
    terms = list(terms)
    weights = tuple(float(w) for w, _ in terms)
    kets = tuple(np.array(k, dtype=complex).ravel() for _, k in terms)
    return StateSpec(SubsystemShape(dims, alice_sites), "mixture", weights, kets)


def to_density(spec: StateSpec) -> np.ndarray:
    """Density matrix sum_alpha p_alpha |psi_alpha><psi_alpha|."""
    dim = spec.shape.dim
    rho = np.zeros((dim, dim), dtype=complex)
    for w, ket in spec.ensemble:
        rho += w * np.outer(ket, ket.conj())
    return (rho + rho.conj().T) / 2


def basis_ket(bits: str, d: int = 2) -> np.ndarray:
    """Computational basis ket from a digit string, site 0 leftmost."""
    v = np.zeros(d ** len(bits), dtype=complex)
    v[int(bits, d)] = 1.0
    return v


def _ket(*pairs: tuple[complex, str]) -> np.ndarray:
    v = sum(c * basis_ket(b) for c, b in pairs)
    return v / np.linalg.norm(v)


def two_qubit_theta(theta: float) -> StateSpec:
    """cos(theta)|00> + sin(theta)|11>, Alice holds site 0."""
    if not 0.0 < theta < pi / 2:
        raise StateValidationError(f"theta must lie in (0, pi/2), got {theta}")
    ket = cos(theta) * basis_ket("00") + sin(theta) * basis_ket("11")
    return pure_state([2, 2], ket, alice_sites=[0])


LC4 = _ket((1, "0000"), (1, "1100"), (1, "0011"), (-1, "1111"))
LC4_PRIME = _ket((1, "0100"), (1, "1000"), (1, "0111"), (-1, "1011"))


def cluster_mix_theta(theta: float) -> StateSpec:
    """cos^2 |LC4><LC4| + sin^2 |LC4'><LC4'|; Alice holds sites 0 and 1."""
    c2, s2 = cos(theta) ** 2, sin(theta) ** 2
    terms = [(w, k) for w, k in ((c2, LC4), (s2, LC4_PRIME)) if w > 0]
    if len(terms) == 1:
        return pure_state([2] * 4, terms[0][1], alice_sites=[0, 1])
    return mixed_state([2] * 4, terms, alice_sites=[0, 1])


def psi_prime() -> StateSpec:
    """(|001> + |01>(|0>+|1>) + |10>(|0>-|1>) - |110>)/sqrt(6); Alice holds 0, 1."""
    ket = _ket(
        (1, "001"),
        (1, "010"), (1, "011"),
        (1, "100"), (-1, "101"),
        (-1, "110"),
    )
    return pure_state([2, 2, 2], ket, alice_sites=[0, 1])


def w_state() -> StateSpec:
    ket = _ket((1, "100"), (1, "010"), (1, "001"))
    return pure_state([2, 2, 2], ket, alice_sites=[0, 1])


def si_product_example() -> StateSpec:
    """(|00>+|01>+|10>+|11>)/2 (x) |0>; no steering contradiction arises."""
    ket = _ket((1, "000"), (1, "010"), (1, "100"), (1, "110"))
    return pure_state([2, 2, 2], ket, alice_sites=[0, 1])


def max_entangled(d: int) -> StateSpec:
    """sum_j |jj>/sqrt(d) on two qudits, Alice holds site 0."""
    ket = np.zeros(d * d, dtype=complex)
    for j in range(d):
        ket[j * d + j] = 1.0
    return pure_state([d, d], ket / sqrt(d), alice_sites=[0])


_BUILTINS = {
    "two_qubit_theta": (two_qubit_theta, 1),
    "cluster_mix_theta": (cluster_mix_theta, 1),
    "psi_prime": (psi_prime, 0),
    "w_state": (w_state, 0),
    "si_product_example": (si_product_example, 0),
    "max_entangled": (max_entangled, 1),
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin(name: str, params: Sequence[float] = ()) -> StateSpec:
    """Look up one of the named example states."""
    try:
        factory, n_params = _BUILTINS[name]
    except KeyError:
        raise StateValidationError(
            f"unknown builtin state {name!r}; choose from {', '.join(BUILTIN_NAMES)}"
        ) from None
    params = list(params)
    if len(params) != n_params:
        raise StateValidationError(f"{name} takes {n_params} parameter(s), got {len(params)}")
    if name == "max_entangled":
        return factory(int(params[0]))
    return factory(*(float(p) for p in params))


# -- file format -----------------------------------------------------------


def _amplitudes_to_json(ket: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in ket]


def _amplitudes_from_json(raw, where: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise StateValidationError(f"{where}: expected a nonempty list of [re, im] pairs")
    out = np.empty(len(raw), dtype=complex)
    for i, pair in enumerate(raw):
        if isinstance(pair, (int, float)):
            out[i] = float(pair)
            continue
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, (int, float)) for x in pair)):
            raise StateValidationError(f"{where}[{i}]: expected [re, im], got {pair!r}")
        out[i] = complex(pair[0], pair[1])
    return out


def state_to_dict(spec: StateSpec) -> dict:
    doc = {
        "dims": list(spec.shape.local_dims),
        "alice_sites": list(spec.shape.alice),
        "kind": spec.kind,
    }
    if spec.kind == "pure":
        doc["amplitudes"] = _amplitudes_to_json(spec.kets[0])
    else:
        doc["terms"] = [
            {"weight": float(w), "amplitudes": _amplitudes_to_json(k)} for w, k in spec.ensemble
        ]
    return doc


def state_from_dict(doc, alice_sites: Sequence[int] | None = None) -> StateSpec:
    if not isinstance(doc, dict):
        raise StateValidationError("state document must be an object")
    dims = doc.get("dims")
    if not (isinstance(dims, list) and dims and all(isinstance(d, int) for d in dims)):
        raise StateValidationError("field 'dims': expected a nonempty integer list")
    if alice_sites is None:
        alice_sites = doc.get("alice_sites", [0] if len(dims) > 1 else [])
    if not (isinstance(alice_sites, (list, tuple)) and all(isinstance(s, int) for s in alice_sites)):
        raise StateValidationError("field 'alice_sites': expected an integer list")
    try:
        # a one-site document is a valid state but has no Alice/Bob split to record
        shape = SubsystemShape(dims, alice_sites) if alice_sites else SubsystemShape.unpartitioned(dims)
    except ShapeError as exc:
        raise StateValidationError(f"field 'dims'/'alice_sites': {exc}") from None

    kind = doc.get("kind")
    if kind == "pure":
        ket = _amplitudes_from_json(doc.get("amplitudes"), "field 'amplitudes'")
        return StateSpec(shape, "pure", (1.0,), (ket,))
    if kind == "mixture":
        terms = doc.get("terms")
        if not isinstance(terms, list) or not terms:
            raise StateValidationError("field 'terms': expected a nonempty list")
        weights, kets = [], []
        for i, term in enumerate(terms):
            if not isinstance(term, dict) or not isinstance(term.get("weight"), (int, float)):
                raise StateValidationError(f"field 'terms[{i}].weight': expected a number")
            weights.append(float(term["weight"]))
            kets.append(_amplitudes_from_json(term.get("amplitudes"), f"field 'terms[{i}].amplitudes'"))
        total = sum(weights)
        if abs(total - 1.0) > NORM_TOL:
            raise StateValidationError(f"field 'terms[*].weight': weights sum to {total:.12g}, expected 1")
        return StateSpec(shape, "mixture", tuple(weights), tuple(kets))
    raise StateValidationError(f"field 'kind': expected 'pure' or 'mixture', got {kind!r}")


def emit_state_file(spec: StateSpec) -> bytes:
    return (json.dumps(state_to_dict(spec), indent=2) + "\n").encode("utf-8")


def parse_state_file(data: bytes | str, alice_sites: Sequence[int] | None = None) -> StateSpec:
    """Parse a JSON state document; ``alice_sites`` overrides the document's field."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise StateValidationError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return state_from_dict(doc, alice_sites)
