"""Projective measurement settings on Alice's subsystem.

Qubit sites take the labels ``z``, ``x`` and ``y``; any site also accepts
``computational`` and ``fourier``. A protocol file is JSON::

    {"settings": [{"basis": ["z", "z"]},
                  {"label": "bell", "projectors": [M0, M1, M2, M3]}]}

where each ``M`` is a list of rows of ``[re, im]`` pairs.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .linalg import fix_phase, rank_one_decompose

PROJ_TOL = 1e-10

_S2 = 1 / np.sqrt(2)
QUBIT_BASES = {
    "z": (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
    "x": (np.array([_S2, _S2], dtype=complex), np.array([_S2, -_S2], dtype=complex)),
    "y": (np.array([_S2, 1j * _S2]), np.array([_S2, -1j * _S2])),
}


class ProjectorError(ValueError):
    """A projector family that is not a complete orthogonal set."""


def computational_basis(d: int) -> list[np.ndarray]:
    return [np.eye(d, dtype=complex)[j] for j in range(d)]


def fourier_basis(d: int) -> list[np.ndarray]:
    """|f_j> = sum_k w^{jk} |k> / sqrt(d) with w = exp(2 pi i / d)."""
    k = np.arange(d)
    return [np.exp(2j * np.pi * j * k / d) / np.sqrt(d) for j in range(d)]


def site_basis(label: str, d: int) -> list[np.ndarray]:
    if label == "computational":
        return computational_basis(d)
    if label == "fourier":
        return fourier_basis(d)
    if label in QUBIT_BASES:
        if d != 2:
            raise ProjectorError(f"basis label {label!r} needs a qubit site, got dimension {d}")
        return list(QUBIT_BASES[label])
    raise ProjectorError(f"unknown basis label {label!r}")


@dataclass(frozen=True)
class ProjectorSet:
    """One measurement setting: a complete set of rank-1 orthogonal projectors.

    ``vectors[a]`` is the unit ket with ``projectors[a] = |v><v|``.
    """

    label: str
    projectors: tuple[np.ndarray, ...]
    outcome_labels: tuple[str, ...]
    vectors: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __len__(self) -> int:
        return len(self.projectors)


def _freeze(arrs) -> tuple[np.ndarray, ...]:
    out = []
    for a in arrs:
        a = np.array(a, dtype=complex)
        a.setflags(write=False)
        out.append(a)
    return tuple(out)


def basis_setting(per_site_labels: Sequence[str], alice_dims: Sequence[int] | None = None) -> ProjectorSet:
    """Tensor-product setting, e.g. ``["y", "x"]``; outcomes in lexicographic order."""
    labels = list(per_site_labels)
    if alice_dims is None:
        alice_dims = [2] * len(labels)
    alice_dims = list(alice_dims)
    if len(labels) != len(alice_dims):
        raise ProjectorError(
            f"{len(labels)} basis labels given for {len(alice_dims)} Alice site(s)"
        )
    per_site = [site_basis(lab, d) for lab, d in zip(labels, alice_dims)]
    vectors, names = [], []
    for combo in itertools.product(*[range(d) for d in alice_dims]):
        vectors.append(reduce(np.kron, [per_site[s][i] for s, i in enumerate(combo)]))
        names.append("".join(str(i) for i in combo) if max(alice_dims) <= 10 else ",".join(map(str, combo)))
    label = "".join(labels) if all(len(x) == 1 for x in labels) else "-".join(labels)
    return ProjectorSet(
        label=label,
        projectors=_freeze(np.outer(v, v.conj()) for v in vectors),
        outcome_labels=tuple(names),
        vectors=_freeze(vectors),
    )


def explicit_setting(projectors, label: str = "explicit", outcome_labels: Sequence[str] | None = None) -> ProjectorSet:
    """Validate an arbitrary family of rank-1 projectors (entangled bases allowed)."""
    mats = [np.asarray(p, dtype=complex) for p in projectors]
    if not mats:
        raise ProjectorError("a setting needs at least one projector")
    d = mats[0].shape[0]
    for i, p in enumerate(mats):
        if p.shape != (d, d):
            raise ProjectorError(f"projector {i} has shape {p.shape}, expected {(d, d)}")
    for i, p in enumerate(mats):
        if np.max(np.abs(p - p.conj().T)) > PROJ_TOL:
            raise ProjectorError(f"projector {i} is not Hermitian")
        if np.max(np.abs(p @ p - p)) > PROJ_TOL:
            raise ProjectorError(f"projector {i} is not idempotent")
    for i, j in itertools.combinations(range(len(mats)), 2):
        if np.max(np.abs(mats[i] @ mats[j])) > PROJ_TOL:
            raise ProjectorError(f"projectors {i} and {j} are not orthogonal")
    if np.max(np.abs(sum(mats) - np.eye(d))) > PROJ_TOL:
        raise ProjectorError("projectors are not complete: they do not sum to the identity")
    if len(mats) != d:
        raise ProjectorError(f"expected {d} rank-1 projectors, got {len(mats)}")
    vectors = []
    for p in mats:
        weight, v = rank_one_decompose(p)
        vectors.append(v)
    if outcome_labels is None:
        outcome_labels = [str(i) for i in range(d)]
    return ProjectorSet(label, _freeze(mats), tuple(outcome_labels), _freeze(vectors))


def setting_from_vectors(vectors, label: str = "explicit", outcome_labels: Sequence[str] | None = None) -> ProjectorSet:
    """Setting whose outcome ``a`` projects onto ``vectors[a]``; the vectors must be orthonormal."""
    vecs = np.array([np.asarray(v, dtype=complex).ravel() for v in vectors])
    d = vecs.shape[1]
    if vecs.shape[0] != d:
        raise ProjectorError(f"expected {d} basis vectors, got {vecs.shape[0]}")
    err = float(np.max(np.abs(vecs.conj() @ vecs.T - np.eye(d))))
    if err > PROJ_TOL:
        raise ProjectorError(f"basis vectors are not orthonormal (max Gram deviation {err:.3g})")
    vecs = np.array([fix_phase(v) for v in vecs])
    if outcome_labels is None:
        outcome_labels = [str(i) for i in range(d)]
    return ProjectorSet(label, _freeze(np.outer(v, v.conj()) for v in vecs), tuple(outcome_labels), _freeze(vecs))


@dataclass(frozen=True)
class Protocol:
    settings: tuple[ProjectorSet, ...]

    def __post_init__(self):
        if len(self.settings) < 2:
            raise ProjectorError("a steering protocol needs at least two settings")
        dims = {s.dim for s in self.settings}
        if len(dims) != 1:
            raise ProjectorError(f"settings act on different Alice dimensions {sorted(dims)}")

    @property
    def k(self) -> int:
        return len(self.settings)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.settings)

    def permuted(self, order: Sequence[int]) -> Protocol:
        return Protocol(tuple(self.settings[i] for i in order))


def parse_shorthand(text: str, alice_dims: Sequence[int]) -> Protocol:
    """``"zz,yx"`` gives one label per Alice site in each comma-separated setting.

    Multi-letter labels (``computational``, ``fourier``) are separated with
    ``+`` inside a setting, e.g. ``"fourier+computational,computational+fourier"``.
    """
    settings = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise ProjectorError(f"empty setting in protocol shorthand {text!r}")
        if "+" in chunk or chunk in ("computational", "fourier"):
            labels = chunk.split("+")
        else:
            labels = list(chunk)
        if len(labels) == 1 and len(alice_dims) > 1:
            labels = labels * len(alice_dims)
        settings.append(basis_setting(labels, alice_dims))
    return Protocol(tuple(settings))


def _matrix_from_json(raw, where: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise ProjectorError(f"{where}: expected a matrix as a list of rows")
    rows = []
    for r, row in enumerate(raw):
        if not isinstance(row, list):
            raise ProjectorError(f"{where}[{r}]: expected a row")
        vals = []
        for c, z in enumerate(row):
            if isinstance(z, (int, float)):
                vals.append(complex(z))
            elif isinstance(z, list) and len(z) == 2:
                vals.append(complex(z[0], z[1]))
            else:
                raise ProjectorError(f"{where}[{r}][{c}]: expected a number or [re, im]")
        rows.append(vals)
    return np.array(rows, dtype=complex)


def protocol_from_dict(doc, alice_dims: Sequence[int]) -> Protocol:
    if not isinstance(doc, dict) or not isinstance(doc.get("settings"), list):
        raise ProjectorError("protocol document needs a 'settings' list")
    settings = []
    for i, entry in enumerate(doc["settings"]):
        if not isinstance(entry, dict):
            raise ProjectorError(f"settings[{i}]: expected an object")
        if "basis" in entry:
            labels = entry["basis"]
            if isinstance(labels, str):
                labels = list(labels)
            settings.append(basis_setting(labels, alice_dims))
        elif "projectors" in entry:
            mats = [_matrix_from_json(m, f"settings[{i}].projectors[{j}]") for j, m in enumerate(entry["projectors"])]
            settings.append(explicit_setting(mats, label=entry.get("label", f"setting{i}")))
        else:
            raise ProjectorError(f"settings[{i}]: needs 'basis' or 'projectors'")
    return Protocol(tuple(settings))


def protocol_to_dict(protocol: Protocol) -> dict:
    return {
        "settings": [
            {
                "label": s.label,
                "projectors": [[[[float(z.real), float(z.imag)] for z in row] for row in p] for p in s.projectors],
            }
            for s in protocol.settings
        ]
    }


def parse_protocol_file(data: bytes | str, alice_dims: Sequence[int]) -> Protocol:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ProjectorError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return protocol_from_dict(doc, alice_dims)
