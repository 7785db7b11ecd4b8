"""Bob's unnormalized conditional states for a measurement protocol."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import (
    ZERO_TRACE,
    InvalidStateError,
    ShapeError,
    SubsystemShape,
    check_hermitian_psd,
    partial_trace,
)
from .measurements import Protocol
from .states import StateSpec, to_density

PSD_TOL = 1e-10
SIGNALLING_TOL = 1e-9
EIG_CUTOFF = 1e-14


class AssemblageError(RuntimeError):
    """Computed assemblage failed a physical-consistency check."""

    def __init__(self, message: str, setting: int | None = None, outcome: int | None = None, residual: float = 0.0):
        super().__init__(message)
        self.setting = setting
        self.outcome = outcome
        self.residual = residual


@dataclass(frozen=True)
class Assemblage:
    """``entries[l, a]`` is the conditional state for setting ``l``, outcome ``a``."""

    entries: np.ndarray
    rho_B: np.ndarray
    shape: SubsystemShape
    setting_labels: tuple[str, ...]
    outcome_labels: tuple[tuple[str, ...], ...]

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def n_outcomes(self) -> int:
        return self.entries.shape[1]

    def __getitem__(self, key: tuple[int, int]) -> np.ndarray:
        return self.entries[key]

    def traces(self) -> np.ndarray:
        return np.real(np.einsum("laii->la", self.entries))

    def keys(self):
        for l in range(self.k):
            for a in range(self.n_outcomes):
                yield l, a


def _ensemble_from_density(rho: np.ndarray) -> list[tuple[float, np.ndarray]]:
    h = (rho + rho.conj().T) / 2
    evals, evecs = np.linalg.eigh(h)
    return [(float(w), evecs[:, i]) for i, w in enumerate(evals) if w > EIG_CUTOFF]


def _alice_first(shape: SubsystemShape) -> tuple[int, ...]:
    return shape.alice + shape.bob


def _split_ket(ket: np.ndarray, shape: SubsystemShape) -> np.ndarray:
    """Reshape a ket into a (d_Alice, d_Bob) amplitude matrix."""
    t = ket.reshape(shape.local_dims).transpose(_alice_first(shape))
    return t.reshape(shape.alice_dim, shape.bob_dim)


def _ensemble_route(ensemble, shape: SubsystemShape, protocol: Protocol) -> np.ndarray:
    dB = shape.bob_dim
    out = np.zeros((protocol.k, len(protocol.settings[0]), dB, dB), dtype=complex)
    mats = [(w, _split_ket(np.asarray(ket, dtype=complex), shape)) for w, ket in ensemble]
    for l, setting in enumerate(protocol.settings):
        basis = np.array(setting.vectors)  # rows are Alice kets
        for w, m in mats:
            bob = basis.conj() @ m  # row a = (<phi_a| x 1)|psi>
            out[l] += w * np.einsum("ai,aj->aij", bob, bob.conj())
    return out


def _dense_route(rho: np.ndarray, shape: SubsystemShape, protocol: Protocol) -> np.ndarray:
    order = _alice_first(shape)
    dims = shape.local_dims
    n = len(dims)
    # reorder rho so Alice's sites come first
    t = rho.reshape(dims + dims).transpose(list(order) + [n + s for s in order])
    rho_ab = t.reshape(shape.dim, shape.dim)
    new_dims = tuple(dims[s] for s in order)
    alice_sites = range(len(shape.alice))
    dB = shape.bob_dim
    out = np.zeros((protocol.k, len(protocol.settings[0]), dB, dB), dtype=complex)
    eye_b = np.eye(dB)
    for l, setting in enumerate(protocol.settings):
        for a, p in enumerate(setting.projectors):
            out[l, a] = partial_trace(np.kron(p, eye_b) @ rho_ab, new_dims, alice_sites)
    return out


def compute_assemblage(
    state: StateSpec | np.ndarray,
    shape: SubsystemShape | None,
    protocol: Protocol,
    *,
    dense: bool = False,
) -> Assemblage:
    """Conditional states tr_A[(P_a (x) 1) rho_AB] for every setting and outcome.

    ``state`` is either a :class:`StateSpec` (its ensemble is projected
    directly) or a density matrix, which is first split into its eigen-ensemble.
    With ``dense=True`` the operator products are formed explicitly instead;
    that path exists to cross-check the default one.
    """
    if isinstance(state, StateSpec):
        shape = shape or state.shape
        ensemble = state.ensemble
        rho = None
    else:
        if shape is None:
            raise ShapeError("a bare density matrix needs an explicit SubsystemShape")
        rho = np.asarray(state, dtype=complex)
        check_hermitian_psd(rho, PSD_TOL)
        tr = float(np.real(np.trace(rho)))
        if abs(tr - 1.0) > PSD_TOL:
            raise InvalidStateError(f"density matrix has trace {tr:.12g}, expected 1")
        ensemble = None
    if not shape.is_bipartite:
        raise ShapeError("the state has no Alice/Bob partition; set alice_sites")
    if shape.dim != (state.shape.dim if isinstance(state, StateSpec) else rho.shape[0]):
        raise ShapeError("state dimension does not match the subsystem shape")
    if protocol.settings[0].dim != shape.alice_dim:
        raise ShapeError(
            f"protocol acts on dimension {protocol.settings[0].dim}, Alice holds dimension {shape.alice_dim}"
        )

    if dense:
        if rho is None:
            rho = to_density(state)
        entries = _dense_route(rho, shape, protocol)
    else:
        if ensemble is None:
            ensemble = _ensemble_from_density(rho)
        entries = _ensemble_route(ensemble, shape, protocol)

    entries = (entries + entries.conj().swapaxes(-1, -2)) / 2
    if rho is None:
        rho_B = sum(w * np.outer(b, b.conj()) for w, b in _bob_marginal_terms(ensemble, shape))
    else:
        rho_B = partial_trace(rho, shape.local_dims, shape.alice)
    rho_B = (rho_B + rho_B.conj().T) / 2

    asm = Assemblage(
        entries=entries,
        rho_B=rho_B,
        shape=shape,
        setting_labels=protocol.labels,
        outcome_labels=tuple(s.outcome_labels for s in protocol.settings),
    )
    entries.setflags(write=False)
    rho_B.setflags(write=False)
    validate_assemblage(asm)
    return asm


def _bob_marginal_terms(ensemble, shape: SubsystemShape):
    # rho_B = sum_alpha p_alpha M_alpha^T M_alpha^*, expanded over Alice's basis rows
    for w, ket in ensemble:
        m = _split_ket(np.asarray(ket, dtype=complex), shape)
        for row in m:
            yield w, row


def validate_assemblage(asm: Assemblage) -> None:
    """Positivity, no-signalling and normalization; raises :class:`AssemblageError`."""
    lowest = np.linalg.eigvalsh(asm.entries)[..., 0]
    if np.any(lowest < -PSD_TOL):
        l, a = np.unravel_index(int(np.argmin(lowest)), lowest.shape)
        lam = float(lowest[l, a])
        raise AssemblageError(f"conditional state ({l}, {a}) has eigenvalue {lam:.3g}", int(l), int(a), -lam)
    for l in range(asm.k):
        resid = float(np.max(np.abs(asm.entries[l].sum(axis=0) - asm.rho_B)))
        if resid > SIGNALLING_TOL:
            raise AssemblageError(
                f"setting {l}: conditional states sum to rho_B only up to {resid:.3g}", l, None, resid
            )
        total = float(asm.traces()[l].sum())
        if abs(total - 1.0) > SIGNALLING_TOL:
            raise AssemblageError(
                f"setting {l}: outcome probabilities sum to {total:.12g}", l, None, abs(total - 1.0)
            )


class NormalizedEntry(NamedTuple):
    setting: int
    outcome: int
    probability: float
    state: np.ndarray | None  # None flags a zero outcome


def normalized_view(asm: Assemblage) -> list[NormalizedEntry]:
    """Split each conditional state into p(a|n) = tr and the normalized state."""
    out = []
    traces = asm.traces()
    for l, a in asm.keys():
        p = float(traces[l, a])
        if p < ZERO_TRACE:
            out.append(NormalizedEntry(l, a, 0.0, None))
        else:
            out.append(NormalizedEntry(l, a, p, asm.entries[l, a] / p))
    return out


def no_signalling_residual(asm: Assemblage) -> float:
    return max(float(np.max(np.abs(asm.entries[l].sum(axis=0) - asm.rho_B))) for l in range(asm.k))
