"""Small dense complex-matrix kernel.

Everything here works on plain ``numpy`` arrays. Basis ordering follows the
usual ket-string convention: site 0 is the most significant digit of the
computational-basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable

import numpy as np

ZERO_TRACE = 1e-12
PHASE_CUTOFF = 1e-10


class ShapeError(ValueError):
    """Raised when a matrix does not match its declared subsystem layout."""


class InvalidStateError(ValueError):
    """Raised for operators that are not Hermitian positive semidefinite."""


@dataclass(frozen=True)
class SubsystemShape:
    """Local dimensions of every site plus the sites held by Alice."""

    local_dims: tuple[int, ...]
    alice_sites: frozenset[int]

    def __init__(self, local_dims: Iterable[int], alice_sites: Iterable[int]):
        dims = tuple(int(d) for d in local_dims)
        alice = frozenset(int(s) for s in alice_sites)
        if not dims:
            raise ShapeError("local_dims must not be empty")
        if any(d < 2 for d in dims):
            raise ShapeError(f"every local dimension must be >= 2, got {dims}")
        if not alice:
            raise ShapeError("alice_sites must be nonempty")
        if not alice < frozenset(range(len(dims))):
            raise ShapeError(
                f"alice_sites {sorted(alice)} must be a proper subset of 0..{len(dims) - 1}"
            )
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "alice_sites", alice)

    @classmethod
    def unpartitioned(cls, local_dims: Iterable[int]) -> SubsystemShape:
        """Layout with no Alice/Bob split yet (e.g. a one-site state document)."""
        dims = tuple(int(d) for d in local_dims)
        if not dims or any(d < 2 for d in dims):
            raise ShapeError(f"every local dimension must be >= 2, got {dims}")
        self = object.__new__(cls)
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "alice_sites", frozenset())
        return self

    @property
    def is_bipartite(self) -> bool:
        return bool(self.alice_sites)

    @property
    def n_sites(self) -> int:
        return len(self.local_dims)

    @property
    def dim(self) -> int:
        return prod(self.local_dims)

    @property
    def alice(self) -> tuple[int, ...]:
        return tuple(sorted(self.alice_sites))

    @property
    def bob(self) -> tuple[int, ...]:
        return tuple(s for s in range(self.n_sites) if s not in self.alice_sites)

    @property
    def alice_dims(self) -> tuple[int, ...]:
        return tuple(self.local_dims[s] for s in self.alice)

    @property
    def bob_dims(self) -> tuple[int, ...]:
        return tuple(self.local_dims[s] for s in self.bob)

    @property
    def alice_dim(self) -> int:
        return prod(self.alice_dims)

    @property
    def bob_dim(self) -> int:
        return prod(self.bob_dims)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with ``a`` as the slow index."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(rho, local_dims: Iterable[int], traced_sites: Iterable[int]) -> np.ndarray:
    """Trace out ``traced_sites`` and return the operator on the remaining sites.

    ``local_dims`` may also be a :class:`SubsystemShape`, in which case its
    ``local_dims`` are used. Remaining sites keep their relative order.
    """
    if isinstance(local_dims, SubsystemShape):
        local_dims = local_dims.local_dims
    dims = tuple(int(d) for d in local_dims)
    rho = np.asarray(rho)
    n = len(dims)
    total = prod(dims)
    if rho.shape != (total, total):
        raise ShapeError(f"matrix of shape {rho.shape} does not match dims {dims}")
    traced = sorted(set(int(s) for s in traced_sites))
    if any(s < 0 or s >= n for s in traced):
        raise ShapeError(f"traced sites {traced} out of range for {n} sites")
    kept = [s for s in range(n) if s not in traced]

    t = rho.reshape(dims + dims)
    # bring kept row indices, kept column indices, then the traced pairs
    perm = kept + [n + s for s in kept] + traced + [n + s for s in traced]
    t = t.transpose(perm)
    d_kept = prod(dims[s] for s in kept)
    d_traced = prod(dims[s] for s in traced)
    t = t.reshape(d_kept, d_kept, d_traced, d_traced)
    return np.trace(t, axis1=2, axis2=3)


def fix_phase(ket) -> np.ndarray:
    """Rotate the global phase so the first non-negligible component is real positive."""
    ket = np.asarray(ket, dtype=complex)
    idx = np.flatnonzero(np.abs(ket) > PHASE_CUTOFF)
    if idx.size == 0:
        return ket.copy()
    lead = ket[idx[0]]
    return ket * (abs(lead) / lead)


def check_hermitian_psd(rho, tol: float = 1e-10) -> np.ndarray:
    """Return the eigenvalues of ``rho`` after validating Hermiticity and positivity."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {rho.shape}")
    herm_err = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
    if herm_err > tol:
        raise InvalidStateError(f"matrix is not Hermitian (max deviation {herm_err:.3g})")
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if evals.size and evals[0] < -tol:
        raise InvalidStateError(f"matrix has negative eigenvalue {evals[0]:.3g}")
    return evals


def rank_one_decompose(rho, tol: float = 1e-9) -> tuple[float, np.ndarray] | None:
    """Split a rank-1 PSD operator into ``(trace, unit ket)``.

    Returns ``None`` when the trace is below the zero threshold or when the
    largest eigenvalue carries less than ``1 - tol`` of the trace. The ket is
    phase-fixed with :func:`fix_phase`.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {rho.shape}")
    return rank_one_decompose_many(rho[None], tol)[0]


def rank_one_decompose_many(stack, tol: float = 1e-9) -> list[tuple[float, np.ndarray] | None]:
    """:func:`rank_one_decompose` over a stack of shape ``(n, d, d)`` with one batched eigensolve."""
    stack = np.asarray(stack, dtype=complex)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ShapeError(f"expected a stack of square matrices, got shape {stack.shape}")
    if stack.shape[0] == 0:
        return []
    adj = stack.conj().swapaxes(-1, -2)
    herm_err = np.max(np.abs(stack - adj), axis=(1, 2))
    if np.any(herm_err > tol):
        i = int(np.argmax(herm_err))
        raise InvalidStateError(f"matrix {i} is not Hermitian (max deviation {herm_err[i]:.3g})")
    h = (stack + adj) / 2
    evals, evecs = np.linalg.eigh(h)
    if np.any(evals[:, 0] < -tol):
        i = int(np.argmin(evals[:, 0]))
        raise InvalidStateError(f"matrix {i} has negative eigenvalue {evals[i, 0]:.3g}")
    traces = np.real(np.einsum("nii->n", h))
    out: list[tuple[float, np.ndarray] | None] = []
    for tr, top, vec in zip(traces, evals[:, -1], evecs[:, :, -1]):
        if tr < ZERO_TRACE or top < (1.0 - tol) * tr:
            out.append(None)
        else:
            out.append((float(tr), fix_phase(vec)))
    return out


def projector_fidelity(ket_a, ket_b) -> float:
    """|<a|b>|^2 for unit kets; blind to global phase."""
    a = np.asarray(ket_a, dtype=complex).ravel()
    b = np.asarray(ket_b, dtype=complex).ravel()
    if a.shape != b.shape:
        raise ShapeError(f"kets of dimension {a.size} and {b.size} cannot be compared")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def purity_ratio(rho) -> float:
    """lambda_max / trace; 0 for a vanishing operator."""
    h = np.asarray(rho, dtype=complex)
    h = (h + h.conj().T) / 2
    trace = float(np.real(np.trace(h)))
    if trace < ZERO_TRACE:
        return 0.0
    return float(np.linalg.eigvalsh(h)[-1] / trace)


def permute_sites(ket, local_dims: Iterable[int], order: Iterable[int]) -> np.ndarray:
    """Reorder the tensor factors of a ket: new site ``i`` is old site ``order[i]``."""
    dims = tuple(local_dims)
    order = tuple(order)
    t = np.asarray(ket).reshape(dims).transpose(order)
    return t.reshape(-1)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with the usual phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
