"""Seeded generators of random states and protocols with pure conditional states.

Four strategies:

``product``
    |a>|b> with random Alice bases; every conditional state is |b>.
``entangled``
    Haar-random pure ket with random Alice bases.
``structured``
    sum_i s_i |u_i>|eta_i> with the eta_i either all fresh or drawn (with
    repetition) from a small pool of Bob kets. Further settings rotate a random subset of the
    first basis, so some rays repeat inside a setting and some are shared
    across settings.
``structured_mixture``
    Like ``structured`` but an ensemble of such kets whose amplitudes agree
    up to scale on every rotated block, which keeps each conditional state pure.
"""

from __future__ import annotations

import numpy as np

from .linalg import random_ket, random_unitary
from .measurements import Protocol, setting_from_vectors
from .states import StateSpec, mixed_state, pure_state

STRATEGIES = ("product", "entangled", "structured", "structured_mixture")


def _layout(rng: np.random.Generator):
    """Pick Alice/Bob dimensions and interleave the sites at random."""
    if rng.random() < 0.15:
        alice_dims, bob_dims = [3], [int(rng.choice([2, 3]))]
    else:
        alice_dims = [2] * int(rng.integers(1, 3))
        bob_dims = [2] * int(rng.integers(1, 3))
    n = len(alice_dims) + len(bob_dims)
    alice_pos = sorted(rng.choice(n, size=len(alice_dims), replace=False).tolist())
    bob_pos = [s for s in range(n) if s not in alice_pos]
    dims = [0] * n
    for p, d in zip(alice_pos, alice_dims):
        dims[p] = d
    for p, d in zip(bob_pos, bob_dims):
        dims[p] = d
    return dims, alice_pos, int(np.prod(alice_dims)), int(np.prod(bob_dims))


def _to_site_order(ket_ab: np.ndarray, dims, alice_pos) -> np.ndarray:
    """Reorder an Alice-first ket into the interleaved site layout."""
    n = len(dims)
    bob_pos = [s for s in range(n) if s not in alice_pos]
    order = list(alice_pos) + bob_pos  # alice-first factor j lives at site order[j]
    t = ket_ab.reshape([dims[s] for s in order])
    inv = np.argsort(order)
    return t.transpose(inv).reshape(-1)


def _settings_from_bases(bases, rng) -> Protocol:
    settings = []
    for l, basis in enumerate(bases):
        perm = rng.permutation(basis.shape[1])
        settings.append(setting_from_vectors([basis[:, j] for j in perm], label=f"n{l + 1}"))
    return Protocol(tuple(settings))


def _rotated_bases(u1: np.ndarray, k: int, rng):
    """Setting 1 is ``u1``; each further setting mixes a random subset of its columns."""
    d = u1.shape[1]
    bases, blocks = [u1], []
    for _ in range(k - 1):
        # subsets of size 0 or 1 reproduce setting 1 up to relabeling
        size = int(rng.integers(0, 2)) if rng.random() < 0.3 else int(rng.integers(2, d + 1))
        subset = sorted(rng.choice(d, size=size, replace=False).tolist())
        u = u1.copy()
        if size:
            v = random_unitary(size, rng)
            u[:, subset] = u1[:, subset] @ v
            blocks.append(subset)
        bases.append(u)
    return bases, blocks


def random_instance(rng: np.random.Generator, strategy: str | None = None, k: int | None = None):
    """Return ``(StateSpec, Protocol, strategy)``."""
    if strategy is None:
        strategy = str(rng.choice(STRATEGIES))
    if k is None:
        k = int(rng.choice([2, 2, 3]))
    dims, alice_pos, dA, dB = _layout(rng)

    if strategy in ("product", "entangled"):
        if strategy == "product":
            ket_ab = np.kron(random_ket(dA, rng), random_ket(dB, rng))
        else:
            ket_ab = random_ket(dA * dB, rng)
        bases = [random_unitary(dA, rng) for _ in range(k)]
        spec = pure_state(dims, _to_site_order(ket_ab, dims, alice_pos), alice_pos)
        return spec, _settings_from_bases(bases, rng), strategy

    pool = [random_ket(dB, rng) for _ in range(int(rng.integers(1, min(4, dA) + 1)))]
    if rng.random() < 0.3:
        eta = [random_ket(dB, rng) for _ in range(dA)]  # no repeated rays inside a setting
    else:
        eta = [pool[int(rng.integers(len(pool)))] for _ in range(dA)]
    u1 = random_unitary(dA, rng)
    bases, blocks = _rotated_bases(u1, k, rng)

    def amplitudes(shared=None):
        s = (0.3 + rng.random(dA)) * np.exp(2j * np.pi * rng.random(dA))
        if shared is not None:
            scale, ref, idx = shared
            s[idx] = scale * ref[idx]
        return s

    def build(s):
        ket = sum(s[i] * np.kron(u1[:, i], eta[i]) for i in range(dA))
        return ket / np.linalg.norm(ket)

    if strategy == "structured":
        spec = pure_state(dims, _to_site_order(build(amplitudes()), dims, alice_pos), alice_pos)
        return spec, _settings_from_bases(bases, rng), strategy

    if strategy != "structured_mixture":
        raise ValueError(f"unknown strategy {strategy!r}")
    rotated = sorted({i for b in blocks for i in b})
    ref = amplitudes()
    n_terms = int(rng.integers(2, 4))
    weights = rng.random(n_terms) + 0.2
    weights /= weights.sum()
    terms = []
    for w in weights:
        s = amplitudes((0.5 + rng.random(), ref, rotated))
        terms.append((float(w), _to_site_order(build(s), dims, alice_pos)))
    weights_sum = sum(w for w, _ in terms)
    terms = [(w / weights_sum, ket) for w, ket in terms]
    return mixed_state(dims, terms, alice_pos), _settings_from_bases(bases, rng), strategy
