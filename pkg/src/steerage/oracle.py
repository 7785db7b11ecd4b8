"""Independent LHS feasibility check by linear programming.

The unknowns are the joint weights ``x[l, a, xi] = p(a|l, xi) p_xi`` and the
hidden weights ``p_xi``, all nonnegative, with the hidden states fixed to the
classes' projectors. Equality constraints:

* ``sum_xi x[l, a, xi] rho_xi = rho~_a^l`` (real and imaginary parts),
* ``sum_a x[l, a, xi] = p_xi`` for every setting,
* ``sum_xi p_xi = 1`` and ``sum_xi p_xi rho_xi = rho_B``.

The LP has a zero objective; the solver's feasibility status is the answer,
and for a feasible point the largest equality violation is reported. Nothing
here uses the pure-state reasoning of :func:`steerage.paradox.lhs_reduce`;
outcomes are free to draw on any hidden state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog

from .assemblage import Assemblage
from .paradox import Classification

MAX_CLASSES = 12
MAX_OUTCOMES = 16
FEASIBILITY_CUTOFF = 1e-7


class OracleScaleError(ValueError):
    """Instance exceeds the desk-scale limits of the oracle."""


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    residual: float  # max equality violation of the returned point; inf if infeasible


@lru_cache(maxsize=None)
def _upper(d: int):
    return np.triu_indices(d, 1)


def _hermitian_rows(m: np.ndarray) -> np.ndarray:
    """Independent real coordinates of a Hermitian matrix (diag, Re/Im upper)."""
    iu = _upper(m.shape[0])
    return np.concatenate([np.real(np.diag(m)), m[iu].real, m[iu].imag])


def brute_force_lhs_oracle(asm: Assemblage, cls: Classification) -> OracleResult:
    n_cls = len(cls.classes)
    n_out = asm.n_outcomes
    k = asm.k
    if n_cls > MAX_CLASSES or n_out > MAX_OUTCOMES:
        raise OracleScaleError(
            f"{n_cls} classes / {n_out} outcomes exceed the oracle limits "
            f"({MAX_CLASSES} / {MAX_OUTCOMES})"
        )
    if n_cls == 0:
        return OracleResult(False, float("inf"))

    proj_rows = np.array([_hermitian_rows(np.outer(c.ket, c.ket.conj())) for c in cls.classes]).T
    n_coord = proj_rows.shape[0]
    n_pairs = k * n_out
    # variables: x[l, a, c] flattened as (l * n_out + a) * n_cls + c, then p[c]
    assemblage_rows = np.hstack([np.kron(np.eye(n_pairs), proj_rows), np.zeros((n_pairs * n_coord, n_cls))])
    assemblage_rhs = np.concatenate([_hermitian_rows(asm.entries[l, a]) for l in range(k) for a in range(n_out)])
    # sum_a x[l, a, c] - p[c] = 0 for every (l, c)
    marginal_rows = np.hstack(
        [np.kron(np.eye(k), np.kron(np.ones((1, n_out)), np.eye(n_cls))), -np.kron(np.ones((k, 1)), np.eye(n_cls))]
    )
    norm_row = np.concatenate([np.zeros(n_pairs * n_cls), np.ones(n_cls)])[None, :]
    rho_b_rows = np.hstack([np.zeros((n_coord, n_pairs * n_cls)), proj_rows])

    a_eq = np.vstack([assemblage_rows, marginal_rows, norm_row, rho_b_rows])
    b_eq = np.concatenate([assemblage_rhs, np.zeros(k * n_cls), [1.0], _hermitian_rows(asm.rho_B)])
    n_var = a_eq.shape[1]
    # presolve buys nothing on these small dense systems and dominates the run time
    res = linprog(
        np.zeros(n_var), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs", options={"presolve": False}
    )
    if res.status == 2:
        return OracleResult(False, float("inf"))
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    resid = float(np.max(np.abs(a_eq @ res.x - b_eq)))
    return OracleResult(resid <= FEASIBILITY_CUTOFF, resid)
