"""Compare the pure-state reduction with the LP feasibility oracle on random instances.

The reduction only needs class bookkeeping; the oracle solves the full
local-hidden-state feasibility problem with the class projectors as hidden
states. They should never disagree.
"""

from __future__ import annotations

import sys
from collections import Counter

import numpy as np

from steerage.assemblage import compute_assemblage
from steerage.oracle import brute_force_lhs_oracle
from steerage.paradox import LHSModel, case_label, check_premise, classify, lhs_reduce, measurement_requirement
from steerage.sampling import random_instance

n = int(sys.argv[1]) if len(sys.argv) > 1 else 500
rng = np.random.default_rng(int(sys.argv[2]) if len(sys.argv) > 2 else 0)

tally, disagreements, requirement_gaps = Counter(), 0, 0
for _ in range(n):
    spec, protocol, strategy = random_instance(rng)
    asm = compute_assemblage(spec, None, protocol)
    cls = classify(asm, check_premise(asm))
    feasible = isinstance(lhs_reduce(asm, cls), LHSModel)
    disagreements += brute_force_lhs_oracle(asm, cls).feasible != feasible
    requirement_gaps += feasible == measurement_requirement(cls)
    tally[(strategy, "no contradiction" if feasible else case_label(cls).value)] += 1

for (strategy, outcome), count in sorted(tally.items()):
    print(f"{strategy:<20} {outcome:<18} {count}")
print(f"oracle disagreements: {disagreements} / {n}")
print(f"feasible-iff-requirement-fails violations: {requirement_gaps} / {n}")
