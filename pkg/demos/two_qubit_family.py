"""Sweep cos(t)|00> + sin(t)|11> under the {z, x} protocol.

Every entangled member of the family gives four distinct pure conditional
states, so no hidden state can be shared between the two settings and the
classical side of the trace identity collapses to 1.
"""

from __future__ import annotations

import numpy as np

from steerage import analyze, builtin, compute_assemblage, normalized_view, parse_shorthand
from steerage.linalg import fix_phase

protocol = parse_shorthand("z,x", [2])

for theta in np.linspace(0.1, np.pi / 2 - 0.1, 7):
    spec = builtin("two_qubit_theta", [theta])
    report = analyze(spec, None, protocol)
    print(f"t = {theta:.3f}  {report.verdict.value:<16} {report.case_label.value}  {report.paradox_string}")

# the conditional states themselves at t = pi/4
asm = compute_assemblage(builtin("two_qubit_theta", [np.pi / 4]), None, protocol)
for entry in normalized_view(asm):
    ket = fix_phase(np.linalg.eigh(entry.state)[1][:, -1]).real
    print(f"setting {asm.setting_labels[entry.setting]}, outcome {entry.outcome}: p = {entry.probability:.3f}, ray {np.round(ket, 3)}")
