"""Three-setting protocols and qutrits.

With k settings the quantum side of the trace identity is k; the classical
side is 1 plus the weight of every class counted once per extra setting it
reappears in, so 0 <= delta_k <= k - 1.
"""

from __future__ import annotations

from steerage import analyze, builtin, parse_shorthand

for name, shorthand in [("psi_prime", "zz,xx"), ("psi_prime", "zz,xx,yy"), ("si_product_example", "zz,xx,yy")]:
    spec = builtin(name)
    r = analyze(spec, None, parse_shorthand(shorthand, spec.shape.alice_dims))
    print(f"{name:<20} {{{shorthand}}}  {r.verdict.value:<16} delta_k = {r.delta_k:.4f}  {r.paradox_string}")

for d in (2, 3, 4):
    spec = builtin("max_entangled", [d])
    r = analyze(spec, None, parse_shorthand("computational,fourier", [d]))
    print(f"max entangled d={d}: {r.verdict.value}, {len(r.classification.classes)} classes, {r.paradox_string}")
