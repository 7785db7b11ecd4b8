"""Run the five worked examples and print the per-setting weight tables.

The canonical delta takes each shared class's weight from the first setting
it appears in; the table shows every setting's weight so the alternative
choices are visible (the W state is the instructive one: 1/3 in zz, 1/6 in xx).
"""

from __future__ import annotations

from steerage.catalog import EXAMPLES
from steerage.paradox import format_value

for name, ex in EXAMPLES.items():
    report = ex.run()
    print(f"== {name}: {ex.builtin} under {{{ex.protocol}}}")
    print(f"   {report.verdict.value}, {report.case_label.value}, {report.paradox_string}")
    labels = report.setting_labels
    for c in report.classification.classes:
        weights = "  ".join(
            f"{labels[l]}={format_value(c.per_setting_weight[l])}" if l in c.per_setting_weight else f"{labels[l]}=-"
            for l in range(report.k)
        )
        print(f"   class {c.index}: {weights}")
    print()
