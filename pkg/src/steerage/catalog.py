"""Named worked examples with their expected outcomes, used by ``steerage demo``."""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

from .measurements import Protocol, parse_shorthand
from .paradox import CaseLabel, ParadoxReport, Verdict, analyze
from .states import StateSpec, builtin

DELTA_TOL = 1e-10


@dataclass(frozen=True)
class WorkedExample:
    name: str
    builtin: str
    params: tuple[float, ...]
    protocol: str
    verdict: Verdict
    delta: float
    case: CaseLabel

    def state(self) -> StateSpec:
        return builtin(self.builtin, self.params)

    def build_protocol(self) -> Protocol:
        return parse_shorthand(self.protocol, self.state().shape.alice_dims)

    def run(self) -> ParadoxReport:
        return analyze(self.state(), None, self.build_protocol())

    def matches(self, report: ParadoxReport) -> bool:
        return (
            report.verdict is self.verdict
            and report.case_label is self.case
            and report.delta_k is not None
            and abs(report.delta_k - self.delta) <= DELTA_TOL
        )


EXAMPLES = {
    ex.name: ex
    for ex in (
        WorkedExample("example1", "two_qubit_theta", (pi / 3,), "z,x", Verdict.PARADOX, 0.0, CaseLabel.CASE1),
        WorkedExample("example2", "cluster_mix_theta", (pi / 5,), "zz,yx", Verdict.PARADOX, 0.0, CaseLabel.CASE2),
        WorkedExample("example3", "psi_prime", (), "zz,xx", Verdict.PARADOX, 2 / 3, CaseLabel.CASE3),
        WorkedExample("example4", "w_state", (), "zz,xx", Verdict.PARADOX, 1 / 3, CaseLabel.CASE4),
        WorkedExample(
            "example5", "si_product_example", (), "zz,xx", Verdict.NO_CONTRADICTION, 1.0, CaseLabel.NOT_APPLICABLE
        ),
    )
}
