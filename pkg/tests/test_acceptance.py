"""Acceptance criteria, one test each; a summary line per criterion is printed at the end of the run."""

from __future__ import annotations

import contextlib
import io
from math import pi

import numpy as np
import pytest

import golden
from conftest import ACCEPTANCE_LINES
from steerage.assemblage import compute_assemblage, no_signalling_residual, normalized_view
from steerage.cli import main
from steerage.linalg import partial_trace, random_unitary
from steerage.measurements import explicit_setting, parse_shorthand
from steerage.oracle import brute_force_lhs_oracle
from steerage.paradox import (
    AllPure,
    CaseLabel,
    LHSModel,
    Verdict,
    analyze,
    check_premise,
    classify,
    lhs_reduce,
    measurement_requirement,
)
from steerage.report import dumps
from steerage.sampling import random_instance
from steerage.states import builtin, to_density

N_RANDOM = 1000
SEED = 20240611


@contextlib.contextmanager
def criterion(n: int, title: str):
    try:
        yield
    except BaseException:
        ACCEPTANCE_LINES.append(f"criterion {n}: FAIL  {title}")
        raise
    ACCEPTANCE_LINES.append(f"criterion {n}: PASS  {title}")


def setup(name, params, shorthand):
    spec = builtin(name, params)
    protocol = parse_shorthand(shorthand, spec.shape.alice_dims)
    return spec, protocol, compute_assemblage(spec, None, protocol)


def member_sets(report):
    return [{(m.setting, m.outcome) for m in c.members} for c in report.classification.classes]


def test_criterion_1_two_qubit_family():
    with criterion(1, "two-qubit family under {z,x}: closed-form assemblage, Paradox, delta 0, Case1"):
        for theta in (pi / 8, pi / 6, pi / 4, pi / 3):
            spec, protocol, asm = setup("two_qubit_theta", [theta], "z,x")
            np.testing.assert_allclose(asm.entries, golden.two_qubit(theta), atol=1e-10)
            r = analyze(spec, None, protocol)
            assert r.verdict is Verdict.PARADOX and r.case_label is CaseLabel.CASE1
            assert abs(r.delta_k) <= 1e-10
            assert r.paradox_string == "2_Q = (1+0)_C"


def test_criterion_2_cluster_mixture():
    with criterion(2, "cluster mixture under {zz,yx}: eight states, four paired classes, Paradox, delta 0, Case2"):
        for theta in (pi / 6, pi / 4, 2 * pi / 5):
            spec, protocol, asm = setup("cluster_mix_theta", [theta], "zz,yx")
            np.testing.assert_allclose(asm.entries, golden.cluster_mix(theta), atol=1e-10)
            r = analyze(spec, None, protocol)
            assert member_sets(r) == [{(0, 0), (0, 1)}, {(0, 2), (0, 3)}, {(1, 0), (1, 3)}, {(1, 1), (1, 2)}]
            assert r.verdict is Verdict.PARADOX and r.case_label is CaseLabel.CASE2
            assert abs(r.delta_k) <= 1e-10


def test_criterion_3_psi_prime():
    with criterion(3, "psi_prime under {zz,xx}: shared lambda+/- classes, Paradox, delta 2/3 in (0,1), Case3"):
        spec, protocol, asm = setup("psi_prime", [], "zz,xx")
        np.testing.assert_allclose(asm.entries, golden.psi_prime(), atol=1e-10)
        r = analyze(spec, None, protocol)
        shared = [c for c in r.classification.classes if c.multiplicity == 2]
        s = 1 / np.sqrt(2)
        np.testing.assert_allclose([c.ket for c in shared], [[s, s], [s, -s]], atol=1e-10)
        assert [{(m.setting, m.outcome) for m in c.members} for c in shared] == [{(0, 1), (1, 0)}, {(0, 2), (1, 1)}]
        assert r.verdict is Verdict.PARADOX and r.case_label is CaseLabel.CASE3
        assert abs(r.delta_k - 2 / 3) <= 1e-10
        assert 0 < r.delta_k < 1


def test_criterion_4_w_state():
    with criterion(4, "W state under {zz,xx}: seven states plus one zero, Paradox, delta 1/3, Case4, 1/3 vs 1/6 exposed"):
        spec, protocol, asm = setup("w_state", [], "zz,xx")
        np.testing.assert_allclose(asm.entries, golden.w_state(), atol=1e-10)
        assert int(np.sum(asm.traces() > 1e-12)) == 7
        r = analyze(spec, None, protocol)
        assert r.classification.zero_outcomes == ((0, 3),)
        assert r.verdict is Verdict.PARADOX and r.case_label is CaseLabel.CASE4
        assert abs(r.delta_k - 1 / 3) <= 1e-10
        weights = r.certificate.derivation[0].per_setting_weight
        assert abs(weights[0] - 1 / 3) <= 1e-10 and abs(weights[1] - 1 / 6) <= 1e-10


def test_criterion_5_product_example():
    with criterion(5, "product example under {zz,xx}: NoContradiction, hidden weight 1, zz responses 1/4 each"):
        spec, protocol, asm = setup("si_product_example", [], "zz,xx")
        np.testing.assert_allclose(asm.entries, golden.si_product(), atol=1e-10)
        r = analyze(spec, None, protocol)
        assert r.verdict is Verdict.NO_CONTRADICTION
        assert r.lhs_model.weights == pytest.approx((1.0,), abs=1e-10)
        np.testing.assert_allclose(r.lhs_model.responses[0, :, 0], [0.25] * 4, atol=1e-10)
        assert r.paradox_string == "2_Q = 2_C"


def test_criterion_6_biconditional_and_oracle():
    with criterion(6, f"{N_RANDOM} seeded random instances: feasible iff requirement fails; oracle agrees on all"):
        rng = np.random.default_rng(SEED)
        strategies, agree = set(), 0
        for _ in range(N_RANDOM):
            spec, protocol, strategy = random_instance(rng)
            strategies.add(strategy)
            asm = compute_assemblage(spec, None, protocol)
            premise = check_premise(asm)
            assert isinstance(premise, AllPure)
            cls = classify(asm, premise)
            feasible = isinstance(lhs_reduce(asm, cls), LHSModel)
            assert feasible == (not measurement_requirement(cls, protocol.k))
            assert brute_force_lhs_oracle(asm, cls).feasible == feasible
            agree += 1
        assert agree == N_RANDOM and len(strategies) == 4


def test_criterion_7_three_settings():
    with criterion(7, "three settings: psi_prime keeps 0 <= delta < 2; product state gives NoContradiction with trace 3"):
        spec, protocol, _ = setup("psi_prime", [], "zz,xx,yy")
        r = analyze(spec, None, protocol)
        assert r.verdict is Verdict.PARADOX
        assert 0 <= r.delta_k < 2
        spec, protocol, _ = setup("si_product_example", [], "zz,xx,yy")
        r = analyze(spec, None, protocol)
        assert not r.requirement_met
        assert r.verdict is Verdict.NO_CONTRADICTION
        assert abs(r.classical_trace - 3) <= 1e-10
        assert r.paradox_string == "3_Q = 3_C"


def test_criterion_8_qutrits():
    with criterion(8, "two-qutrit maximally entangled state under {computational,fourier}: Paradox, delta 0"):
        spec, protocol, asm = setup("max_entangled", [3], "computational,fourier")
        assert isinstance(check_premise(asm), AllPure)
        np.testing.assert_allclose(asm.traces().sum(axis=1), 1.0, atol=1e-9)
        r = analyze(spec, None, protocol)
        assert r.requirement_met
        assert r.verdict is Verdict.PARADOX and abs(r.delta_k) <= 1e-10


def test_criterion_9_physicality():
    with criterion(9, "seeded random inputs: no-signalling, positivity, partial-trace identities, completeness"):
        rng = np.random.default_rng(SEED + 9)
        for _ in range(120):
            spec, protocol, _ = random_instance(rng)
            asm = compute_assemblage(spec, None, protocol)
            assert no_signalling_residual(asm) < 1e-9
            assert min(np.linalg.eigvalsh(asm.entries[l, a])[0] for l, a in asm.keys()) > -1e-10
            for l in range(asm.k):
                assert abs(sum(e.probability for e in normalized_view(asm) if e.setting == l) - 1) < 1e-9
            for s in protocol.settings:
                assert np.max(np.abs(sum(s.projectors) - np.eye(s.dim))) < 1e-10
            rho = to_density(spec)
            dims = spec.shape.local_dims
            assert abs(np.trace(partial_trace(rho, dims, [0])) - 1) < 1e-12
            if len(dims) > 2:
                one = partial_trace(rho, dims, [0, 1])
                two = partial_trace(partial_trace(rho, dims, [1]), dims[:1] + dims[2:], [0])
                assert np.max(np.abs(one - two)) < 1e-12
        for d in (2, 3, 4, 8):
            u = random_unitary(d, rng)
            s = explicit_setting([np.outer(u[:, j], u[:, j].conj()) for j in range(d)])
            assert np.max(np.abs(sum(s.projectors) - np.eye(d))) < 1e-10


def test_criterion_10_determinism():
    with criterion(10, "identical inputs and seed give byte-identical structured reports"):
        spec, protocol, _ = setup("w_state", [], "zz,xx")
        texts = {dumps(analyze(spec, None, protocol), seed=SEED).encode() for _ in range(3)}
        assert len(texts) == 1
        argv = ["analyze", "--builtin", "psi_prime", "--protocol", "zz,xx,yy", "--format", "structured", "--seed", "5"]
        outs = set()
        for _ in range(3):
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                assert main(argv) == 0
            outs.add(buf.getvalue().encode())
        assert len(outs) == 1
