from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import golden
from steerage.assemblage import (
    AssemblageError,
    compute_assemblage,
    no_signalling_residual,
    normalized_view,
    validate_assemblage,
)
from steerage.linalg import InvalidStateError, ShapeError, random_ket
from steerage.measurements import parse_shorthand
from steerage.sampling import random_instance
from steerage.states import (
    builtin,
    cluster_mix_theta,
    mixed_state,
    pure_state,
    to_density,
    two_qubit_theta,
    w_state,
)


def run(spec, shorthand, **kw):
    return compute_assemblage(spec, None, parse_shorthand(shorthand, spec.shape.alice_dims), **kw)


@pytest.mark.parametrize("theta", [np.pi / 8, np.pi / 3, 1.2])
def test_two_qubit_matches_closed_form(theta):
    asm = run(two_qubit_theta(theta), "z,x")
    np.testing.assert_allclose(asm.entries, golden.two_qubit(theta), atol=1e-10)


@pytest.mark.parametrize("theta", [np.pi / 6, np.pi / 5])
def test_cluster_mixture_matches_closed_form(theta):
    asm = run(cluster_mix_theta(theta), "zz,yx")
    np.testing.assert_allclose(asm.entries, golden.cluster_mix(theta), atol=1e-10)


def test_w_state_has_one_zero_outcome():
    asm = run(w_state(), "zz,xx")
    np.testing.assert_allclose(asm.entries, golden.w_state(), atol=1e-10)
    tr = asm.traces()
    assert int(np.sum(tr > 1e-12)) == 7
    assert tr[0, 3] < 1e-12


def test_normalized_view_examples():
    view = normalized_view(run(two_qubit_theta(np.pi / 4), "z,x"))
    np.testing.assert_allclose([e.probability for e in view], [0.5] * 4, atol=1e-12)
    s = 1 / np.sqrt(2)
    for e, v in zip(view, ([1, 0], [0, 1], [s, s], [s, -s])):
        np.testing.assert_allclose(e.state, np.outer(v, v), atol=1e-12)

    w = [e for e in normalized_view(run(w_state(), "zz,xx")) if e.setting == 0]
    np.testing.assert_allclose([e.probability for e in w], [1 / 3, 1 / 3, 1 / 3, 0], atol=1e-12)
    assert w[3].state is None

    xx = [e for e in normalized_view(run(builtin("si_product_example"), "zz,xx")) if e.setting == 1]
    np.testing.assert_allclose([e.probability for e in xx], [1, 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(xx[0].state, np.diag([1, 0]), atol=1e-12)


def test_dense_route_agrees():
    for spec, sh in [
        (two_qubit_theta(0.3), "z,x"),
        (cluster_mix_theta(0.9), "zz,yx"),
        (w_state(), "zz,xx"),
        (builtin("psi_prime").with_alice([0, 2]), "xz,yy"),
    ]:
        fast = run(spec, sh)
        dense = run(spec, sh, dense=True)
        np.testing.assert_allclose(fast.entries, dense.entries, atol=1e-12)
        np.testing.assert_allclose(fast.rho_B, dense.rho_B, atol=1e-12)


def test_density_matrix_input_matches_ensemble():
    spec = cluster_mix_theta(0.5)
    protocol = parse_shorthand("zz,yx", [2, 2])
    from_spec = compute_assemblage(spec, None, protocol)
    from_rho = compute_assemblage(to_density(spec), spec.shape, protocol)
    np.testing.assert_allclose(from_spec.entries, from_rho.entries, atol=1e-12)


def test_entries_are_read_only():
    asm = run(w_state(), "zz,xx")
    with pytest.raises(ValueError):
        asm.entries[0, 0, 0, 0] = 1


def test_input_errors():
    spec = w_state()
    with pytest.raises(ShapeError):
        compute_assemblage(to_density(spec), None, parse_shorthand("zz,xx", [2, 2]))
    with pytest.raises(ShapeError):
        compute_assemblage(spec, None, parse_shorthand("z,x", [2]))
    with pytest.raises(InvalidStateError):
        compute_assemblage(2 * to_density(spec), spec.shape, parse_shorthand("zz,xx", [2, 2]))


def test_validation_reports_location():
    asm = run(w_state(), "zz,xx")
    broken = asm.entries.copy()
    broken[1, 2] = broken[1, 2] + 0.01 * np.eye(2)
    bad = type(asm)(broken, asm.rho_B, asm.shape, asm.setting_labels, asm.outcome_labels)
    with pytest.raises(AssemblageError) as err:
        validate_assemblage(bad)
    assert err.value.setting == 1 and err.value.residual > 1e-3


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_no_signalling_and_positivity(seed):
    rng = np.random.default_rng(seed)
    spec, protocol, _ = random_instance(rng)
    asm = compute_assemblage(spec, None, protocol)
    assert no_signalling_residual(asm) < 1e-9
    for l, a in asm.keys():
        assert np.linalg.eigvalsh(asm.entries[l, a])[0] > -1e-10
    np.testing.assert_allclose(asm.traces().sum(axis=1), 1.0, atol=1e-9)


def test_linearity_in_the_state():
    rng = np.random.default_rng(5)
    kets = [random_ket(8, rng) for _ in range(3)]
    weights = [0.2, 0.5, 0.3]
    protocol = parse_shorthand("zx,yz", [2, 2])
    mix = compute_assemblage(mixed_state([2, 2, 2], zip(weights, kets), [0, 1]), None, protocol)
    parts = sum(w * compute_assemblage(pure_state([2, 2, 2], k, [0, 1]), None, protocol).entries for w, k in zip(weights, kets))
    np.testing.assert_allclose(mix.entries, parts, atol=1e-10)


def test_product_state_conditionals_proportional_to_marginal():
    rng = np.random.default_rng(9)
    for _ in range(20):
        a, b = random_ket(4, rng), random_ket(2, rng)
        spec = pure_state([2, 2, 2], np.kron(a, b), [0, 1])
        asm = run(spec, "xy,zz")
        for l, a_ in asm.keys():
            tr = asm.traces()[l, a_]
            if tr > 1e-12:
                np.testing.assert_allclose(asm.entries[l, a_] / tr, asm.rho_B, atol=1e-10)
