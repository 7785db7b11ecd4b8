from __future__ import annotations

import json

import numpy as np
import pytest

from steerage.linalg import random_unitary
from steerage.measurements import (
    ProjectorError,
    Protocol,
    basis_setting,
    explicit_setting,
    parse_protocol_file,
    parse_shorthand,
    protocol_to_dict,
    setting_from_vectors,
)

S = 1 / np.sqrt(2)


def assert_complete_orthonormal(setting):
    d = setting.dim
    np.testing.assert_allclose(sum(setting.projectors), np.eye(d), atol=1e-10)
    gram = np.array([[np.trace(p @ q).real for q in setting.projectors] for p in setting.projectors])
    np.testing.assert_allclose(gram, np.eye(d), atol=1e-10)


def test_z_setting():
    s = basis_setting(["z"])
    np.testing.assert_array_equal(s.projectors[0], np.diag([1, 0]))
    np.testing.assert_array_equal(s.projectors[1], np.diag([0, 1]))
    assert s.outcome_labels == ("0", "1")


def test_yx_first_projector_is_up_plus():
    s = basis_setting(["y", "x"])
    up = np.array([S, 1j * S])
    plus = np.array([S, S])
    v = np.kron(up, plus)
    np.testing.assert_allclose(s.projectors[0], np.outer(v, v.conj()), atol=1e-15)
    down, minus = np.array([S, -1j * S]), np.array([S, -S])
    for proj, (a, b) in zip(s.projectors, [(up, plus), (up, minus), (down, plus), (down, minus)]):
        v = np.kron(a, b)
        np.testing.assert_allclose(proj, np.outer(v, v.conj()), atol=1e-15)
    assert s.outcome_labels == ("00", "01", "10", "11")


def test_zz_matches_computational_projectors():
    s = basis_setting(["z", "z"])
    for i, p in enumerate(s.projectors):
        expected = np.zeros((4, 4))
        expected[i, i] = 1
        np.testing.assert_array_equal(p, expected)


def test_qudit_bases():
    c = basis_setting(["computational"], [3])
    np.testing.assert_allclose(sum(c.projectors), np.eye(3), atol=1e-15)
    f = basis_setting(["fourier"], [3])
    assert_complete_orthonormal(f)
    # every Fourier vector is unbiased with respect to the computational basis
    for v in f.vectors:
        np.testing.assert_allclose(np.abs(v) ** 2, np.full(3, 1 / 3), atol=1e-12)


@pytest.mark.parametrize("labels", [["z"], ["x"], ["y"], ["z", "x"], ["y", "y", "x"]])
def test_basis_settings_complete(labels):
    assert_complete_orthonormal(basis_setting(labels))


def test_basis_label_errors():
    with pytest.raises(ProjectorError, match="unknown"):
        basis_setting(["q"])
    with pytest.raises(ProjectorError, match="qubit"):
        basis_setting(["x"], [3])
    with pytest.raises(ProjectorError, match="Alice site"):
        basis_setting(["z", "z"], [2])


def test_bell_basis_explicit():
    bell = [np.array(v) * S for v in ([1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0])]
    s = explicit_setting([np.outer(v, v) for v in bell], label="bell")
    assert len(s) == 4
    assert_complete_orthonormal(s)


def test_explicit_errors_are_named():
    with pytest.raises(ProjectorError, match="complete"):
        explicit_setting([np.diag([1.0, 0.0])])
    plus = np.full((2, 2), 0.5)
    with pytest.raises(ProjectorError, match="orthogonal"):
        explicit_setting([plus, np.diag([1.0, 0.0])])
    with pytest.raises(ProjectorError, match="idempotent"):
        explicit_setting([np.diag([0.5, 0.0]), np.diag([0.5, 1.0])])
    with pytest.raises(ProjectorError, match="Hermitian"):
        explicit_setting([np.array([[1, 1], [0, 0]]), np.array([[0, -1], [0, 1]])])


def test_random_explicit_settings_complete():
    rng = np.random.default_rng(11)
    for d in (2, 3, 4, 6):
        u = random_unitary(d, rng)
        s = explicit_setting([np.outer(u[:, j], u[:, j].conj()) for j in range(d)])
        assert_complete_orthonormal(s)
        for v, p in zip(s.vectors, s.projectors):
            np.testing.assert_allclose(np.outer(v, v.conj()), p, atol=1e-10)


def test_protocol_rules():
    with pytest.raises(ProjectorError, match="two settings"):
        Protocol((basis_setting(["z"]),))
    with pytest.raises(ProjectorError, match="dimensions"):
        Protocol((basis_setting(["z"]), basis_setting(["z", "z"])))
    p = parse_shorthand("zz,yx", [2, 2])
    assert p.k == 2 and p.labels == ("zz", "yx")
    assert p.permuted([1, 0]).labels == ("yx", "zz")


def test_shorthand_variants():
    assert parse_shorthand("z,x", [2]).labels == ("z", "x")
    assert parse_shorthand("z,x", [2, 2]).labels == ("zz", "xx")
    q = parse_shorthand("computational,fourier", [3])
    assert q.labels == ("computational", "fourier")
    mixed = parse_shorthand("fourier+computational,computational+fourier", [3, 3])
    assert len(mixed.settings[0]) == 9
    with pytest.raises(ProjectorError, match="empty"):
        parse_shorthand("zz,", [2, 2])


def test_protocol_file_round_trip():
    p = parse_shorthand("zz,yx", [2, 2])
    back = parse_protocol_file(json.dumps(protocol_to_dict(p)), [2, 2])
    for a, b in zip(p.settings, back.settings):
        for pa, pb in zip(a.projectors, b.projectors):
            np.testing.assert_allclose(pa, pb, atol=1e-15)
    by_basis = parse_protocol_file('{"settings": [{"basis": ["z", "z"]}, {"basis": "xx"}]}', [2, 2])
    assert by_basis.labels == ("zz", "xx")
    with pytest.raises(ProjectorError, match="settings"):
        parse_protocol_file("{}", [2])
    with pytest.raises(ProjectorError, match="line"):
        parse_protocol_file("{", [2])


def test_setting_from_vectors_matches_explicit():
    rng = np.random.default_rng(2)
    u = random_unitary(4, rng)
    fast = setting_from_vectors([u[:, j] for j in range(4)], "u")
    slow = explicit_setting([np.outer(u[:, j], u[:, j].conj()) for j in range(4)], "u")
    for a, b in zip(fast.projectors, slow.projectors):
        np.testing.assert_allclose(a, b, atol=1e-12)
    for a, b in zip(fast.vectors, slow.vectors):
        np.testing.assert_allclose(a, b, atol=1e-10)
    with pytest.raises(ProjectorError, match="orthonormal"):
        setting_from_vectors([[1, 0], [1, 1]])
    with pytest.raises(ProjectorError, match="basis vectors"):
        setting_from_vectors([[1, 0]])
