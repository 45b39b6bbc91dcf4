import numpy as np
import pytest

import karoubi as kb


def dephasing(d=2):
    kraus = [np.zeros((d, d), dtype=complex) for _ in range(d)]
    for i in range(d):
        kraus[i][i, i] = 1.0
    return kb.channel_from_kraus(kraus, [d], [d])


def test_dephasing_validates_and_splits():
    p = dephasing(2)
    checks = kb.validate_channel(p)
    assert checks["cp"] and checks["tp"] and checks["subcausal"]
    assert kb.is_causal(p) and kb.is_idempotent(p)
    dec = kb.decompose_cptp_idempotent(p)
    assert dec.dims_a == [1, 1]
    assert dec.residual_dim == 0
    assert all(c["pass"] for c in kb.verify_decomposition(p, dec))


def test_choi_roundtrip():
    p = dephasing(2)
    q = kb.channel_from_choi(p.choi(), [2], [2])
    assert p.distance(q) < 1e-12


def test_planted_instance_roundtrip():
    p, planted = kb.random_idempotent_instance([(2, 1), (1, 2)], seed=7)
    dec = kb.decompose_cptp_idempotent(p)
    assert sorted(dec.dims_a) == sorted(b.dim_a for b in planted.blocks)
    assert p.compose(dec.q).distance(dec.q) < 1e-8


def test_causalize_rank3_projector():
    pi = np.eye(4, dtype=complex)
    pi[3, 3] = 0.0
    p = kb.pure_embed(pi)
    assert kb.is_subcausal(p) and not kb.is_causal(p)
    q = kb.causalize_subcausal(p)
    assert kb.is_causal(q) and kb.is_idempotent(q)
    dec = kb.decompose_cptp_idempotent(q)
    assert dec.dims_a == [3]
    assert dec.residual_dim == 1


def test_flor_example():
    pairs = kb.flor_decompose(np.array([[1.0, 1.0], [0.0, 0.0]]))
    assert len(pairs) == 1
    u, v = pairs[0]
    assert np.allclose(np.outer(u, v), [[1, 1], [0, 0]])


def test_bool_counterexample_does_not_split():
    assert kb.search_splitting_bool(np.array([[1, 1], [0, 1]]), b_max=4) is None
    found = kb.search_splitting_bool(np.array([[1, 1], [1, 1]]), b_max=4)
    assert found is not None
    m, e = found
    assert m.shape == (2, 1) and e.shape == (1, 2)


def test_frobenius_copy_and_pants():
    rep = kb.verify_frobenius(kb.copy_delta(3), dim=3, tol=1e-10)
    assert rep["coassoc"] and rep["frobenius_law"] and rep["special"]
    deco = kb.decoherence_idempotent(kb.pants_delta(2), dim=4)
    dec = kb.decompose_cptp_idempotent(deco)
    assert dec.dims_a == [2]


def test_stinespring_leak():
    info = kb.stinespring_leak(dephasing(2))
    assert info["env_dim"] == 2


def test_environment_axiom():
    f = np.eye(2, dtype=complex)
    z = np.diag([1.0, -1.0]).astype(complex)
    rep = kb.environment_axiom_check(f, z)
    assert rep["discard_eq"] and rep["gram_eq"] and rep["consistent"]


def test_theory_laws():
    for theory in ("frel", "class", "quant"):
        checks = kb.check_theory_laws(theory, seed=1, samples=20)
        assert all(c["pass"] for c in checks), theory


def test_errors_surface_as_exceptions():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    with pytest.raises(kb.KaroubiError):
        kb.decompose_cptp_idempotent(kb.pure_embed(x))
