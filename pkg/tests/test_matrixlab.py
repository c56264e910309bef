import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvature_vanish.catalog import lookup
from curvature_vanish.errors import CrossCheckError, ParameterError
from curvature_vanish.matrixlab import (
    _round_robin,
    algebra_for,
    build_algebra,
    cross_check,
    curvature_operator_matrix,
    jacobi_eigh,
    killing_form,
    oracle_roots,
    sym_eigenvalues,
)
from curvature_vanish.rootkit import root_system

ALGEBRAS = [("sl", (3,)), ("su", (2, 1)), ("so", (3, 2)), ("sp", (2,)), ("sl", (4,)), ("su", (2, 2)), ("so", (4, 2)),
            ("sp", (3,))]


@pytest.mark.parametrize("n", range(2, 9))
def test_round_robin_covers_every_pair_once(n):
    pairs = [pq for rnd in _round_robin(n) for pq in rnd]
    assert sorted(pairs) == [(i, j) for i in range(n) for j in range(i + 1, n)]
    for rnd in _round_robin(n):
        flat = [x for pq in rnd for x in pq]
        assert len(flat) == len(set(flat))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_jacobi_matches_reference(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    a = a + a.T
    w, v = jacobi_eigh(a)
    assert np.allclose(w, np.sort(np.linalg.eigvalsh(a))[::-1], atol=1e-10)
    assert np.allclose(v.T @ v, np.eye(n), atol=1e-10)
    assert np.allclose(a @ v, v * w, atol=1e-9)


def test_jacobi_rejects_bad_input():
    with pytest.raises(ParameterError):
        jacobi_eigh(np.zeros((2, 3)))
    with pytest.raises(ParameterError):
        jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert sym_eigenvalues(np.diag([1.0, 3.0, 2.0])) == [3.0, 2.0, 1.0]


@pytest.mark.parametrize("family,params", ALGEBRAS)
def test_algebra_invariants(family, params):
    alg = build_algebra(family, params)
    c = alg.structure_constants
    # antisymmetry and Jacobi identity
    assert np.allclose(c, -c.transpose(1, 0, 2), atol=1e-12)
    ad = alg.ad
    for i in range(0, alg.dim, max(1, alg.dim // 5)):
        for j in range(0, alg.dim, max(1, alg.dim // 5)):
            lhs = ad[i] @ ad[j] - ad[j] @ ad[i]
            rhs = np.tensordot(c[i, j], ad, axes=1)
            assert np.allclose(lhs, rhs, atol=1e-10)
    # theta is an involution and -X^T on every basis element
    assert np.all(alg.theta**2 == 1)
    for b, t in zip(alg.basis, alg.theta):
        assert np.allclose(-b.T, t * b)
    # Killing form: negative definite on k, positive definite on p
    B = killing_form(alg)
    assert np.all(np.linalg.eigvalsh(B[np.ix_(alg.k_idx, alg.k_idx)]) < 0)
    assert np.all(np.linalg.eigvalsh(B[np.ix_(alg.p_idx, alg.p_idx)]) > 0)
    # the flat is abelian
    for i in alg.a_idx:
        for j in alg.a_idx:
            assert np.allclose(c[i, j], 0)


@pytest.mark.parametrize("family,params", ALGEBRAS)
def test_curvature_trace_is_minus_half(family, params):
    alg = build_algebra(family, params)
    rng = np.random.default_rng(3)
    h = rng.standard_normal(alg.rank)
    h /= np.linalg.norm(h)
    M = curvature_operator_matrix(alg, h)
    assert np.trace(M) == pytest.approx(-0.5, abs=1e-12)
    assert np.max(np.linalg.eigvalsh(M)) <= 1e-12


def test_curvature_operator_requires_unit_flat_vector():
    alg = build_algebra("sl", (3,))
    with pytest.raises(ParameterError):
        curvature_operator_matrix(alg, [1.0, 1.0])
    with pytest.raises(ParameterError):
        curvature_operator_matrix(alg, [1.0])


def test_oracle_roots_su21():
    roots, mults = oracle_roots(build_algebra("su", (2, 1)))
    pairs = sorted(zip(np.round(np.abs(roots[:, 0]) ** 2, 10), mults))
    assert pairs == [(round(1 / 12, 10), 2), (round(1 / 3, 10), 1)]


@pytest.mark.parametrize("name", ["AI(3)", "AIII(2,1)", "BDI(3,2)", "CI(2)", "AI(4)", "AIII(2,2)", "BDI(4,2)", "CI(3)",
                                  "BDI(2,2)", "BDI(3,1)", "AIII(3,1)"])
def test_cross_check_passes(name):
    rep = cross_check(lookup(name), trials=10, seed=1)
    assert rep.passed and rep.max_discrepancy <= 1e-8
    Q = np.array(rep.isometry)
    assert np.allclose(Q.T @ Q, np.eye(Q.shape[0]), atol=1e-8)


def test_cross_check_names_bad_orbit_class():
    d = lookup("CI(2)")
    wrong = root_system("C", 2, {"short": 1, "long": 2})
    tampered = dataclasses.replace(d, system=wrong, dim=8)
    with pytest.raises(CrossCheckError, match="orbit class 'long'"):
        cross_check(tampered, trials=2)


def test_unsupported_models():
    with pytest.raises(ParameterError, match="no matrix model"):
        algebra_for(lookup("EIV"))
    with pytest.raises(ParameterError, match="no matrix model"):
        algebra_for(lookup("DIII(3)"))
    with pytest.raises(ParameterError):
        algebra_for(lookup("AI(8)"))
    with pytest.raises(ParameterError):
        build_algebra("g2", ())
