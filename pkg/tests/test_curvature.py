import math
import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvature_vanish.catalog import lookup
from curvature_vanish.curvature import (
    SERIES_SWITCHOVER,
    asymptotic_hessian_spectrum,
    curvature_spectrum,
    hessian_spectrum,
    lambda_coth,
    lambda_coth_array,
    laplacian,
    pinching,
    ricci_radial,
    root_values,
)
from curvature_vanish.errors import ParameterError

SPACES = ["AI(3)", "AIII(2,1)", "BDI(3,2)", "CI(2)", "BDI(2,2)", "AI(4)", "EIII", "G", "FII", "CII(2,1)"]
S12 = 1 / math.sqrt(12)


def _sorted(entries):
    return sorted((round(v, 12), m) for v, m in entries)


def test_su12_root_values():
    rv = root_values(lookup("AIII(2,1)"), [1.0])
    assert _sorted(rv.entries) == _sorted([(S12, 2), (2 * S12, 1)])


def test_sl3_highest_root_direction():
    d = lookup("AI(3)")
    s = 1 / math.sqrt(3)
    i = [d.system.simple_coordinates(r) for r in d.system.positive_roots].index((1, 1))
    top = d.system.root_matrix[i]
    rv = root_values(d, top / np.linalg.norm(top))
    assert _sorted(rv.entries) == _sorted([(s / 2, 1), (s, 1), (s / 2, 1)])


def test_d2_along_a_root():
    d = lookup("BDI(2,2)")
    a = d.system.root_matrix[0]
    cs = curvature_spectrum(d, a / np.linalg.norm(a))
    assert _sorted(cs.entries) == _sorted([(-0.5, 1), (0.0, 1), (0.0, 1)])


def test_su12_curvature_spectrum_and_trace():
    cs = curvature_spectrum(lookup("AIII(2,1)"), [1.0])
    assert _sorted(cs.entries) == _sorted([(-1 / 12, 2), (-1 / 3, 1)])
    assert cs.trace() == pytest.approx(-0.5, abs=1e-15)
    assert cs.total_multiplicity == 3


def test_rank2_has_one_structural_zero():
    cs = curvature_spectrum(lookup("CI(2)"), [0.6, 0.8])
    assert cs.entries[-1] == (0.0, 1)
    assert cs.total_multiplicity == lookup("CI(2)").dim - 1


def test_hessian_zero_value():
    assert lambda_coth(0.0, 2.0) == 0.5


def test_su12_laplacian_radius_one():
    s = mpmath.mpf(1) / mpmath.sqrt(12)
    truth = float(2 * s * mpmath.coth(s) + 2 * s * mpmath.coth(2 * s))
    assert laplacian(lookup("AIII(2,1)"), [1.0], 1.0) == pytest.approx(truth, rel=1e-14)


def test_hessian_flat_entry_is_inverse_radius():
    hs = hessian_spectrum(lookup("AI(3)"), [0.6, 0.8], 4.0)
    assert hs.entries[-1] == (0.25, 1)
    assert all(v > 0 for v, _ in hs.entries)


def test_radius_must_be_positive():
    for r in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ParameterError, match="radius must be positive"):
            hessian_spectrum(lookup("AI(3)"), [1.0, 0.0], r)


def test_direction_errors_and_normalization():
    d = lookup("AI(3)")
    with pytest.raises(ParameterError):
        root_values(d, [0.0, 0.0])
    with pytest.raises(ParameterError):
        root_values(d, [1.0, 0.0, 0.0])
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        rv = root_values(d, [3.0, 4.0])
    assert w and rv.direction == pytest.approx((0.6, 0.8))


def test_ricci_quadratic_scaling_without_normalization():
    assert ricci_radial(lookup("AI(3)"), [2.0, 0.0], normalize=False) == pytest.approx(-2.0)
    assert ricci_radial(lookup("BDI(2,2)"), [0.0, 1.0]) == pytest.approx(-0.5)


@pytest.mark.parametrize(
    "name,A,ratio,pmax",
    [
        ("AI(3)", Fraction(1, 3), Fraction(3, 2), 0),
        ("AIII(2,1)", Fraction(1, 3), Fraction(3, 2), 0),
        ("BDI(2,2)", Fraction(1, 2), Fraction(1), 0),
        ("AI(4)", Fraction(1, 4), Fraction(2), 1),
        ("EVIII", Fraction(1, 30), Fraction(15), 3),
    ],
)
def test_pinching(name, A, ratio, pmax):
    rep = pinching(lookup(name))
    assert (rep.A, rep.B, rep.ratio, rep.max_p_by_pinching) == (A, Fraction(1, 2), ratio, pmax)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 50), st.floats(1e-3, 100))
def test_lambda_coth_matches_mpmath(v, r):
    mpmath.mp.dps = 40
    if v == 0:
        truth = 1 / mpmath.mpf(r)
    else:
        truth = mpmath.mpf(v) * mpmath.coth(mpmath.mpf(v) * mpmath.mpf(r))
    got = lambda_coth(v, r)
    assert abs(got - float(truth)) <= 1e-13 * float(truth)
    assert lambda_coth_array(np.array([v]), r)[0] == pytest.approx(got, rel=1e-15)


def test_series_switchover_continuity():
    r = 3.0
    v = SERIES_SWITCHOVER / r
    below = lambda_coth(v * (1 - 1e-12), r)
    above = lambda_coth(v * (1 + 1e-12), r)
    assert abs(above - below) / above < 1e-12


def _unit(rank, coords):
    h = np.array(coords[:rank])
    n = np.linalg.norm(h)
    return None if n < 1e-3 else h / n


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(SPACES), st.lists(st.floats(-1, 1), min_size=4, max_size=4), st.floats(0.05, 20))
def test_spectrum_consistency_and_hessian_order(name, coords, r):
    d = lookup(name)
    h = _unit(d.rank, coords)
    if h is None:
        return
    rv = root_values(d, h)
    cs = curvature_spectrum(d, h)
    hs = hessian_spectrum(d, h, r)
    n = len(rv.entries)
    for (v, m), (c, k), (e, j) in zip(rv.entries, cs.entries[:n], hs.entries[:n]):
        assert m == k == j
        assert c == -(v * v)
    assert cs.trace() == pytest.approx(-0.5, abs=1e-12)
    vals = [v for v, _ in rv.entries]
    eta = [e for e, _ in hs.entries[:n]]
    for i in range(n):
        for j in range(n):
            if vals[i] < vals[j] - 1e-12:
                assert eta[i] < eta[j]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPACES), st.lists(st.floats(-1, 1), min_size=4, max_size=4))
def test_weyl_invariance_of_ricci(name, coords):
    d = lookup(name)
    h = _unit(d.rank, coords)
    if h is None:
        return
    g = d.system.chamber().fold(h)
    assert ricci_radial(d, g / np.linalg.norm(g)) == pytest.approx(ricci_radial(d, h), abs=1e-12)


def test_laplacian_large_radius_limit():
    d = lookup("AI(4)")
    h = d.system.chamber().extreme_rays.sum(axis=0)
    h /= np.linalg.norm(h)
    lim = asymptotic_hessian_spectrum(d, h).trace()
    vals = [(v, m) for v, m in root_values(d, h).entries]
    gaps = []
    for r in (20.0, 40.0, 80.0):
        gap = laplacian(d, h, r) - lim - (d.rank - 1) / r
        # v coth(v r) - v = 2v / (exp(2 v r) - 1)
        assert gap == pytest.approx(math.fsum(m * 2 * v / math.expm1(2 * v * r) for v, m in vals), rel=1e-6, abs=1e-15)
        gaps.append(gap)
    assert gaps[0] > gaps[1] > gaps[2] >= 0
    assert gaps[2] < 1e-9
