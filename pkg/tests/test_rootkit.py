from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvature_vanish.errors import DataError, ParameterError
from curvature_vanish.rootkit import (
    RootVector,
    above_relation,
    attach_multiplicities,
    build_root_system,
    killing_normalize,
    parse_root_type,
    ricci_scalar,
    root_system,
)

COUNTS = {
    ("A", 1): 1, ("A", 2): 3, ("A", 4): 10,
    ("B", 2): 4, ("B", 3): 9,
    ("C", 2): 4, ("C", 3): 9,
    ("D", 2): 2, ("D", 4): 12,
    ("BC", 1): 2, ("BC", 2): 6, ("BC", 3): 12,
    ("E6", None): 36, ("E7", None): 63, ("E8", None): 120,
    ("F4", None): 24, ("G2", None): 6,
}

SYSTEMS = [
    ("A", 2, {"root": 1}),
    ("B", 2, {"short": 1, "long": 1}),
    ("C", 3, {"short": 2, "long": 1}),
    ("BC", 2, {"short": 2, "middle": 3, "long": 1}),
    ("G2", None, {"short": 1, "long": 1}),
    ("F4", None, {"short": 2, "long": 1}),
    ("D", 4, {"root": 1}),
]


@pytest.mark.parametrize("key,count", COUNTS.items())
def test_positive_root_counts(key, count):
    s = build_root_system(*key)
    assert len(s.positive_roots) == count
    assert len(s.simple_roots) == s.rank


def test_a2_normalized_norm():
    s = root_system("A", 2, {"root": 1})
    assert {s.norm_sq(r) for r in s.positive_roots} == {Fraction(1, 3)}


def test_d2_normalized_norm():
    s = root_system("D", 2, {"root": 1})
    assert {s.norm_sq(r) for r in s.positive_roots} == {Fraction(1, 2)}
    assert not s.is_irreducible()


def test_bc_classes_by_length():
    s = build_root_system("BC", 2)
    assert s.classes == ("short", "middle", "long")
    lengths = {c: s.norm_sq(r) for r, c in zip(s.positive_roots, s.orbit_classes)}
    assert lengths["long"] == 4 * lengths["short"]
    assert lengths["middle"] == 2 * lengths["short"]


def test_g2_length_ratio():
    s = build_root_system("G2")
    lengths = {c: s.norm_sq(r) for r, c in zip(s.positive_roots, s.orbit_classes)}
    assert lengths["long"] == 3 * lengths["short"]


def test_simple_coordinates_are_nonnegative_integers():
    s = build_root_system("E8")
    for r in s.positive_roots:
        c = s.simple_coordinates(r)
        assert all(x >= 0 and x.denominator == 1 for x in c)
    assert max(s.height(r) for r in s.positive_roots) == 29


def test_parse_root_type():
    assert parse_root_type("BC2") == ("BC", 2)
    assert parse_root_type("e8") == ("E8", 8)
    with pytest.raises(ParameterError):
        parse_root_type("Q3")


def test_rank_validation():
    with pytest.raises(ParameterError):
        build_root_system("D", 1)
    with pytest.raises(ParameterError):
        build_root_system("E6", 5)
    with pytest.raises(ParameterError):
        build_root_system("Z", 2)


def test_aliases_and_all():
    s = attach_multiplicities(build_root_system("C", 2), {"e_i±e_j": 2, "2e_i": 1})
    assert sorted(s.multiplicities) == [1, 1, 2, 2]
    s = attach_multiplicities(build_root_system("B", 2), {"all": 3})
    assert set(s.multiplicities) == {3}


def test_per_root_override():
    base = build_root_system("A", 2)
    target = base.positive_roots[0]
    s = attach_multiplicities(base, {"root": 1, target: 5})
    assert s.multiplicity(target) == 5


def test_missing_or_bad_multiplicity():
    with pytest.raises(DataError):
        attach_multiplicities(build_root_system("B", 2), {"short": 1})
    with pytest.raises(DataError):
        attach_multiplicities(build_root_system("A", 2), {"root": 0})


def test_ricci_identity_must_be_scalar():
    base = build_root_system("A", 2)
    bad = attach_multiplicities(base, {"root": 1, base.positive_roots[0]: 4})
    with pytest.raises(DataError, match="Ricci identity"):
        ricci_scalar(bad)


def test_zero_root_rejected():
    with pytest.raises(DataError):
        RootVector((Fraction(0), Fraction(0)))


def test_above_relation_top_root():
    s = build_root_system("A", 3)
    above = above_relation(s)
    top = max(range(len(s.positive_roots)), key=lambda i: s.height(s.positive_roots[i]))
    assert above[top] == set()
    for i, a in enumerate(above):
        if i != top:
            assert top in a


def _normalized(case):
    return root_system(*case)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SYSTEMS), st.lists(st.floats(-1, 1), min_size=8, max_size=8), st.integers(0, 7))
def test_weyl_invariance_of_root_values(case, coords, k):
    s = _normalized(case)
    h = np.array(coords[: s.rank])
    if np.linalg.norm(h) < 1e-3:
        return
    h /= np.linalg.norm(h)
    alpha = s.simple_roots[k % s.rank]
    g = s.reflect(h, alpha)
    before = sorted(zip(np.round(np.abs(s.root_matrix @ h), 10), s.multiplicities))
    after = sorted(zip(np.round(np.abs(s.root_matrix @ g), 10), s.multiplicities))
    assert before == after


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SYSTEMS), st.lists(st.floats(-1, 1), min_size=8, max_size=8))
def test_ricci_identity_random_direction(case, coords):
    s = _normalized(case)
    h = np.array(coords[: s.rank])
    if np.linalg.norm(h) < 1e-3:
        return
    h /= np.linalg.norm(h)
    assert abs(float(((s.root_matrix @ h) ** 2) @ s.mult_array) - 0.5) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SYSTEMS), st.fractions(min_value=Fraction(1, 50), max_value=50))
def test_normalization_is_scale_invariant(case, factor):
    s = _normalized(case)
    again = killing_normalize(s.scaled(factor))
    assert [again.norm_sq(r) for r in again.positive_roots] == [s.norm_sq(r) for r in s.positive_roots]
    assert ricci_scalar(again) == Fraction(1, 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SYSTEMS), st.lists(st.floats(-1, 1), min_size=8, max_size=8))
def test_fold_lands_in_chamber(case, coords):
    s = _normalized(case)
    h = np.array(coords[: s.rank])
    if np.linalg.norm(h) < 1e-3:
        return
    c = s.chamber()
    g = c.fold(h)
    assert c.contains(g, tol=1e-9)
    assert abs(np.linalg.norm(g) - np.linalg.norm(h)) < 1e-9


def test_extreme_rays_are_unit_and_inside():
    c = root_system("F4", None, {"short": 1, "long": 1}).chamber()
    rays = c.extreme_rays
    assert np.allclose(np.linalg.norm(rays, axis=1), 1.0)
    for r in rays:
        assert c.contains(r, tol=1e-9)
