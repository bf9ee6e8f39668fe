"""Fans: construction, resolution, equivalence, enumeration."""

import random

import pytest

from toricpairs.fan import (
    Fan,
    FanError,
    canonical_form,
    enumerate_fans,
    fan_from_json,
    fn_fan,
    hirzebruch_fan,
    is_Fn,
    is_P2,
    is_hirzebruch,
    lattice_equivalent,
    minimal_resolution,
    p1xp1_fan,
    p2_fan,
    picard_rank,
    remove_ray,
    sort_rays_ccw,
    star_subdivision,
)
from toricpairs.lattice import apply_matrix, det2


def test_fan_sorting_and_cones():
    X = Fan([(1, -2), (0, 1), (-2, -1), (1, 1)])
    rays = X.rays
    assert set(rays) == {(1, -2), (0, 1), (-2, -1), (1, 1)}
    for u, v in X.cones():
        assert det2(u, v) > 0
    assert len(X.cones()) == 4
    assert sort_rays_ccw([(0, -1), (0, 1), (1, 0)]) == ((1, 0), (0, 1), (0, -1))


def test_fan_rejects_bad_input():
    with pytest.raises(FanError):
        Fan([(1, 0), (0, 1)])  # not complete
    with pytest.raises(FanError):
        Fan([(1, 0), (2, 0), (0, 1), (-1, -1)])  # non-primitive ray
    with pytest.raises(FanError):
        Fan([(1, 0), (-1, 0), (0, 1)])  # lower half-plane not covered


def test_fan_json_roundtrip():
    X = Fan([(0, 1), (-2, -1), (2, -1)])
    assert fan_from_json(X.to_json()) == X


def test_minimal_resolution_is_smooth_and_minimal():
    rng = random.Random(7)
    fans = enumerate_fans(2, 5)
    rng.shuffle(fans)
    for X in fans[:30]:
        Y, f = minimal_resolution(X)
        assert Y.is_smooth()
        assert set(X.rays) <= set(Y.rays)
        assert set(f.exceptional_rays) == set(Y.rays) - set(X.rays)
        # minimality: every exceptional ray is needed for smoothness
        for e in f.exceptional_rays:
            assert not remove_ray(Y, e).is_smooth()


def test_canonical_form_is_gl2z_invariant():
    mats = [((1, 1), (0, 1)), ((0, -1), (1, 0)), ((2, 1), (1, 1)),
            ((1, 0), (0, -1))]
    for X in (p2_fan(), hirzebruch_fan(3), Fan([(0, 1), (-2, -1), (2, -1)])):
        base = canonical_form(X)[0]
        for g in mats:
            Xg = Fan([apply_matrix(g, r) for r in X.rays])
            assert canonical_form(Xg)[0] == base


def test_lattice_equivalent_witness():
    X = hirzebruch_fan(2)
    g0 = ((1, 3), (1, 2))
    Y = Fan([apply_matrix(g0, r) for r in X.rays])
    g = lattice_equivalent(X, Y)
    assert g is not None
    assert sorted(apply_matrix(g, r) for r in X.rays) == sorted(Y.rays)
    assert lattice_equivalent(p2_fan(), p1xp1_fan()) is None


def test_recognizers():
    assert is_P2(p2_fan())
    assert not is_P2(p1xp1_fan())
    assert is_hirzebruch(hirzebruch_fan(4)) == 4
    assert is_hirzebruch(p1xp1_fan()) == 0
    assert is_Fn(fn_fan(3)) == 3
    assert is_Fn(p2_fan()) is None  # smooth, so not a cone surface
    assert is_Fn(Fan([(0, 1), (-2, -1), (2, -1)])) is None


def test_picard_rank():
    assert picard_rank(p2_fan()) == 1
    assert picard_rank(p1xp1_fan()) == 2
    assert picard_rank(hirzebruch_fan(1)) == 2


def test_star_subdivision_and_remove_ray_roundtrip():
    X = p2_fan()
    Y, f = star_subdivision(X, (1, 1))
    assert (1, 1) in Y.rays and len(Y.rays) == 4
    assert f.source == Y and f.target == X
    assert remove_ray(Y, (1, 1)) == X
    with pytest.raises(FanError):
        remove_ray(X, (1, 0))  # a 3-ray fan has no removable ray


def test_enumerate_fans_census():
    fans = enumerate_fans(1, 4)
    # one representative per lattice-equivalence class
    for i, X in enumerate(fans):
        for Y in fans[i + 1:]:
            assert lattice_equivalent(X, Y) is None
    assert any(is_P2(X) for X in fans)
    assert any(lattice_equivalent(X, p1xp1_fan()) is not None for X in fans)
    assert len(enumerate_fans(2, 6)) == 1189
    assert len(enumerate_fans(3, 4, n_rays=4)) == 1402
    assert len(enumerate_fans(4, 3, n_rays=3)) == 247
