"""Lattice primitives and Hirzebruch-Jung cone smoothing."""

import math
import random

import pytest

from toricpairs.lattice import (
    DegenerateConeError,
    apply_matrix,
    cone_smoothing_rays,
    det2,
    is_primitive,
    mat_det,
    mat_inv_unimodular,
    mat_mul,
    primitive,
    vadd,
    vneg,
)


def test_primitive():
    assert primitive((4, 6)) == (2, 3)
    assert primitive((0, -5)) == (0, -1)
    assert primitive((-3, 0)) == (-1, 0)
    assert is_primitive((2, 3))
    assert not is_primitive((2, 4))
    with pytest.raises(ValueError):
        primitive((0, 0))


def test_det2_and_vector_ops():
    assert det2((1, 0), (0, 1)) == 1
    assert det2((0, 1), (1, 0)) == -1
    assert vadd((1, 2), (3, -1)) == (4, 1)
    assert vneg((2, -3)) == (-2, 3)


def _random_primitive(rng, bound):
    while True:
        v = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        if v != (0, 0):
            return primitive(v)


def _hilbert_basis(u, v, box):
    """Brute-force irreducible lattice points of the cone <u, v>.

    Candidate irreducibles are taken in a small box (which contains every
    actual basis element), but summands range over a much larger box so no
    point is declared irreducible for lack of search room.
    """
    big = 6 * box

    def cone_points(b):
        out = set()
        for x in range(-b, b + 1):
            for y in range(-b, b + 1):
                p = (x, y)
                if p != (0, 0) and det2(u, p) >= 0 and det2(p, v) >= 0:
                    out.add(p)
        return out

    small, large = cone_points(box), cone_points(big)
    basis = set()
    for p in small:
        reducible = any(
            (p[0] - q[0], p[1] - q[1]) in large for q in large if q != p
        )
        if not reducible:
            basis.add(p)
    return basis


def test_smoothing_rays_against_hilbert_basis():
    """The inserted rays together with the generators form the Hilbert basis
    of the dual-free cone, and all consecutive sub-cones are unimodular."""
    rng = random.Random(20240517)
    seen = 0
    while seen < 40:
        u = _random_primitive(rng, 5)
        v = _random_primitive(rng, 5)
        if det2(u, v) <= 0:
            continue
        seen += 1
        rays = cone_smoothing_rays(u, v)
        chain = [u] + rays + [v]
        for a, b in zip(chain, chain[1:]):
            assert det2(a, b) == 1
        box = max(abs(c) for w in (u, v) for c in w) + 1
        assert set(chain) == _hilbert_basis(u, v, box)


def test_smoothing_rays_equivariance():
    rng = random.Random(99)
    mats = [((1, 1), (0, 1)), ((0, -1), (1, 0)), ((2, 1), (1, 1)), ((1, 0), (3, 1))]
    for g in mats:
        assert abs(mat_det(g)) == 1
        for _ in range(20):
            u = _random_primitive(rng, 4)
            v = _random_primitive(rng, 4)
            if det2(u, v) <= 0:
                continue
            gu, gv = apply_matrix(g, u), apply_matrix(g, v)
            if det2(gu, gv) <= 0:
                gu, gv = gv, gu
                expected = [apply_matrix(g, w) for w in cone_smoothing_rays(v, u)]
            else:
                expected = [apply_matrix(g, w) for w in cone_smoothing_rays(u, v)]
            assert cone_smoothing_rays(gu, gv) == expected


def test_smoothing_rays_rejects_degenerate_cones():
    with pytest.raises(DegenerateConeError):
        cone_smoothing_rays((1, 0), (-1, 0))
    with pytest.raises(DegenerateConeError):
        cone_smoothing_rays((0, 1), (1, 0))
    with pytest.raises(ValueError):
        cone_smoothing_rays((2, 0), (0, 1))


def test_matrix_helpers():
    g = ((2, 1), (1, 1))
    h = mat_inv_unimodular(g)
    assert mat_mul(g, h) == ((1, 0), (0, 1))
    assert apply_matrix(mat_mul(g, h), (7, -3)) == (7, -3)
