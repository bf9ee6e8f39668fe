"""Minimal model program runs and the two rank-reduction lemmas."""

import pytest

from toricpairs.fan import (
    Fan,
    enumerate_fans,
    fn_fan,
    hirzebruch_fan,
    lattice_equivalent,
    p1xp1_fan,
    p2_fan,
    picard_rank,
)
from toricpairs.mmp import (
    MmpError,
    is_canonical,
    k_negative_rays,
    rho1_noncanonical_model,
    rho2_intermediate_model,
    run_k_mmp,
)


def test_is_canonical_knowns():
    assert is_canonical(p2_fan())
    assert is_canonical(fn_fan(2))
    assert is_canonical(Fan([(0, 1), (-2, -1), (2, -1)]))
    assert is_canonical(Fan([(-1, 0), (0, 1), (3, -2)]))
    assert not is_canonical(fn_fan(3))
    assert not is_canonical(Fan([(-1, 2), (-2, -1), (1, -1)]))


def test_k_negative_rays_on_blowup():
    X = Fan([(1, 0), (0, 1), (1, 1), (-1, -1)])
    neg = k_negative_rays(X)
    assert ((1, 1), -1) in [(r, v) for r, v in neg]


def test_run_k_mmp_trace_invariants():
    fans = enumerate_fans(2, 6)
    for X in fans[::7]:
        tr = run_k_mmp(X)
        assert tr.start == X
        current = X
        for r, val, F in tr.steps:
            assert val < 0
            assert len(F.rays) == len(current.rays) - 1
            assert r in current.rays and r not in F.rays
            current = F
        assert tr.final == current
        if tr.terminal_kind() == "rank1":
            assert picard_rank(tr.final) == 1
        else:
            assert tr.mfs  # a genuine Mori fiber space structure exists
        assert not k_negative_rays(tr.final)


def test_rho2_model_properties():
    X = hirzebruch_fan(2)
    m = rho2_intermediate_model(X)
    assert m is not None
    assert picard_rank(m.Z) == 1
    assert rho2_intermediate_model(p1xp1_fan()) is None
    with pytest.raises(MmpError):
        rho2_intermediate_model(p2_fan())
    # a rank-2 fan with only opposite ray pairs needs an extraction
    Y = Fan([(1, 0), (-1, 0), (1, 2), (-1, -2)])
    m2 = rho2_intermediate_model(Y)
    assert m2.extracted_ray is not None
    assert 0 < m2.discrepancy <= 1


def test_rho1_model_properties():
    X = Fan([(-1, 2), (-2, -1), (1, -1)])  # non-canonical rank one
    m = rho1_noncanonical_model(X)
    assert picard_rank(m.Z) == 1
    assert m.E in m.Z.rays
    assert 0 < m.discrepancy < 1
    with pytest.raises(MmpError):
        rho1_noncanonical_model(p2_fan())  # canonical
    with pytest.raises(MmpError):
        rho1_noncanonical_model(fn_fan(3))  # excluded cone surface
    with pytest.raises(MmpError):
        rho1_noncanonical_model(hirzebruch_fan(1))  # wrong rank


def test_rho1_excludes_exactly_canonical_and_fn():
    fans = enumerate_fans(2, 3, n_rays=3)
    for X in fans:
        if is_canonical(X) or any(
            lattice_equivalent(X, fn_fan(n)) is not None for n in range(2, 6)
        ):
            with pytest.raises(MmpError):
                rho1_noncanonical_model(X)
        else:
            m = rho1_noncanonical_model(X)
            assert 0 < m.discrepancy < 1
