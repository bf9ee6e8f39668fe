"""Decompositions, norms, complexity search, feasibility systems."""

from fractions import Fraction

import pytest

from toricpairs.complexity import (
    Decomposition,
    DecompositionError,
    complexity,
    decomposition_from_json,
    feasibility_system,
    max_norm_lp,
    moduli_component_candidates,
    norm,
    search_min_complexity,
    span_rank_of,
    zero_complexity_spans,
)
from toricpairs.divisor import ToricDivisor
from toricpairs.fan import Fan, fn_fan, hirzebruch_fan, p2_fan
from toricpairs.genpair import BNefDivisor, GeneralizedPair, zero_moduli


def _boundary_pair(X):
    return GeneralizedPair(
        X, ToricDivisor(X, {r: 1 for r in X.rays}), zero_moduli(X)
    )


def _fn_pair(n):
    base = fn_fan(n)
    model = hirzebruch_fan(n)
    M = ToricDivisor(model, {(1, 0): 1, (-1, n): 1, (0, -1): 1})
    return GeneralizedPair(base, ToricDivisor(base, {}), BNefDivisor(model, M))


def test_toric_boundary_decomposition():
    X = p2_fan()
    P = _boundary_pair(X)
    sigma = Decomposition(
        boundary_components=[(ToricDivisor(X, {r: 1}), 1) for r in X.rays]
    )
    rep = complexity(P, sigma)
    assert rep.norm == 3
    assert rep.span_rank == 1
    assert rep.orbifold_value == 0
    assert rep.classic_value == 0


def test_validate_rejects_boundary_excess():
    X = p2_fan()
    P = _boundary_pair(X)
    sigma = Decomposition(
        boundary_components=[(ToricDivisor(X, {(1, 0): 1}), Fraction(3, 2))]
    )
    with pytest.raises(DecompositionError):
        sigma.validate(P)


def test_validate_requires_exact_moduli_sum():
    P = _fn_pair(2)
    model = P.moduli.model
    full = [
        (ToricDivisor(model, {r: 1}), 1)
        for r in ((1, 0), (-1, 2), (0, -1))
    ]
    Decomposition(moduli_components=full).validate(P)
    # dropping a component leaves a remainder: no longer a decomposition
    with pytest.raises(DecompositionError):
        Decomposition(moduli_components=full[:2]).validate(P)
    # overshooting is equally rejected
    with pytest.raises(DecompositionError):
        Decomposition(moduli_components=full + full[:1]).validate(P)


def test_non_nef_moduli_component_rejected():
    P = _fn_pair(2)
    model = P.moduli.model
    # M = fiber + opposite fiber has the same sum as two separate fibers,
    # but a component with negative self-intersection is not allowed
    M = ToricDivisor(model, {(1, 0): 1, (-1, 2): 1})
    P2 = GeneralizedPair(P.base, P.boundary, BNefDivisor(model, M))
    sigma = Decomposition(
        moduli_components=[
            (ToricDivisor(model, {(1, 0): 1, (-1, 2): 1}), 1)
        ]
    )
    sigma.validate(P2)
    bad = Decomposition(
        moduli_components=[
            (ToricDivisor(model, {(1, 0): 1}), 1),
            (ToricDivisor(model, {(-1, 2): 1}), 1),
        ]
    )
    bad.validate(P2)  # fibers are nef, exact sum holds
    with pytest.raises(DecompositionError):
        Decomposition(
            moduli_components=[(ToricDivisor(model, {(0, 1): 1}), 1)]
        ).validate(P2)


def test_max_norm_lp_infeasible_returns_none():
    P = _fn_pair(2)
    model = P.moduli.model
    # a single fiber can never sum to the three-component moduli divisor
    only = [ToricDivisor(model, {(1, 0): 1})]
    assert max_norm_lp(P, [], only) is None


def test_moduli_candidates_are_nef_and_cover_the_divisor():
    P = _fn_pair(3)
    cands = moduli_component_candidates(P, 1)
    assert cands
    from toricpairs.divisor import is_nef

    for d in cands:
        assert is_nef(d)
    res = max_norm_lp(P, [], cands)
    assert res is not None and res[0] == 3


def test_search_on_worked_example():
    P = _fn_pair(2)
    rep = search_min_complexity(P, moduli_bound=1)
    assert rep.orbifold_value == 0
    assert rep.norm == 3
    assert rep.orbifold_value <= rep.classic_value
    val, hits = zero_complexity_spans(P, moduli_bound=1)
    assert val == 0
    for dim, wrank, n_val in hits:
        assert dim == wrank == 1
        assert n_val == 3


def test_orbifold_below_classic_on_samples():
    for X in (p2_fan(), hirzebruch_fan(1), Fan([(0, 1), (-2, -1), (2, -1)])):
        P = _boundary_pair(X)
        rep = search_min_complexity(P, moduli_bound=1)
        assert rep.orbifold_value <= rep.classic_value
        assert rep.orbifold_value >= 0


def test_decomposition_json_roundtrip():
    P = _fn_pair(2)
    model = P.moduli.model
    sigma = Decomposition(
        moduli_components=[
            (ToricDivisor(model, {r: 1}), 1)
            for r in ((1, 0), (-1, 2), (0, -1))
        ]
    )
    sigma2 = decomposition_from_json(P, sigma.to_json())
    assert norm(P, sigma2) == norm(P, sigma) == 3
    assert span_rank_of(P, sigma2) == span_rank_of(P, sigma)
    sigma2.validate(P)


def test_feasibility_hirzebruch():
    res0 = feasibility_system("hirzebruch", n=0)
    assert res0.status == "feasible"
    assert res0.alpha_interval == (Fraction(0), Fraction(1))
    res1 = feasibility_system("hirzebruch", n=1)
    assert res1.status == "feasible"
    assert res1.alpha_interval == (Fraction(0), Fraction(1))
    for n in range(2, 8):
        res = feasibility_system("hirzebruch", n=n)
        assert res.status == "feasible"
        assert res.alpha_interval == (Fraction(1), Fraction(1))


def test_feasibility_cases_infeasible_with_certificates():
    for fixture in ("case42", "case43", "case43-parity"):
        res = feasibility_system(fixture)
        assert res.status == "infeasible"
        assert res.farkas is not None


def test_feasibility_rejects_bad_alpha():
    with pytest.raises(ValueError):
        feasibility_system("hirzebruch", n=2, alpha=Fraction(3, 2))
    with pytest.raises(ValueError):
        feasibility_system("unknown-fixture")
