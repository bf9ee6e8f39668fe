"""Generalized pairs: discrepancies, singularity classes, adjunction."""

import random
from fractions import Fraction

import pytest

from toricpairs.divisor import ToricDivisor, canonical_divisor, intersect_with_ray
from toricpairs.fan import Fan, fn_fan, hirzebruch_fan, minimal_resolution, p2_fan
from toricpairs.genpair import (
    BNefDivisor,
    GeneralizedPair,
    PairError,
    adjunction_to_invariant_curve,
    computation_fan,
    crepant_rays,
    discrepancy_table,
    is_gklt,
    is_glc,
    is_glcy,
    log_discrepancy,
    pair_from_json,
    trace,
    zero_moduli,
)


def _boundary_pair(X, coeffs=None):
    if coeffs is None:
        coeffs = {r: 1 for r in X.rays}
    return GeneralizedPair(X, ToricDivisor(X, coeffs), zero_moduli(X))


def test_pair_validation():
    X = p2_fan()
    with pytest.raises(PairError):
        _boundary_pair(X, {(1, 0): Fraction(5, 4)})
    with pytest.raises(PairError):
        GeneralizedPair(X, ToricDivisor(X, {(1, 0): -1}), zero_moduli(X))
    with pytest.raises(PairError):
        # moduli model must refine the base
        GeneralizedPair(hirzebruch_fan(1), ToricDivisor(hirzebruch_fan(1), {}),
                        zero_moduli(X))
    with pytest.raises(PairError):
        # moduli divisor must be nef on its model
        BNefDivisor(X, ToricDivisor(X, {(1, 0): -1}))


def test_toric_boundary_pair_is_log_cy():
    for X in (p2_fan(), hirzebruch_fan(3), Fan([(0, 1), (-2, -1), (2, -1)])):
        P = _boundary_pair(X)
        assert is_glc(P)
        assert not is_gklt(P)
        assert is_glcy(P)
        table = discrepancy_table(P)
        assert all(a == 0 for a in table.values())


def test_log_discrepancy_known_values():
    # trivial pair on the plane: discrepancy of e is 1 + multiplicity data
    P = GeneralizedPair(p2_fan(), ToricDivisor(p2_fan(), {}), zero_moduli(p2_fan()))
    assert log_discrepancy(P, (1, 0)) == 1
    assert log_discrepancy(P, (1, 1)) == 2
    assert log_discrepancy(P, (2, 2)) == 2  # depends only on the primitive ray


def test_log_discrepancy_refinement_invariance():
    """The discrepancy at a valuation does not depend on which smooth model
    the computation is organized on."""
    rng = random.Random(5)
    X = Fan([(0, 1), (-2, -1), (2, -1)])
    B = ToricDivisor(X, {(0, 1): Fraction(1, 2), (2, -1): Fraction(2, 3)})
    P = GeneralizedPair(X, B, zero_moduli(X))
    base_vals = {}
    for _ in range(40):
        e = (rng.randint(-5, 5), rng.randint(-5, 5))
        if e == (0, 0):
            continue
        base_vals[e] = log_discrepancy(P, e)
    Z1 = computation_fan(P)
    Z2 = computation_fan(P, extra_rays=[(1, 5), (-3, 1), (4, -3)])
    t1 = discrepancy_table(P, Z1)
    t2 = discrepancy_table(P, Z2)
    for e in Z1.rays:
        assert t1[e] == t2[e] == log_discrepancy(P, e)
    for e, a in base_vals.items():
        assert log_discrepancy(P, e) == a


def test_moduli_contribution_to_discrepancy():
    # a moduli divisor that does not descend lowers the discrepancy at the
    # rays where its pullback differs from the pullback of its pushforward
    base = p2_fan()
    model = Fan([(1, 0), (0, 1), (1, 1), (-1, -1)])
    M = ToricDivisor(model, {(-1, -1): 2, (1, 0): 1})
    P = GeneralizedPair(base, ToricDivisor(base, {}), BNefDivisor(model, M))
    assert is_glcy(P)
    assert log_discrepancy(P, (1, 1)) == 1
    assert trace(P).coeff((1, 0)) == 1


def test_crepant_rays():
    X = fn_fan(2)
    model = hirzebruch_fan(2)
    M = ToricDivisor(model, {(1, 0): 1, (-1, 2): 1, (0, -1): 1})
    P = GeneralizedPair(X, ToricDivisor(X, {}), BNefDivisor(model, M))
    rep = crepant_rays(P, model)
    assert (0, 1) in rep.lc_places
    with pytest.raises(PairError):
        crepant_rays(P, p2_fan())


def test_adjunction_degree_identity():
    rng = random.Random(13)
    X = hirzebruch_fan(2)
    for _ in range(20):
        rho = rng.choice(X.rays)
        coeffs = {rho: 1}
        for r in X.rays:
            if r != rho:
                coeffs[r] = Fraction(rng.randint(0, 3), 3)
        P = GeneralizedPair(X, ToricDivisor(X, coeffs), zero_moduli(X))
        adjoint, data = adjunction_to_invariant_curve(P, rho)
        lhs = intersect_with_ray(
            canonical_divisor(X) + P.boundary + trace(P), rho
        )
        assert lhs == adjoint.degree()
        assert data.curve_ray == rho
    with pytest.raises(PairError):
        adjunction_to_invariant_curve(_boundary_pair(X, {}), (1, 0))


def test_adjunction_local_indices_on_singular_fan():
    X = Fan([(0, 1), (-2, -1), (2, -1)])
    P = _boundary_pair(X)
    adjoint, data = adjunction_to_invariant_curve(P, (0, 1))
    assert sorted(s["local_index"] for s in data.sides) == [2, 2]
    assert adjoint.degree() == intersect_with_ray(
        canonical_divisor(X) + P.boundary, (0, 1)
    )


def test_discrepancy_monotone_under_larger_boundary():
    """Enlarging the boundary never increases any log discrepancy, and klt
    implies lc on every sampled pair."""
    rng = random.Random(21)
    X = Fan([(0, 1), (-2, -1), (2, -1)])
    for _ in range(15):
        coeffs = {r: Fraction(rng.randint(0, 2), 3) for r in X.rays}
        P = GeneralizedPair(X, ToricDivisor(X, coeffs), zero_moduli(X))
        bigger = {r: min(Fraction(1), c + Fraction(1, 3)) for r, c in coeffs.items()}
        Q = GeneralizedPair(X, ToricDivisor(X, bigger), zero_moduli(X))
        Z = computation_fan(P)
        tP, tQ = discrepancy_table(P, Z), discrepancy_table(Q, Z)
        assert all(tQ[e] <= tP[e] for e in Z.rays)
        if is_gklt(P):
            assert is_glc(P)


def test_pair_json_roundtrip():
    base = fn_fan(2)
    model = hirzebruch_fan(2)
    M = ToricDivisor(model, {(1, 0): 1, (-1, 2): 1, (0, -1): 1})
    P = GeneralizedPair(
        base, ToricDivisor(base, {(1, 0): Fraction(1, 2)}), BNefDivisor(model, M)
    )
    Q = pair_from_json(P.to_json())
    assert Q.base == P.base
    assert Q.boundary == P.boundary
    assert Q.moduli.model == P.moduli.model
    assert Q.moduli.divisor == P.moduli.divisor
