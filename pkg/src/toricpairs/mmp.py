"""Minimal model program steps on complete toric surfaces, and the two
constructive fan lemmas used to reduce Picard rank while controlling log
discrepancies."""

from fractions import Fraction

from .divisor import ToricDivisor, canonical_divisor, intersect_with_ray
from .fan import (
    Fan,
    FanMorphism,
    FanError,
    lattice_equivalent,
    mfs_structures,
    minimal_resolution,
    p1xp1_fan,
    picard_rank,
    remove_ray,
    star_subdivision,
    is_Fn,
)
from .genpair import GeneralizedPair, log_discrepancy, zero_moduli
from .lattice import cone_smoothing_rays, det2, vneg


class MmpError(ValueError):
    pass


def _trivial_pair(X):
    return GeneralizedPair(X, ToricDivisor(X, {}), zero_moduli(X))


def is_canonical(X):
    """Every exceptional ray of the minimal resolution has log discrepancy
    >= 1 with respect to (X, 0, 0)."""
    Y, f = minimal_resolution(X)
    P = _trivial_pair(X)
    return all(log_discrepancy(P, e) >= 1 for e in f.exceptional_rays)


def k_negative_rays(X):
    """Contractible rays whose invariant curve meets K_X negatively.

    Returns (ray, K . D_ray) pairs, sorted by ray, for the rays where
    remove_ray is defined and the intersection is negative.
    """
    K = canonical_divisor(X)
    out = []
    for r in sorted(X.rays):
        if len(X.rays) <= 3:
            break
        u, w = X.neighbors(r)
        if det2(u, w) <= 0:
            continue
        val = intersect_with_ray(K, r)
        if val < 0:
            out.append((r, val))
    return out


class MmpTrace:
    """Record of a K-MMP run: contraction steps and the terminal state."""

    __slots__ = ("start", "steps", "final", "mfs")

    def __init__(self, start, steps, final, mfs):
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "steps", tuple(steps))
        object.__setattr__(self, "final", final)
        object.__setattr__(self, "mfs", tuple(mfs))

    def __setattr__(self, *a):
        raise AttributeError("MmpTrace is immutable")

    def terminal_kind(self):
        return "rank1" if picard_rank(self.final) == 1 else "mfs"

    def __repr__(self):
        return (
            f"MmpTrace({len(self.steps)} steps, terminal={self.terminal_kind()})"
        )

    def to_json(self):
        return {
            "start": self.start.to_json(),
            "steps": [
                {
                    "contracted_ray": list(r),
                    "k_intersection": str(v),
                    "fan": F.to_json(),
                }
                for r, v, F in self.steps
            ],
            "final": self.final.to_json(),
            "terminal": self.terminal_kind(),
            "mfs": [list(m.fiber_ray_pair[0]) for m in self.mfs],
        }


def run_k_mmp(X):
    """Contract the lexicographically smallest K-negative removable ray until
    none remain; terminal state is a Picard-rank-1 fan or a fan carrying its
    Mori fiber space structures."""
    steps = []
    current = X
    while True:
        neg = k_negative_rays(current)
        if not neg:
            break
        r, val = neg[0]
        current = remove_ray(current, r)
        steps.append((r, val, current))
    mfs = mfs_structures(current) if picard_rank(current) > 1 else []
    return MmpTrace(X, steps, current, mfs)


class Rho2Model:
    """Output of the rank-2 lemma: Y extracts at most one ray over X and
    contracts onto a rank-1 fan Z."""

    __slots__ = ("Y", "Z", "extracted_ray", "discrepancy", "to_X", "to_Z")

    def __init__(self, Y, Z, extracted_ray, discrepancy, to_X, to_Z):
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "extracted_ray", extracted_ray)
        object.__setattr__(self, "discrepancy", discrepancy)
        object.__setattr__(self, "to_X", to_X)
        object.__setattr__(self, "to_Z", to_Z)

    def __setattr__(self, *a):
        raise AttributeError("Rho2Model is immutable")

    def __repr__(self):
        return (
            f"Rho2Model(extracted={self.extracted_ray}, a={self.discrepancy})"
        )


def rho2_intermediate_model(X):
    """For a rank-2 fan not equivalent to P1 x P1, build Y -> X extracting at
    most one ray with log discrepancy in (0,1] and a contraction Y -> Z onto
    a rank-1 fan.  Returns None exactly for P1 x P1."""
    if picard_rank(X) != 2:
        raise MmpError("rho2_intermediate_model needs Picard rank 2")
    if lattice_equivalent(X, p1xp1_fan()) is not None:
        return None
    # existing divisorial contraction: no extraction needed
    for r in sorted(X.rays):
        u, w = X.neighbors(r)
        if det2(u, w) > 0:
            Z = remove_ray(X, r)
            assert picard_rank(Z) == 1
            return Rho2Model(X, Z, None, None, FanMorphism(X, X), FanMorphism(X, Z))
    # no contraction: the rays are {v1, v2, -v1, -v2} and some cone is
    # singular; insert the first smoothing ray of the smallest singular cone
    assert all(vneg(r) in X.rays for r in X.rays)
    cone = min((u, v) for u, v in X.cones() if det2(u, v) > 1)
    v1, v2 = cone
    v3 = cone_smoothing_rays(v1, v2)[0]
    P = _trivial_pair(X)
    a = log_discrepancy(P, v3)
    assert 0 < a <= 1, a
    Y, to_x = star_subdivision(X, v3)
    Z = remove_ray(remove_ray(Y, v1), v2)
    assert picard_rank(Z) == 1 and v3 in Z.rays
    return Rho2Model(Y, Z, v3, a, to_x, FanMorphism(Y, Z))


class Rho1Model:
    """Output of the rank-1 lemma: Y extracts E (and possibly one auxiliary
    ray) over X; Z is a rank-1 fan containing E."""

    __slots__ = ("Y", "Z", "E", "discrepancy", "to_X", "to_Z")

    def __init__(self, Y, Z, E, discrepancy, to_X, to_Z):
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "discrepancy", discrepancy)
        object.__setattr__(self, "to_X", to_X)
        object.__setattr__(self, "to_Z", to_Z)

    def __setattr__(self, *a):
        raise AttributeError("Rho1Model is immutable")

    def __repr__(self):
        return f"Rho1Model(E={self.E}, a={self.discrepancy})"


def rho1_noncanonical_model(X):
    """For a non-canonical rank-1 fan not equivalent to any F_n, extract a
    ray E with log discrepancy in (0,1) and contract onto another rank-1 fan
    that keeps E."""
    if picard_rank(X) != 1:
        raise MmpError("rho1_noncanonical_model needs Picard rank 1")
    if is_canonical(X):
        raise MmpError("X is canonical")
    if is_Fn(X) is not None:
        raise MmpError("X is a cone over a rational normal curve (F_n)")
    P = _trivial_pair(X)
    _, res = minimal_resolution(X)
    cands = sorted(
        e for e in res.exceptional_rays if 0 < log_discrepancy(P, e) < 1
    )
    assert cands, "non-canonical fan must have a resolution ray with a < 1"
    v4 = cands[0]
    u, w = X.cone_containing(v4)
    (t,) = [r for r in X.rays if r not in (u, w)]
    Y, to_x = star_subdivision(X, v4)
    if v4 != vneg(t):
        # contract whichever of u, w leaves a strictly convex fan
        if det2(t, v4) > 0:
            Z = remove_ray(Y, u)
        else:
            assert det2(v4, t) > 0
            Z = remove_ray(Y, w)
        a = log_discrepancy(P, v4)
        assert 0 < a < 1 and v4 in Z.rays and picard_rank(Z) == 1
        return Rho1Model(Y, Z, v4, a, to_x, FanMorphism(Y, Z))
    # v4 = -t: extract a second ray from a singular cone adjacent to v4
    if det2(u, v4) > 1:
        v5 = cone_smoothing_rays(u, v4)[0]
        drop = (u, v4)
    elif det2(v4, w) > 1:
        v5 = cone_smoothing_rays(v4, w)[0]
        drop = (v4, w)
    else:
        # both adjacent cones smooth would make X an F_n, which is excluded
        raise AssertionError("unreachable: smooth cones adjacent to -t imply F_n")
    a = log_discrepancy(P, v5)
    assert 0 < a < 1, a
    Y2 = Fan(list(Y.rays) + [v5])
    Z = remove_ray(remove_ray(Y2, drop[0]), drop[1])
    assert v5 in Z.rays and picard_rank(Z) == 1
    return Rho1Model(Y2, Z, v5, a, FanMorphism(Y2, X), FanMorphism(Y2, Z))
