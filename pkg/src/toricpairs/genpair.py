"""Generalized pairs (X, B, M) on complete toric surfaces.

B is an invariant boundary with coefficients in [0,1]; M is a b-nef divisor
presented by a nef divisor on a model fan refining the base.  Log
discrepancies, glc/gklt/gLCY predicates, crepant-ray reports and adjunction
to invariant curves are all computed exactly.
"""

from fractions import Fraction

from .divisor import (
    ToricDivisor,
    canonical_divisor,
    divisor_from_json,
    intersect_with_ray,
    is_nef,
    is_torsion,
    pushforward,
    support_value,
)
from .fan import Fan, FanMorphism, fan_from_json, minimal_resolution
from .lattice import det2, primitive


class PairError(ValueError):
    pass


class BNefDivisor:
    """A b-nef divisor: a nef divisor fixed on one model where it descends.

    The trace on any fan refined by the model is the pushforward; the trace
    on any refinement of the model is the pullback of the model divisor.
    """

    __slots__ = ("model", "divisor")

    def __init__(self, model, divisor):
        if divisor.fan != model:
            raise PairError("moduli divisor must live on its model fan")
        if not is_nef(divisor):
            raise PairError("moduli divisor must be nef on its model")
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "divisor", divisor)

    def __setattr__(self, *a):
        raise AttributeError("BNefDivisor is immutable")

    def __repr__(self):
        return f"BNefDivisor({self.divisor!r})"

    def trace_on(self, X):
        """Trace on a fan X whose rays are a subset of the model's rays."""
        return pushforward(self.divisor, FanMorphism(self.model, X))


def zero_moduli(X):
    return BNefDivisor(X, ToricDivisor(X, {}))


class OrbifoldStructure:
    """Map ray -> n_P >= 1; rays not listed have n_P = 1."""

    __slots__ = ("indices",)

    def __init__(self, indices=None):
        idx = {}
        for ray, n in (indices or {}).items():
            ray = (int(ray[0]), int(ray[1]))
            n = int(n)
            if n < 1:
                raise PairError("orbifold indices must be >= 1")
            if n > 1:
                idx[ray] = n
        object.__setattr__(self, "indices", idx)

    def __setattr__(self, *a):
        raise AttributeError("OrbifoldStructure is immutable")

    def index(self, ray):
        return self.indices.get(tuple(ray), 1)

    def __repr__(self):
        return f"OrbifoldStructure({self.indices})"


class GeneralizedPair:
    """(base fan, boundary divisor, b-nef moduli divisor).

    The moduli model must refine the base (its rays contain the base rays).
    """

    __slots__ = ("base", "boundary", "moduli")

    def __init__(self, base, boundary, moduli):
        if boundary.fan != base:
            raise PairError("boundary must live on the base fan")
        if any(c < 0 or c > 1 for c in boundary.coeffs.values()):
            raise PairError("boundary coefficients must lie in [0,1]")
        missing = [r for r in base.rays if r not in moduli.model.rays]
        if missing:
            raise PairError(f"moduli model does not refine the base: missing {missing}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "moduli", moduli)

    def __setattr__(self, *a):
        raise AttributeError("GeneralizedPair is immutable")

    def __repr__(self):
        return (
            f"GeneralizedPair(base={len(self.base)} rays, "
            f"model={len(self.moduli.model)} rays)"
        )

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "boundary": self.boundary.to_json()["coeffs"],
            "moduli_model": self.moduli.model.to_json(),
            "moduli": self.moduli.divisor.to_json()["coeffs"],
        }


def pair_from_json(data):
    base = fan_from_json(data["base"])
    boundary = divisor_from_json({"fan": data["base"], "coeffs": data["boundary"]})
    model = fan_from_json(data["moduli_model"])
    mdiv = divisor_from_json({"fan": data["moduli_model"], "coeffs": data["moduli"]})
    return GeneralizedPair(base, boundary, BNefDivisor(model, mdiv))


def trace(P):
    """Trace of the moduli b-divisor on the base fan."""
    return P.moduli.trace_on(P.base)


def _log_divisor(P):
    """K_base + B + trace(M) as a divisor on the base."""
    return canonical_divisor(P.base) + P.boundary + trace(P)


def log_discrepancy(P, e):
    """Generalized log discrepancy of the toric valuation at primitive e.

    Writing pullback(K+B+M_X) = K_Z + B_Z + M_Z on a smooth common
    refinement Z containing e, the value 1 - coeff_e(B_Z) simplifies to the
    difference of the two support-function values below, which is linear in
    e on every cone of the common refinement of base and moduli model.
    """
    e = primitive(e)
    return support_value(P.moduli.divisor, e) - support_value(_log_divisor(P), e)


def computation_fan(P, extra_rays=()):
    """Smooth common refinement of base, moduli model and any extra rays."""
    rays = set(P.base.rays) | set(P.moduli.model.rays)
    rays.update(primitive(e) for e in extra_rays)
    Z, _ = minimal_resolution(Fan(rays))
    return Z


def discrepancy_table(P, model=None):
    """Log discrepancy at every ray of the given (default: computation) fan."""
    Z = model if model is not None else computation_fan(P)
    return {e: log_discrepancy(P, e) for e in Z.rays}


def is_glc(P):
    """All generalized log discrepancies nonnegative.

    The discrepancy function is linear on the cones of the common
    refinement, so its minimum over all valuations is attained at a ray.
    """
    table = discrepancy_table(P)
    return all(a >= 0 for a in table.values())


def is_gklt(P):
    """All generalized log discrepancies strictly positive."""
    table = discrepancy_table(P)
    return all(a > 0 for a in table.values())


def is_glcy(P):
    """K + B + M_X trivial as a Q-divisor class (generalized log Calabi-Yau
    numerically; on a toric surface Q-linear and numerical triviality agree),
    together with generalized log canonicity."""
    return is_glc(P) and is_torsion(_log_divisor(P))


class CrepantReport:
    """Rays of a model with log discrepancy exactly 0 (lc places) or exactly
    1 (crepant divisors), plus the cones of the computation fan on which the
    discrepancy function vanishes identically."""

    __slots__ = ("lc_places", "crepant", "lc_cones")

    def __init__(self, lc_places, crepant, lc_cones):
        object.__setattr__(self, "lc_places", tuple(lc_places))
        object.__setattr__(self, "crepant", tuple(crepant))
        object.__setattr__(self, "lc_cones", tuple(lc_cones))

    def __setattr__(self, *a):
        raise AttributeError("CrepantReport is immutable")

    def __repr__(self):
        return (
            f"CrepantReport(lc_places={list(self.lc_places)}, "
            f"crepant={list(self.crepant)}, lc_cones={list(self.lc_cones)})"
        )


def crepant_rays(P, model):
    """Classify rays of `model` by log discrepancy 0 or 1.

    A cone of the computation fan refined by `model` is flagged when the
    discrepancy function is zero on both of its rays; by linearity it then
    vanishes on the whole cone (infinitely many lc places).
    """
    missing = [r for r in P.base.rays if r not in model.rays]
    if missing:
        raise PairError(f"model does not refine the base: missing {missing}")
    table = discrepancy_table(P, model)
    lc = [e for e, a in table.items() if a == 0]
    crep = [e for e, a in table.items() if a == 1]
    Z = computation_fan(P, model.rays)
    lc_cones = [
        (u, v)
        for u, v in Z.cones()
        if log_discrepancy(P, u) == 0 and log_discrepancy(P, v) == 0
    ]
    return CrepantReport(lc, crep, lc_cones)


class AdjunctionData:
    """Local data of adjunction to the invariant curve of ray `curve_ray`.

    `sides` has one entry per fixed point of the curve, keyed by the
    neighboring ray of the base fan on that side, with the local index i_Q
    (determinant of the adjacent 2-cone), the adjacent ray of the smooth
    computation fan, and the boundary coefficient produced at that point.
    """

    __slots__ = ("curve_ray", "sides", "moduli_degree")

    def __init__(self, curve_ray, sides, moduli_degree):
        object.__setattr__(self, "curve_ray", curve_ray)
        object.__setattr__(self, "sides", tuple(sides))
        object.__setattr__(self, "moduli_degree", moduli_degree)

    def __setattr__(self, *a):
        raise AttributeError("AdjunctionData is immutable")

    def __repr__(self):
        return (
            f"AdjunctionData(curve={self.curve_ray}, sides={list(self.sides)}, "
            f"moduli_degree={self.moduli_degree})"
        )


class PointPair:
    """A pair on P^1: two marked point coefficients plus a moduli degree."""

    __slots__ = ("point_coeffs", "moduli_degree")

    def __init__(self, point_coeffs, moduli_degree):
        object.__setattr__(self, "point_coeffs", tuple(point_coeffs))
        object.__setattr__(self, "moduli_degree", moduli_degree)

    def __setattr__(self, *a):
        raise AttributeError("PointPair is immutable")

    def degree(self):
        """deg(K_P1 + B + M)."""
        return Fraction(-2) + sum(self.point_coeffs) + self.moduli_degree

    def __repr__(self):
        return f"PointPair(points={list(self.point_coeffs)}, M={self.moduli_degree})"


def adjunction_to_invariant_curve(P, rho):
    """Adjoint pair on the invariant curve D_rho (requires coeff 1 in B).

    On a smooth common refinement Z, pullback(K+B+M_X) = K_Z + B_Z + M_Z
    with D_rho appearing in B_Z with coefficient 1; restricting to D_rho
    places the coefficient of each adjacent ray of Z at the corresponding
    fixed point, and the moduli restricts with degree M_Z . D_rho.
    """
    rho = primitive(rho)
    if P.boundary.coeff(rho) != 1:
        raise PairError(f"boundary coefficient at {rho} must be 1 for adjunction")
    Z = computation_fan(P)
    prev_z, next_z = Z.neighbors(rho)
    prev_x, next_x = P.base.neighbors(rho)
    # each fixed point of D_rho lies on exactly two invariant divisors of Z,
    # one of which is D_rho itself; the adjacent ray is never rho
    assert prev_z != rho and next_z != rho and prev_z != next_z
    sides = []
    coeffs = []
    for wz, wx, i_q in (
        (prev_z, prev_x, det2(prev_x, rho)),
        (next_z, next_x, det2(rho, next_x)),
    ):
        c = 1 - log_discrepancy(P, wz)  # coefficient of wz in B_Z
        coeffs.append(c)
        sides.append(
            {
                "base_neighbor": wx,
                "local_index": i_q,
                "adjacent_ray": wz,
                "point_coeff": c,
            }
        )
    m_fan = P.moduli.model
    m_deg = sum(
        intersect_with_ray(P.moduli.divisor, r)
        for r in ((rho,) if rho in m_fan.rays else ())
    )
    # rho is a base ray and the model refines the base, so rho is in m_fan
    assert rho in m_fan.rays
    adjoint = PointPair(coeffs, m_deg)
    data = AdjunctionData(rho, sides, m_deg)
    # exact degree identity: (K+B+M_X) . D_rho on the base equals the degree
    # of the adjoint pair on P^1
    lhs = intersect_with_ray(_log_divisor(P), rho)
    assert lhs == adjoint.degree(), (lhs, adjoint)
    return adjoint, data
