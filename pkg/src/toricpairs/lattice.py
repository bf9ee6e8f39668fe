"""Exact 2D lattice arithmetic: primitive vectors, determinants, cone smoothing.

Rays are plain ``(x, y)`` tuples of Python ints.  All arithmetic is exact;
floating point is never used anywhere in this package.
"""

from math import gcd


class DegenerateConeError(ValueError):
    """Raised for cones that are not strictly convex (det <= 0)."""


def primitive(v):
    """Divide v by gcd(|x|, |y|); rejects the zero vector."""
    x, y = v
    if x == 0 and y == 0:
        raise ValueError("zero vector has no primitive representative")
    g = gcd(abs(x), abs(y))
    return (x // g, y // g)


def is_primitive(v):
    x, y = v
    return (x, y) != (0, 0) and gcd(abs(x), abs(y)) == 1


def det2(u, v):
    """Determinant of the 2x2 matrix with rows u, v."""
    return u[0] * v[1] - u[1] * v[0]


def vadd(u, v):
    return (u[0] + v[0], u[1] + v[1])


def vneg(v):
    return (-v[0], -v[1])


def vscale(k, v):
    return (k * v[0], k * v[1])


def apply_matrix(g, v):
    """Apply the 2x2 integer matrix g = ((a,b),(c,d)) to the column vector v."""
    (a, b), (c, d) = g
    return (a * v[0] + b * v[1], c * v[0] + d * v[1])


def mat_mul(g, h):
    (a, b), (c, d) = g
    (e, f), (p, q) = h
    return ((a * e + b * p, a * f + b * q), (c * e + d * p, c * f + d * q))


def mat_det(g):
    (a, b), (c, d) = g
    return a * d - b * c


def mat_inv_unimodular(g):
    """Inverse of an integer matrix with determinant +-1."""
    (a, b), (c, d) = g
    det = a * d - b * c
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return ((d * det, -b * det), (-c * det, a * det))


def cone_smoothing_rays(u, v):
    """Interior rays of the minimal (Hirzebruch-Jung) smoothing of the cone <u, v>.

    Returns the ordered list of primitive interior rays, from u towards v,
    such that all consecutive sub-cones are unimodular.  Empty for a smooth
    cone.  Requires u, v primitive with det2(u, v) > 0.
    """
    if not (is_primitive(u) and is_primitive(v)):
        raise ValueError("cone generators must be primitive")
    d = det2(u, v)
    if d <= 0:
        raise DegenerateConeError(f"cone <{u}, {v}> has determinant {d} <= 0")
    rays = []
    while d > 1:
        # unique m in [1, d) with (v + m*u) divisible by d; the resulting ray
        # w = (m/d)u + (1/d)v satisfies det(u, w) = 1 and det(w, v) = m < d
        for m in range(d):
            if (v[0] + m * u[0]) % d == 0 and (v[1] + m * u[1]) % d == 0:
                break
        else:  # pragma: no cover - impossible for primitive u
            raise RuntimeError("no Hirzebruch-Jung ray found")
        w = ((v[0] + m * u[0]) // d, (v[1] + m * u[1]) // d)
        assert det2(u, w) == 1
        rays.append(w)
        u = w
        d = det2(u, v)
    return rays
