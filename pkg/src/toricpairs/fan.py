"""Complete 2D fans: construction, refinements, blow-ups, contractions,
minimal resolutions, GL(2,Z) equivalence and bounded enumeration."""

import functools
import itertools
import json

from .lattice import (
    DegenerateConeError,
    apply_matrix,
    cone_smoothing_rays,
    det2,
    mat_det,
    mat_inv_unimodular,
    mat_mul,
    primitive,
    vneg,
)


class FanError(ValueError):
    pass


def _angular_cmp(u, v):
    """Counterclockwise order starting at the positive x-axis."""
    def half(w):
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1
    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    d = det2(u, v)
    if d > 0:
        return -1
    if d < 0:
        return 1
    return 0


def sort_rays_ccw(rays):
    return tuple(sorted(rays, key=functools.cmp_to_key(_angular_cmp)))


class Fan:
    """A complete fan in Z^2, stored as its cyclically ordered primitive rays.

    Immutable value object; two fans are equal iff their sorted ray lists are
    equal (lattice equivalence is a separate, explicit test).
    """

    __slots__ = ("rays", "_hash")

    def __init__(self, rays):
        prim = []
        for r in rays:
            p = primitive((int(r[0]), int(r[1])))
            if p in prim:
                raise FanError(f"repeated or parallel ray {r}")
            prim.append(p)
        if len(prim) < 3:
            raise FanError("a complete 2D fan needs at least 3 distinct rays")
        ordered = sort_rays_ccw(prim)
        for i, u in enumerate(ordered):
            v = ordered[(i + 1) % len(ordered)]
            if det2(u, v) <= 0:
                # opposite rays with nothing in between, or other degeneracy
                raise FanError(
                    f"consecutive rays {u}, {v} do not span a strictly convex cone"
                )
        object.__setattr__(self, "rays", ordered)
        object.__setattr__(self, "_hash", hash(ordered))

    def __setattr__(self, *a):
        raise AttributeError("Fan is immutable")

    def __eq__(self, other):
        return isinstance(other, Fan) and self.rays == other.rays

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Fan({list(self.rays)})"

    def __len__(self):
        return len(self.rays)

    def cones(self):
        """Consecutive ray pairs (u, v), counterclockwise, including wrap-around."""
        n = len(self.rays)
        return [(self.rays[i], self.rays[(i + 1) % n]) for i in range(n)]

    def has_ray(self, r):
        return primitive(r) in self.rays

    def neighbors(self, r):
        i = self.rays.index(primitive(r))
        n = len(self.rays)
        return self.rays[(i - 1) % n], self.rays[(i + 1) % n]

    def cone_containing(self, e):
        """The cone (u, v) with e in its closure; e any nonzero vector."""
        for u, v in self.cones():
            if det2(u, e) >= 0 and det2(e, v) >= 0:
                return (u, v)
        raise FanError(f"no cone contains {e}")  # pragma: no cover

    def is_smooth(self):
        return all(det2(u, v) == 1 for u, v in self.cones())

    def max_cone_det(self):
        return max(det2(u, v) for u, v in self.cones())

    def to_json(self):
        return {"rays": [list(r) for r in self.rays]}


def new_fan(rays):
    return Fan(rays)


def fan_from_json(data):
    if isinstance(data, str):
        data = json.loads(data)
    return Fan([tuple(r) for r in data["rays"]])


class FanMorphism:
    """A toric birational morphism source -> target, source refining target."""

    __slots__ = ("source", "target", "exceptional_rays")

    def __init__(self, source, target):
        missing = [r for r in target.rays if r not in source.rays]
        if missing:
            raise FanError(f"target rays {missing} absent from source; not a refinement")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(
            self,
            "exceptional_rays",
            tuple(r for r in source.rays if r not in target.rays),
        )

    def __setattr__(self, *a):
        raise AttributeError("FanMorphism is immutable")

    def __repr__(self):
        return f"FanMorphism({len(self.source)} rays -> {len(self.target)} rays)"


class MfsStructure:
    """Mori fiber space structure: a pair of opposite rays giving X -> P^1."""

    __slots__ = ("fiber_ray_pair",)

    def __init__(self, v):
        object.__setattr__(self, "fiber_ray_pair", (v, vneg(v)))

    def __setattr__(self, *a):
        raise AttributeError("MfsStructure is immutable")

    def __repr__(self):
        return f"MfsStructure{self.fiber_ray_pair}"


@functools.lru_cache(maxsize=None)
def minimal_resolution(X):
    """Insert Hirzebruch-Jung rays into every singular cone.

    Returns (Y, morphism) with Y smooth and morphism.exceptional_rays the
    inserted rays.
    """
    rays = list(X.rays)
    for u, v in X.cones():
        rays.extend(cone_smoothing_rays(u, v))
    Y = Fan(rays)
    return Y, FanMorphism(Y, X)


def star_subdivision(X, r):
    r = primitive(r)
    if r in X.rays:
        raise FanError(f"{r} is already a ray")
    Y = Fan(list(X.rays) + [r])
    return Y, FanMorphism(Y, X)


def remove_ray(X, r):
    """Contract the invariant curve of ray r (divisorial contraction)."""
    r = primitive(r)
    if r not in X.rays:
        raise FanError(f"{r} is not a ray")
    if len(X.rays) <= 3:
        raise FanError("cannot remove a ray from a 3-ray fan")
    u, w = X.neighbors(r)
    if det2(u, w) <= 0:
        raise FanError(
            f"neighbors {u}, {w} of {r} do not span a strictly convex cone; "
            "the contraction is not divisorial"
        )
    return Fan([s for s in X.rays if s != r])


def mfs_structures(X):
    out = []
    seen = set()
    for v in X.rays:
        if v in seen:
            continue
        if vneg(v) in X.rays:
            seen.add(v)
            seen.add(vneg(v))
            out.append(MfsStructure(v))
    return out


def picard_rank(X):
    return len(X.rays) - 2


# ---------------------------------------------------------------------------
# GL(2,Z) equivalence and canonical forms
# ---------------------------------------------------------------------------

def _basis_map_to(u):
    """Some unimodular integer matrix g with g*u = (1,0); u primitive."""
    x, y = u
    # extended gcd: a*x + b*y = 1
    a, b = _ext_gcd(x, y)
    # rows: (a, b) and (-y, x); det = a*x + b*y = 1
    return ((a, b), (-y, x))


def _ext_gcd(x, y):
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def _normalized_pair_map(u, w):
    """The unique unimodular g with g*u = (1,0) and g*w = (k, d), 0 <= k < d.

    Here d = det2(u, w) > 0.  Unique because two such maps differ by a shear
    fixing (1,0), which the 0 <= k < d normalization pins down.
    """
    d = det2(u, w)
    g = _basis_map_to(u)
    k = apply_matrix(g, w)[0]
    m = -(k // d)  # shear count so that k + m*d = k mod d lands in [0, d)
    shear = ((1, m), (0, 1))
    return mat_mul(shear, g)


def _oriented_images(X):
    """All (sorted-ray-tuple, g) for normalized adjacent-pair maps of X."""
    out = []
    for u, w in X.cones():
        g = _normalized_pair_map(u, w)
        img = sort_rays_ccw(apply_matrix(g, r) for r in X.rays)
        out.append((img, g))
    return out


_FLIP = ((1, 0), (0, -1))


def canonical_form(X):
    """Lexicographically smallest GL(2,Z) image of the ray set.

    Returns (rays_tuple, g) with g unimodular and sort(g * rays(X)) minimal
    over all normalized adjacent-pair bases of X and of its reflection.
    """
    candidates = list(_oriented_images(X))
    flipped = Fan([apply_matrix(_FLIP, r) for r in X.rays])
    for img, g in _oriented_images(flipped):
        candidates.append((img, mat_mul(g, _FLIP)))
    return min(candidates, key=lambda p: p[0])


def lattice_equivalent(X, Y):
    """Witness matrix g in GL(2,Z) with g * rays(X) = rays(Y), or None."""
    if len(X.rays) != len(Y.rays):
        return None
    rx, gx = canonical_form(X)
    ry, gy = canonical_form(Y)
    if rx != ry:
        return None
    g = mat_mul(mat_inv_unimodular(gy), gx)
    assert mat_det(g) in (1, -1)
    assert sort_rays_ccw(apply_matrix(g, r) for r in X.rays) == Y.rays
    return g


def primitive_vectors(coord_bound):
    """All primitive vectors with |x|, |y| <= coord_bound, in a fixed order."""
    out = []
    for x in range(-coord_bound, coord_bound + 1):
        for y in range(-coord_bound, coord_bound + 1):
            if (x, y) != (0, 0):
                from math import gcd
                if gcd(abs(x), abs(y)) == 1:
                    out.append((x, y))
    return out


def enumerate_fans(coord_bound, max_rays, n_rays=None):
    """One complete fan per lattice-equivalence class, within the bounds.

    Every complete fan whose rays have coordinates bounded by coord_bound and
    at most max_rays rays is equivalent to exactly one returned fan.  Output
    order is deterministic (sorted canonical forms).
    """
    if coord_bound < 1 or max_rays < 3:
        raise ValueError("need coord_bound >= 1 and max_rays >= 3")
    vecs = primitive_vectors(coord_bound)
    sizes = [n_rays] if n_rays is not None else range(3, max_rays + 1)
    classes = {}
    for k in sizes:
        for combo in itertools.combinations(vecs, k):
            try:
                F = Fan(combo)
            except FanError:
                continue
            key = canonical_form(F)[0]
            if key not in classes:
                classes[key] = F
    return [classes[k] for k in sorted(classes)]


# ---------------------------------------------------------------------------
# Recognizers for the named surfaces
# ---------------------------------------------------------------------------

P2_FAN = None  # initialized below


def p2_fan():
    return Fan([(1, 0), (0, 1), (-1, -1)])


def p1xp1_fan():
    return Fan([(1, 0), (0, 1), (-1, 0), (0, -1)])


def hirzebruch_fan(n):
    """Sigma_n in the convention {(1,0),(0,1),(-1,n),(0,-1)}; C0 is (0,1)."""
    if n < 0:
        raise ValueError("n >= 0 required")
    if n == 0:
        return p1xp1_fan()
    return Fan([(1, 0), (0, 1), (-1, n), (0, -1)])


def fn_fan(n):
    """The cone-over-rational-normal-curve surface F_n = Sigma_n / C0 contracted."""
    if n < 2:
        raise ValueError("F_n needs n >= 2")
    return Fan([(1, 0), (-1, n), (0, -1)])


def is_P2(X):
    return lattice_equivalent(X, p2_fan()) is not None


def is_hirzebruch(X):
    """n >= 0 when X is a smooth 4-ray (Hirzebruch) fan, else None."""
    if len(X.rays) != 4 or not X.is_smooth():
        return None
    # n is minus the smallest self-intersection among invariant curves
    worst = 0
    for r in X.rays:
        u, w = X.neighbors(r)
        s = u[0] + w[0], u[1] + w[1]
        # u + w = a * r with a = self-intersection negated
        a = s[0] // r[0] if r[0] != 0 else s[1] // r[1]
        worst = max(worst, a)
    assert lattice_equivalent(X, hirzebruch_fan(worst)) is not None
    return worst


def is_Fn(X):
    """n >= 2 when X is lattice-equivalent to the fan of F_n, else None."""
    if len(X.rays) != 3:
        return None
    dets = sorted(det2(u, v) for u, v in X.cones())
    if dets[0] != 1 or dets[1] != 1 or dets[2] < 2:
        return None
    n = dets[2]
    if lattice_equivalent(X, fn_fan(n)) is not None:
        return n
    return None
