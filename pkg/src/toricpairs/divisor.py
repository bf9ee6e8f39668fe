"""Toric divisors on complete 2D fans: support functions, pullback and
pushforward, Mumford intersection numbers, Cartier/nef/ample tests, divisor
classes and span ranks.  Everything is exact over Fraction."""

from fractions import Fraction

from .fan import Fan, FanMorphism, minimal_resolution
from .lattice import det2


class DivisorError(ValueError):
    pass


def _q(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class ToricDivisor:
    """A Q-Weil divisor sum(coeffs[ray] * D_ray) on a fixed fan.

    Missing rays read as coefficient 0.  Immutable after construction; the
    per-cone linear data is precomputed so shared instances are safe under
    concurrent reads.
    """

    __slots__ = ("fan", "coeffs", "_pl")

    def __init__(self, fan, coeffs=None):
        cmap = {}
        for ray, c in (coeffs or {}).items():
            ray = (int(ray[0]), int(ray[1]))
            if ray not in fan.rays:
                raise DivisorError(f"{ray} is not a ray of the fan")
            c = _q(c)
            if c != 0:
                cmap[ray] = c
        object.__setattr__(self, "fan", fan)
        object.__setattr__(self, "coeffs", cmap)
        object.__setattr__(self, "_pl", None)

    def __setattr__(self, *a):
        raise AttributeError("ToricDivisor is immutable")

    def coeff(self, ray):
        return self.coeffs.get(tuple(ray), Fraction(0))

    def __add__(self, other):
        if self.fan is not other.fan and self.fan != other.fan:
            raise DivisorError("divisors live on different fans")
        out = dict(self.coeffs)
        for r, c in other.coeffs.items():
            out[r] = out.get(r, Fraction(0)) + c
        return ToricDivisor(self.fan, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, k):
        k = _q(k)
        return ToricDivisor(self.fan, {r: k * c for r, c in self.coeffs.items()})

    def __neg__(self):
        return (-1) * self

    def __eq__(self, other):
        return (
            isinstance(other, ToricDivisor)
            and self.fan == other.fan
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.fan, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        terms = " + ".join(f"{c}*D{r}" for r, c in sorted(self.coeffs.items()))
        return f"ToricDivisor({terms or '0'})"

    def is_zero(self):
        return not self.coeffs

    def to_json(self):
        return {
            "fan": self.fan.to_json(),
            "coeffs": [
                [f"{r[0]},{r[1]}", str(c)] for r, c in sorted(self.coeffs.items())
            ],
        }


def divisor_from_json(data):
    from .fan import fan_from_json

    fan = fan_from_json(data["fan"])
    coeffs = {}
    for key, val in data["coeffs"]:
        x, y = key.split(",")
        coeffs[(int(x), int(y))] = Fraction(val)
    return ToricDivisor(fan, coeffs)


def canonical_divisor(X):
    """K_X = -sum of all invariant divisors."""
    return ToricDivisor(X, {r: Fraction(-1) for r in X.rays})


def pl_function(D):
    """Per-cone linear functionals m_sigma with <m_sigma, v> = -coeff(v) on
    both rays of the cone.  Keyed by the (u, v) cone tuples of the fan."""
    if D._pl is not None:
        return D._pl
    out = {}
    for u, v in D.fan.cones():
        d = det2(u, v)
        bu, bv = -D.coeff(u), -D.coeff(v)
        # solve (m . u, m . v) = (bu, bv)
        m1 = Fraction(bu * v[1] - bv * u[1], d)
        m2 = Fraction(bv * u[0] - bu * v[0], d)
        out[(u, v)] = (m1, m2)
    object.__setattr__(D, "_pl", out)
    return out


def support_value(D, e):
    """-coeff-extension of D at the lattice vector e (PL in e)."""
    u, v = D.fan.cone_containing(e)
    m1, m2 = pl_function(D)[(u, v)]
    return -(m1 * e[0] + m2 * e[1])


def pullback(D, f: FanMorphism):
    """Pullback along f: source -> target; D lives on f.target."""
    if D.fan != f.target:
        raise DivisorError("divisor does not live on the morphism target")
    return ToricDivisor(f.source, {e: support_value(D, e) for e in f.source.rays})


def pushforward(D, f: FanMorphism):
    """Drop coefficients on the exceptional rays of f."""
    if D.fan != f.source:
        raise DivisorError("divisor does not live on the morphism source")
    return ToricDivisor(
        f.target, {r: c for r, c in D.coeffs.items() if r in f.target.rays}
    )


def _smooth_self_int(X, r):
    """Self-intersection of D_r on a smooth fan: u + w = a*r gives -a."""
    u, w = X.neighbors(r)
    s = (u[0] + w[0], u[1] + w[1])
    a = s[0] // r[0] if r[0] != 0 else s[1] // r[1]
    assert (a * r[0], a * r[1]) == s
    return -a


def _smooth_intersect_ray(D, r):
    """D . D_r on a smooth fan."""
    X = D.fan
    u, w = X.neighbors(r)
    return D.coeff(u) + D.coeff(w) + D.coeff(r) * _smooth_self_int(X, r)


def intersect(D1, D2):
    """Mumford intersection number of two Q-divisors on the same fan.

    On singular fans both divisors are pulled back to the minimal resolution,
    where the smooth toric rules apply.
    """
    if D1.fan != D2.fan:
        raise DivisorError("divisors live on different fans")
    X = D1.fan
    if not X.is_smooth():
        Y, f = minimal_resolution(X)
        return intersect(pullback(D1, f), pullback(D2, f))
    total = Fraction(0)
    for r, c in D2.coeffs.items():
        total += c * _smooth_intersect_ray(D1, r)
    return total


def intersect_with_ray(D, r):
    """D . D_r (Mumford) for r a ray of the fan of D."""
    X = D.fan
    r = tuple(r)
    if X.is_smooth():
        return _smooth_intersect_ray(D, r)
    Y, f = minimal_resolution(X)
    return intersect(pullback(D, f), ToricDivisor(Y, {r: 1}))


def is_cartier(D):
    return all(
        m1.denominator == 1 and m2.denominator == 1
        for m1, m2 in pl_function(D).values()
    )


def is_nef(D):
    return all(intersect_with_ray(D, r) >= 0 for r in D.fan.rays)


def is_ample(D):
    return all(intersect_with_ray(D, r) > 0 for r in D.fan.rays)


# ---------------------------------------------------------------------------
# Divisor classes: N^1(X)_Q as Q^(#rays - 2)
# ---------------------------------------------------------------------------

def _pivot_rays(X):
    """Two adjacent (hence independent) rays used to kill the character part."""
    return X.rays[0], X.rays[1]


def class_of(D):
    """Coordinates of D in N^1(X)_Q: subtract the unique principal divisor
    matching D on the two pivot rays, then read off the remaining rays."""
    X = D.fan
    r0, r1 = _pivot_rays(X)
    d = det2(r0, r1)
    c0, c1 = D.coeff(r0), D.coeff(r1)
    # m with <m, r0> = c0, <m, r1> = c1
    m1 = Fraction(c0 * r1[1] - c1 * r0[1], d)
    m2 = Fraction(c1 * r0[0] - c0 * r1[0], d)
    return tuple(
        D.coeff(r) - (m1 * r[0] + m2 * r[1])
        for r in X.rays
        if r not in (r0, r1)
    )


def class_representative(X, vec):
    """The divisor with the given class vector and coefficient 0 on the two
    pivot rays (the section of class_of used throughout)."""
    r0, r1 = _pivot_rays(X)
    rest = [r for r in X.rays if r not in (r0, r1)]
    if len(vec) != len(rest):
        raise DivisorError("class vector has wrong length")
    return ToricDivisor(X, dict(zip(rest, vec)))


def linear_equivalent(D1, D2, over_Q=True):
    """D1 ~ D2: over Q iff the class vectors agree; over Z additionally the
    realizing character must be integral."""
    if D1.fan != D2.fan:
        raise DivisorError("divisors live on different fans")
    if class_of(D1) != class_of(D2):
        return False
    if over_Q:
        return True
    X = D1.fan
    E = D1 - D2
    r0, r1 = _pivot_rays(X)
    d = det2(r0, r1)
    c0, c1 = E.coeff(r0), E.coeff(r1)
    m1 = Fraction(c0 * r1[1] - c1 * r0[1], d)
    m2 = Fraction(c1 * r0[0] - c0 * r1[0], d)
    if m1.denominator != 1 or m2.denominator != 1:
        return False
    return all(E.coeff(r) == m1 * r[0] + m2 * r[1] for r in X.rays)


def rank_of_vectors(vectors):
    """Rank over Q of a list of equal-length tuples, by Gaussian elimination."""
    rows = [list(map(_q, v)) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while col < ncols and rank < len(rows):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = rows[i][col] / prow[col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], prow)]
        rank += 1
        col += 1
    return rank


def span_rank(divisors):
    if not divisors:
        return 0
    fan = divisors[0].fan
    if any(D.fan != fan for D in divisors):
        raise DivisorError("divisors live on different fans")
    return rank_of_vectors([class_of(D) for D in divisors])


def is_torsion(D):
    """Q-trivial class; on a complete toric surface torsion means trivial."""
    return all(c == 0 for c in class_of(D))


# ---------------------------------------------------------------------------
# Nef cone lattice points (moduli component candidates)
# ---------------------------------------------------------------------------

def ray_intersection_vectors(X):
    """For each ray r, the linear functional on class space computing
    (class . D_r); rows indexed by X.rays order."""
    k = len(X.rays) - 2
    basis = []
    for i in range(k):
        vec = tuple(Fraction(1) if j == i else Fraction(0) for j in range(k))
        basis.append(class_representative(X, vec))
    return {
        r: tuple(intersect_with_ray(D, r) for D in basis) for r in X.rays
    }


def nef_lattice_points(X, bound):
    """Nonzero integer class vectors in the nef cone with sup-norm <= bound.

    Desk-scale generator set for moduli decompositions; deterministic order.
    """
    k = len(X.rays) - 2
    rows = ray_intersection_vectors(X)
    out = []

    def rec(prefix):
        if len(prefix) == k:
            if any(prefix):
                vec = tuple(Fraction(c) for c in prefix)
                if all(
                    sum(w * c for w, c in zip(rows[r], vec)) >= 0 for r in X.rays
                ):
                    out.append(vec)
            return
        for c in range(-bound, bound + 1):
            rec(prefix + [c])

    rec([])
    return out
