"""Verification pipelines: case analyses on the five rank-one canonical
surfaces, an enumeration-based property suite for the complexity lower bound,
a Kobayashi-Ochiai style desk check, and reproduction of the two worked
examples.  Results are exact, deterministic and JSON-serializable."""

import itertools
import json
import os
import time
from fractions import Fraction

from .complexity import (
    Decomposition,
    feasibility_system,
    norm,
    search_min_complexity,
    zero_complexity_spans,
)
from .divisor import (
    ToricDivisor,
    canonical_divisor,
    class_of,
    class_representative,
    intersect,
    is_ample,
    is_cartier,
    is_nef,
    linear_equivalent,
    pullback,
    pushforward,
)
from .fan import (
    Fan,
    FanMorphism,
    enumerate_fans,
    fn_fan,
    hirzebruch_fan,
    is_Fn,
    is_P2,
    lattice_equivalent,
    minimal_resolution,
    p2_fan,
    picard_rank,
    remove_ray,
)
from .genpair import (
    BNefDivisor,
    GeneralizedPair,
    PairError,
    is_glc,
    is_gklt,
    is_glcy,
    log_discrepancy,
    pair_from_json,
    zero_moduli,
)
from .lattice import det2
from .lp import solve_lp
from .mmp import is_canonical

_FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")


def load_fixture(name):
    with open(os.path.join(_FIXTURE_DIR, name + ".json")) as fh:
        return json.load(fh)


def _fmt(v):
    """Render a value as a deterministic string (exact rationals kept)."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


class SubCheck:
    __slots__ = ("name", "expected", "computed", "passed")

    def __init__(self, name, expected, computed, passed):
        self.name = name
        self.expected = expected
        self.computed = computed
        self.passed = passed

    def to_json(self):
        return {
            "name": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "passed": self.passed,
        }

    def __repr__(self):
        mark = "ok" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: expected {self.expected}, got {self.computed}"


def _check(name, expected, computed):
    e, c = _fmt(expected), _fmt(computed)
    return SubCheck(name, e, c, e == c)


def _info(name, value):
    """Informational sub-check; always passes, records the computed value."""
    v = _fmt(value)
    return SubCheck(name, v, v, True)


class VerificationResult:
    __slots__ = ("case_id", "passed", "checks", "runtime", "counterexample")

    def __init__(self, case_id, checks, runtime, counterexample=None):
        self.case_id = case_id
        self.checks = list(checks)
        self.passed = all(c.passed for c in self.checks) and counterexample is None
        self.runtime = runtime
        if counterexample is None and not self.passed:
            bad = next(c for c in self.checks if not c.passed)
            counterexample = bad.to_json()
        self.counterexample = counterexample

    def to_json(self, include_runtime=False):
        out = {
            "case": self.case_id,
            "status": "PASS" if self.passed else "FAIL",
            "checks": [c.to_json() for c in self.checks],
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if include_runtime:
            out["runtime_s"] = round(self.runtime, 3)
        return out

    def __repr__(self):
        status = "PASS" if self.passed else "FAIL"
        return f"VerificationResult({self.case_id}: {status}, {len(self.checks)} checks)"


def _result(case_id, checks, t0, counterexample=None):
    return VerificationResult(case_id, checks, time.perf_counter() - t0,
                              counterexample)


# ---------------------------------------------------------------------------
# Case pipelines
# ---------------------------------------------------------------------------

def _trivial_discrepancies_one(X):
    """True when every ray of the minimal resolution has log discrepancy 1
    for the pair (X, 0, 0)."""
    Y, f = minimal_resolution(X)
    P = GeneralizedPair(X, ToricDivisor(X, {}), zero_moduli(X))
    return all(log_discrepancy(P, e) == 1 for e in f.exceptional_rays)


def _nef_cartier_grid(Z, bound):
    """Nonzero integer class vectors (x, y) in [0, bound)^2 whose divisor
    class is nef and Cartier on the rank-2 fan Z."""
    out = set()
    for x in range(bound):
        for y in range(bound):
            if (x, y) == (0, 0):
                continue
            D = class_representative(Z, (Fraction(x), Fraction(y)))
            if is_cartier(D) and is_nef(D):
                out.add((x, y))
    return out


def _lattice_points(c0_cl, f_cl, conds, bound):
    """Integer combinations a*c0 + b*f landing in [0, bound)^2, for (a, b)
    ranging over conds (an iterable of admissible integer pairs)."""
    out = set()
    for a, b in conds:
        v = (a * c0_cl[0] + b * f_cl[0], a * c0_cl[1] + b * f_cl[1])
        if 0 <= v[0] < bound and 0 <= v[1] < bound and v != (0, 0):
            out.add((int(v[0]), int(v[1])))
    return out


def _verify_case_32(n):
    t0 = time.perf_counter()
    if not 1 <= n <= 10:
        raise ValueError("3.2-n supports n in [1, 10]")
    X = hirzebruch_fan(n)
    c0 = ToricDivisor(X, {(0, 1): Fraction(1)})
    fib = ToricDivisor(X, {(1, 0): Fraction(1)})
    negK = (-Fraction(1)) * canonical_divisor(X)
    checks = [
        _check(
            "-K ~ 2*C0 + (n+2)*f",
            True,
            linear_equivalent(negK, 2 * c0 + (n + 2) * fib),
        )
    ]
    # nef cone characterization: a*C0 + b*f nef iff a >= 0 and b >= n*a
    grid_ok = True
    for a in range(-2, 6):
        for b in range(-2, 6):
            D = a * c0 + b * fib
            expected = a >= 0 and b >= n * a
            if is_nef(D) != expected or not is_cartier(D):
                grid_ok = False
    checks.append(_check("nef iff a>=0 and b>=n*a (Cartier throughout)",
                         True, grid_ok))
    res = feasibility_system("hirzebruch", n=n)
    checks.append(_check("decomposition system feasible", "feasible", res.status))
    expected_interval = (Fraction(1), Fraction(1)) if n >= 2 else (Fraction(0), Fraction(1))
    checks.append(_check("achievable alpha interval", expected_interval,
                         res.alpha_interval))
    if n >= 2:
        checks.append(_check("alpha forced to 1 (boundary not klt)", True,
                             res.alpha_interval == (Fraction(1), Fraction(1))))
    return _result(f"3.2-{n}", checks, t0)


def _verify_case_41():
    t0 = time.perf_counter()
    fx = load_fixture("case41")
    X = Fan([tuple(r) for r in fx["fan"]])
    Y, f = minimal_resolution(X)
    expected_res = {tuple(r) for r in fx["resolution"]}
    checks = [
        _check("minimal resolution ray set", sorted(expected_res),
               sorted(Y.rays)),
    ]
    models = [Fan([tuple(r) for r in rays]) for rays in fx["rank_one_models"]]
    for i, Z in enumerate(models, 1):
        checks.append(_check(f"rank-one model {i} is the projective plane",
                             True, is_P2(Z)))
    covered = set(models[0].rays) | set(models[1].rays)
    checks.append(_check("every exceptional ray survives on a rank-one model",
                         True, all(e in covered for e in f.exceptional_rays)))
    checks.append(_check("all trivial-pair log discrepancies equal 1",
                         True, _trivial_discrepancies_one(X)))
    # any norm-3 decomposition would need ample Cartier components of -K;
    # maximize the total weight over such components
    negK_cl = class_of((-Fraction(1)) * canonical_divisor(X))
    cols = []
    for num in range(1, int(negK_cl[0]) + 1):
        D = class_representative(X, (Fraction(num),))
        if is_cartier(D) and is_ample(D):
            cols.append(Fraction(num))
    lp = solve_lp([Fraction(1)] * len(cols), a_eq=[cols], b_eq=[negK_cl[0]])
    checks.append(_check("max total weight over ample Cartier components",
                         Fraction(1), lp.objective))
    checks.append(_check("max weight < 3 (no norm-3 decomposition)",
                         True, lp.objective < 3))
    return _result("4.1", checks, t0)


def _verify_case_42_43(case_id):
    t0 = time.perf_counter()
    fx = load_fixture("case42" if case_id == "4.2" else "case43")
    X = Fan([tuple(r) for r in fx["fan"]])
    Y, f = minimal_resolution(X)
    expected_res = {tuple(r) for r in fx["resolution"]}
    checks = [
        _check("minimal resolution ray set", sorted(expected_res),
               sorted(Y.rays)),
        _check("all trivial-pair log discrepancies equal 1",
               True, _trivial_discrepancies_one(X)),
    ]
    models = [Fan([tuple(r) for r in rays]) for rays in fx["rank_one_models"]]
    if case_id == "4.2":
        for i, Z in enumerate(models, 1):
            checks.append(_check(f"rank-one model {i} is the projective plane",
                                 True, is_P2(Z)))
    else:
        checks.append(_check("rank-one model 1 is the degree-2 cone surface",
                             2, is_Fn(models[0])))
        checks.append(_check("rank-one model 2 is the projective plane",
                             True, is_P2(models[1])))

    e = tuple(fx["exceptional_ray"])
    Z = Fan(list(X.rays) + [e])
    checks.append(_check("intermediate surface contracts back onto the case fan",
                         sorted(X.rays), sorted(remove_ray(Z, e).rays)))
    checks.append(_info("intermediate surface cone determinants",
                        sorted(det2(u, v) for u, v in Z.cones())))

    # empirical nef-Cartier lattice on the intermediate surface
    k = fx["lattice_slope"]
    c0_cl = class_of(ToricDivisor(Z, {e: Fraction(1)}))
    f_cl = class_of(ToricDivisor(Z, {tuple(fx["fiber_ray"]): Fraction(1)}))
    bound = 13
    got = _nef_cartier_grid(Z, bound)
    span = 4 * bound
    quoted = _lattice_points(
        c0_cl, f_cl,
        [(0, 2 * c) for c in range(1, span)]
        + [(2 * a, 2 * b) for a in range(1, span) for b in range(k * a, span)],
        bound,
    )
    checks.append(_check("quoted lattice classes are nef Cartier",
                         True, quoted <= got))
    if case_id == "4.2":
        checks.append(_check("quoted lattice is the whole nef Cartier lattice",
                             True, quoted == got))
    else:
        # the quoted form misses classes; the verified lattice needs only the
        # parity condition a + b even, not both coefficients even
        checks.append(_check("quoted lattice is a proper sublattice",
                             True, quoted < got))
        parity = _lattice_points(
            c0_cl, f_cl,
            [(a, b) for a in range(0, span) for b in range(k * a, span)
             if (a + b) % 2 == 0],
            bound,
        )
        checks.append(_check("nef Cartier lattice = {a*C0+b*f : b>=3a, a+b even}",
                             True, parity == got))

    res = feasibility_system(fx["feasibility_fixture"])
    checks.append(_check("decomposition system infeasible for every alpha",
                         "infeasible", res.status))
    checks.append(_info("infeasibility certificate", res.farkas))
    if "wider_feasibility_fixture" in fx:
        res2 = feasibility_system(fx["wider_feasibility_fixture"])
        checks.append(_check("system over the verified (wider) lattice infeasible",
                             "infeasible", res2.status))
    return _result(case_id, checks, t0)


def verify_case(case_id):
    """Run one case pipeline: "3.2-n" (n in 1..10), "4.1", "4.2" or "4.3"."""
    if case_id.startswith("3.2-"):
        return _verify_case_32(int(case_id[4:]))
    if case_id == "4.1":
        return _verify_case_41()
    if case_id in ("4.2", "4.3"):
        return _verify_case_42_43(case_id)
    raise ValueError(f"unknown case id {case_id!r}")


# ---------------------------------------------------------------------------
# Complexity lower-bound property suite
# ---------------------------------------------------------------------------

def _segment_moduli(Y):
    """Nef divisors on Y cut out by short lattice segments, deduplicated."""
    out = []
    seen = set()
    for u in ((1, 0), (0, 1), (1, 1), (1, -1)):
        d = ToricDivisor(
            Y, {r: max(0, u[0] * r[0] + u[1] * r[1]) for r in Y.rays}
        )
        key = tuple(sorted(d.coeffs.items()))
        if key in seen or d.is_zero() or not is_nef(d):
            continue
        seen.add(key)
        out.append(d)
    return out


def _denominator_grid(denom_bound):
    vals = {Fraction(j, d) for d in range(1, denom_bound + 1)
            for j in range(d + 1)}
    return sorted(vals, reverse=True)


def glcy_fixture_pairs(X, denom_bound, per_model_cap=2):
    """Deterministic family of glc pairs on X with K+B+M class-trivial.

    Moduli are taken from a few nef segment divisors on the minimal
    resolution (plus zero); boundaries solve the class equation with
    coefficients in [0,1] at denominator <= denom_bound.
    """
    Y, _ = minimal_resolution(X)
    f = FanMorphism(Y, X)
    K = canonical_divisor(X)
    r0, r1 = X.rays[0], X.rays[1]
    d0 = det2(r0, r1)
    rest = [r for r in X.rays if r not in (r0, r1)]
    grid = _denominator_grid(denom_bound)
    pairs = []
    for M in [ToricDivisor(Y, {})] + _segment_moduli(Y):
        cap = per_model_cap if M.is_zero() else 1
        MX = pushforward(M, f)
        target = class_of((-Fraction(1)) * K - MX)
        found = 0
        for x in grid:
            for y in grid:
                coeffs = {r0: x, r1: y}
                ok = True
                for r, t in zip(rest, target):
                    # character with values x, y on the pivot rays
                    m1 = Fraction(x * r1[1] - y * r0[1], d0)
                    m2 = Fraction(y * r0[0] - x * r1[0], d0)
                    c = t + m1 * r[0] + m2 * r[1]
                    if c < 0 or c > 1 or c.denominator > denom_bound:
                        ok = False
                        break
                    coeffs[r] = c
                if not ok:
                    continue
                B = ToricDivisor(X, coeffs)
                P = GeneralizedPair(X, B, BNefDivisor(Y, M))
                if not is_glc(P):
                    continue
                pairs.append(P)
                found += 1
                if found >= cap:
                    break
            if found >= cap:
                break
    return pairs


def verify_theorem31(coord_bound=2, ray_bound=6, denom_bound=4,
                     inject_fault=False):
    """Property suite for the complexity lower bound.

    Enumerates fans up to the coordinate and ray bounds, builds a
    deterministic family of class-trivial glc pairs at the denominator
    bound, and checks that every searched minimal orbifold complexity is
    nonnegative and that every zero-complexity witness spans the divisor
    class space.  With inject_fault=True a boundary coefficient is pushed
    above 1 to demonstrate that the pair validator rejects it.
    """
    t0 = time.perf_counter()
    if inject_fault:
        X = p2_fan()
        coeffs = {r: Fraction(1) for r in X.rays}
        coeffs[X.rays[0]] = Fraction(5, 4)
        try:
            GeneralizedPair(X, ToricDivisor(X, coeffs), zero_moduli(X))
            caught = False
        except PairError:
            caught = True
        checks = [
            _check("coefficient 5/4 rejected by the pair validator",
                   True, caught),
            # the injected fault is reported as a failure on purpose: the
            # suite demonstrates its detector fires on an invalid input
            _check("injected fault mode", "no fault", "boundary coefficient 5/4"),
        ]
        return _result("theorem31-fault", checks, t0)

    fans = enumerate_fans(coord_bound, ray_bound)
    instances = 0
    zeros = 0
    all_nonneg = True
    spans_ok = True
    taut_ok = True
    bad = None
    for X in fans:
        rho = picard_rank(X)
        pairs = glcy_fixture_pairs(X, denom_bound)
        has_taut = any(
            all(P.boundary.coeff(r) == 1 for r in X.rays)
            and P.moduli.divisor.is_zero()
            for P in pairs
        )
        if not has_taut:
            taut_ok = False
            bad = bad or {"fan": [list(r) for r in X.rays],
                          "problem": "toric boundary pair missing"}
        for P in pairs:
            assert is_glcy(P)  # class-trivial by construction, glc by filter
            instances += 1
            val, hits = zero_complexity_spans(P, moduli_bound=1)
            if val < 0:
                all_nonneg = False
                bad = bad or {"fan": [list(r) for r in X.rays],
                              "pair": P.to_json(), "value": str(val)}
            if val == 0:
                zeros += 1
                for dim, wrank, _ in hits:
                    if not (dim == wrank == rho):
                        spans_ok = False
                        bad = bad or {
                            "fan": [list(r) for r in X.rays],
                            "pair": P.to_json(),
                            "dim": dim, "witness_rank": wrank, "rho": rho,
                        }
    checks = [
        _check("all searched minima nonnegative", True, all_nonneg),
        _check("zero-complexity witnesses span the class space", True, spans_ok),
        _check("toric-boundary witness present for every fan", True, taut_ok),
        _info("fan classes", len(fans)),
        _info("pair instances", instances),
        _info("zero-complexity instances", zeros),
    ]
    ce = None if (all_nonneg and spans_ok and taut_ok) else bad
    return _result("theorem31", checks, t0, counterexample=ce)


# ---------------------------------------------------------------------------
# Rank-one canonical census
# ---------------------------------------------------------------------------

def _expected_rank_one_canonical():
    return [
        ("projective plane", p2_fan()),
        ("degree-2 cone surface", fn_fan(2)),
        ("case 4.1 fan", Fan([(-2, 1), (1, 1), (1, -2)])),
        ("case 4.2 fan", Fan([(0, 1), (-2, -1), (2, -1)])),
        ("case 4.3 fan", Fan([(-1, 0), (0, 1), (3, -2)])),
    ]


def verify_canonical_rho1(coord_bound=3):
    """Census of canonical rank-one fans within a coordinate bound.

    At coord_bound >= 3 the census must find exactly the five known
    lattice-equivalence classes; below that it must find a subset.
    """
    t0 = time.perf_counter()
    fans = enumerate_fans(coord_bound, 3, n_rays=3)
    canon = [X for X in fans if is_canonical(X)]
    expected = _expected_rank_one_canonical()
    matched = []
    unmatched = []
    for X in canon:
        hit = next(
            (name for name, F in expected if lattice_equivalent(X, F) is not None),
            None,
        )
        (matched if hit else unmatched).append(hit or X)
    checks = [
        _info("rank-one fan classes enumerated", len(fans)),
        _info("canonical classes found", len(canon)),
        _check("every canonical class is one of the known five", 0,
               len(unmatched)),
        _check("no class matched twice", len(set(matched)), len(matched)),
    ]
    if coord_bound >= 3:
        checks.append(_check("census size", 5, len(canon)))
        checks.append(_check("all five classes present",
                             sorted(name for name, _ in expected),
                             sorted(matched)))
    else:
        checks.append(_check("census within the five", True, len(canon) <= 5))
    return _result(f"canonical-rho1-bound{coord_bound}", checks, t0)


# ---------------------------------------------------------------------------
# Kobayashi-Ochiai desk check and worked examples
# ---------------------------------------------------------------------------

def verify_kobayashi_ochiai():
    """Weight bounds for decompositions of -K on the projective plane, plus
    the example where the moduli divisor does not descend."""
    t0 = time.perf_counter()
    # on the plane, ample Cartier classes are d*H with d >= 1; maximize the
    # total weight subject to sum(weight * d) = 3
    cols = [Fraction(d) for d in (1, 2, 3)]
    lp = solve_lp([Fraction(1)] * 3, a_eq=[cols], b_eq=[Fraction(3)])
    checks = [
        _check("max total weight over ample Cartier components of -K",
               Fraction(3), lp.objective),
        _check("optimum uses only hyperplane components", True,
               lp.x[1] == 0 and lp.x[2] == 0),
    ]
    lp2 = solve_lp([Fraction(1)] * 2, a_eq=[[Fraction(2), Fraction(3)]],
                   b_eq=[Fraction(3)])
    checks.append(_check("components forced to degree >= 2 cap the weight at 3/2",
                         Fraction(3, 2), lp2.objective))

    fx = load_fixture("not_descend")
    P = pair_from_json(fx)
    Y, X = P.moduli.model, P.base
    f = FanMorphism(Y, X)
    comps = [
        (ToricDivisor(Y, {tuple(map(int, key.split(","))): Fraction(val)
                          for key, val in c["coeffs"]}), Fraction(c["weight"]))
        for c in fx["components"]
    ]
    sigma = Decomposition(boundary_components=[], moduli_components=comps)
    sigma.validate(P)
    checks.append(_check("moduli norm of the non-descending example",
                         Fraction(3), norm(P, sigma)))
    checks.append(_check("example is generalized klt", True, is_gklt(P)))
    checks.append(_check("example is generalized log Calabi-Yau", True,
                         is_glcy(P)))
    L = ToricDivisor(Y, {tuple(fx["non_descending_ray"]): Fraction(1)})
    E = ToricDivisor(Y, {tuple(fx["extra_pullback_ray"]): Fraction(1)})
    checks.append(_check("pullback of pushforward picks up the exceptional curve",
                         True, pullback(pushforward(L, f), f) == L + E))
    return _result("kobayashi-ochiai", checks, t0)


def _fn_example_pair(n):
    base = fn_fan(n)
    model = hirzebruch_fan(n)
    M = ToricDivisor(
        model, {(1, 0): Fraction(1), (-1, n): Fraction(1), (0, -1): Fraction(1)}
    )
    return GeneralizedPair(base, ToricDivisor(base, {}), BNefDivisor(model, M))


def verify_examples():
    """Reproduce the two worked examples exactly."""
    t0 = time.perf_counter()
    checks = []
    for n in range(2, 6):
        P = _fn_example_pair(n)
        rep = search_min_complexity(P, moduli_bound=1)
        checks.append(_check(f"cone surface n={n}: glc, not klt, log CY",
                             [True, False, True],
                             [is_glc(P), is_gklt(P), is_glcy(P)]))
        checks.append(_check(f"cone surface n={n}: discrepancy at the contracted ray",
                             Fraction(0), log_discrepancy(P, (0, 1))))
        checks.append(_check(f"cone surface n={n}: moduli norm and min complexity",
                             [Fraction(3), Fraction(0)],
                             [rep.norm, rep.orbifold_value]))
    fx = load_fixture("not_descend")
    P = pair_from_json(fx)
    rep = search_min_complexity(P, moduli_bound=2)
    Y, X = P.moduli.model, P.base
    f = FanMorphism(Y, X)
    L = ToricDivisor(Y, {tuple(fx["non_descending_ray"]): Fraction(1)})
    E = ToricDivisor(Y, {tuple(fx["extra_pullback_ray"]): Fraction(1)})
    checks.append(_check("plane example: klt, log CY, min complexity 0",
                         [True, True, Fraction(0)],
                         [is_gklt(P), is_glcy(P), rep.orbifold_value]))
    checks.append(_check("plane example: moduli does not descend",
                         True, pullback(pushforward(L, f), f) == L + E))
    return _result("examples", checks, t0)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

DEFAULT_CASES = ("3.2-2", "3.2-3", "4.1", "4.2", "4.3")


def verify_all():
    """Run every pipeline in a fixed order and aggregate."""
    results = [verify_case(cid) for cid in DEFAULT_CASES]
    results.append(verify_theorem31())
    results.append(verify_canonical_rho1())
    results.append(verify_kobayashi_ochiai())
    results.append(verify_examples())
    return results


def results_to_json(results, include_runtime=False):
    return {
        "status": "PASS" if all(r.passed for r in results) else "FAIL",
        "results": [r.to_json(include_runtime=include_runtime) for r in results],
    }
