"""Command line interface.

Subcommands operate on JSON descriptions of fans, divisors, and pairs read
from files (or stdin via "-").  Exit status: 0 when the requested check or
computation succeeds, 1 when a verification fails or a predicate is false,
2 on usage or input errors.
"""

import argparse
import json
import sys
from fractions import Fraction

from .complexity import (
    Decomposition,
    DecompositionError,
    complexity,
    decomposition_from_json,
    feasibility_system,
    search_min_complexity,
    zero_complexity_spans,
)
from .divisor import (
    DivisorError,
    class_of,
    divisor_from_json,
    intersect,
    is_ample,
    is_cartier,
    is_nef,
)
from .fan import (
    Fan,
    FanError,
    canonical_form,
    fan_from_json,
    lattice_equivalent,
    minimal_resolution,
    picard_rank,
)
from .genpair import (
    PairError,
    adjunction_to_invariant_curve,
    is_gklt,
    is_glc,
    is_glcy,
    log_discrepancy,
    pair_from_json,
)
from .lattice import primitive
from .verify import (
    DEFAULT_CASES,
    results_to_json,
    verify_all,
    verify_canonical_rho1,
    verify_case,
    verify_examples,
    verify_kobayashi_ochiai,
    verify_theorem31,
)


class InputError(Exception):
    pass


def _load_json(path):
    try:
        if path == "-":
            text = sys.stdin.read()
            name = "<stdin>"
        else:
            with open(path) as fh:
                text = fh.read()
            name = path
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(
            f"malformed JSON in {name}: {e.msg} at line {e.lineno} "
            f"column {e.colno} (char {e.pos})"
        )


def _load_fan(path):
    data = _load_json(path)
    if isinstance(data, list):
        data = {"rays": data}
    return fan_from_json(data)


def _load_divisor(path):
    return divisor_from_json(_load_json(path))


def _load_pair(path):
    return pair_from_json(_load_json(path))


def _parse_ray(text):
    try:
        x, y = text.split(",")
        return primitive((int(x), int(y)))
    except (ValueError, ArithmeticError):
        raise InputError(f"expected a ray as 'x,y', got {text!r}")


def _emit(args, data, text_lines):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# --- fan ------------------------------------------------------------------

def cmd_fan_info(args):
    X = _load_fan(args.fan)
    data = {
        "rays": [list(r) for r in X.rays],
        "smooth": X.is_smooth(),
        "picard_rank": picard_rank(X),
        "max_cone_det": X.max_cone_det(),
        "canonical_form": [list(r) for r in canonical_form(X)[0]],
    }
    _emit(args, data, [f"{k}: {v}" for k, v in data.items()])
    return 0


def cmd_fan_resolve(args):
    X = _load_fan(args.fan)
    Y, f = minimal_resolution(X)
    data = {
        "rays": [list(r) for r in Y.rays],
        "exceptional_rays": [list(r) for r in f.exceptional_rays],
    }
    _emit(args, data, [f"rays: {data['rays']}",
                       f"exceptional: {data['exceptional_rays']}"])
    return 0


def cmd_fan_equiv(args):
    X, Y = _load_fan(args.fan), _load_fan(args.other)
    g = lattice_equivalent(X, Y)
    eq = g is not None
    data = {"equivalent": eq, "matrix": [list(row) for row in g] if eq else None}
    _emit(args, data, ["equivalent" if eq else "not equivalent"])
    return 0 if eq else 1


# --- divisor ---------------------------------------------------------------

def cmd_divisor_intersect(args):
    D1, D2 = _load_divisor(args.divisor), _load_divisor(args.other)
    if D1.fan != D2.fan:
        raise InputError("divisors live on different fans")
    val = intersect(D1, D2)
    _emit(args, {"intersection": str(val)}, [f"intersection: {val}"])
    return 0


def cmd_divisor_nef(args):
    D = _load_divisor(args.divisor)
    nef, ample = is_nef(D), is_ample(D)
    _emit(
        args,
        {"nef": nef, "ample": ample},
        [f"nef: {nef}", f"ample: {ample}"],
    )
    return 0 if nef else 1


def cmd_divisor_cartier(args):
    D = _load_divisor(args.divisor)
    val = is_cartier(D)
    _emit(args, {"cartier": val}, [f"cartier: {val}"])
    return 0 if val else 1


def cmd_divisor_class(args):
    D = _load_divisor(args.divisor)
    vec = class_of(D)
    data = {"class": [str(c) for c in vec], "rank": picard_rank(D.fan)}
    _emit(args, data, [f"class: {list(data['class'])}"])
    return 0


# --- pair -------------------------------------------------------------------

def cmd_pair_check(args):
    P = _load_pair(args.pair)
    data = {"glc": is_glc(P), "gklt": is_gklt(P), "glcy": is_glcy(P)}
    _emit(args, data, [f"{k}: {v}" for k, v in data.items()])
    return 0 if data["glc"] else 1


def cmd_pair_discrepancy(args):
    P = _load_pair(args.pair)
    e = _parse_ray(args.ray)
    val = log_discrepancy(P, e)
    _emit(args, {"ray": list(e), "log_discrepancy": str(val)},
          [f"log discrepancy at {e}: {val}"])
    return 0


def cmd_pair_adjoin(args):
    P = _load_pair(args.pair)
    rho = _parse_ray(args.ray)
    adjoint, adj = adjunction_to_invariant_curve(P, rho)
    data = {
        "curve_ray": list(adj.curve_ray),
        "moduli_degree": str(adj.moduli_degree),
        "degree": str(adjoint.degree()),
        "sides": [
            {
                "base_neighbor": list(s["base_neighbor"]),
                "adjacent_ray": list(s["adjacent_ray"]),
                "local_index": s["local_index"],
                "point_coeff": str(s["point_coeff"]),
            }
            for s in adj.sides
        ],
    }
    lines = [
        f"curve: {adj.curve_ray}",
        f"moduli degree: {adj.moduli_degree}",
        f"adjoint degree: {adjoint.degree()}",
    ]
    for s in adj.sides:
        lines.append(
            f"point toward {s['base_neighbor']}: local index "
            f"{s['local_index']}, coefficient {s['point_coeff']}"
        )
    _emit(args, data, lines)
    return 0


# --- complexity --------------------------------------------------------------

def cmd_complexity_compute(args):
    P = _load_pair(args.pair)
    sigma = decomposition_from_json(P, _load_json(args.decomposition))
    rep = complexity(P, sigma)
    data = rep.to_json()
    _emit(args, data, [
        f"norm: {rep.norm}",
        f"span rank: {rep.span_rank}",
        f"orbifold complexity: {rep.orbifold_value}",
        f"classic complexity: {rep.classic_value}",
    ])
    return 0


def cmd_complexity_search(args):
    P = _load_pair(args.pair)
    rep = search_min_complexity(P, moduli_bound=args.moduli_bound)
    data = rep.to_json()
    lines = [
        f"minimal orbifold complexity: {rep.orbifold_value}",
        f"classic complexity: {rep.classic_value}",
        f"witness norm: {rep.norm}, span rank: {rep.span_rank}",
    ]
    if args.spans:
        val, hits = zero_complexity_spans(P, moduli_bound=args.moduli_bound)
        data["minimal_spans"] = [
            {"dim": d, "witness_rank": r, "norm": str(n)} for d, r, n in hits
        ]
        for d, r, n in hits:
            lines.append(f"minimum at dim {d}: witness rank {r}, norm {n}")
    _emit(args, data, lines)
    return 0


def cmd_complexity_feasibility(args):
    res = feasibility_system(args.fixture, n=args.n, alpha=args.alpha)
    data = {"status": res.status}
    lines = [f"status: {res.status}"]
    if res.alpha_interval is not None:
        data["alpha_interval"] = [str(v) for v in res.alpha_interval]
        lines.append(f"alpha interval: [{', '.join(data['alpha_interval'])}]")
    if res.farkas is not None:
        data["farkas"] = [str(v) for v in res.farkas]
        lines.append(f"farkas certificate: [{', '.join(data['farkas'])}]")
    _emit(args, data, lines)
    return 0


# --- verify -------------------------------------------------------------------

def _report(args, results):
    ok = all(r.passed for r in results)
    if args.json:
        print(json.dumps(results_to_json(results), indent=2))
    else:
        for res in results:
            for c in res.checks:
                mark = "pass" if c.passed else "FAIL"
                print(f"[{mark}] {res.case_id}: {c.name}: {c.computed}")
            if res.counterexample:
                print(f"[FAIL] {res.case_id}: counterexample: {res.counterexample}")
        print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_verify_case(args):
    return _report(args, [verify_case(args.case_id)])


def cmd_verify_theorem31(args):
    return _report(args, [verify_theorem31(inject_fault=args.inject_fault)])


def cmd_verify_canonical(args):
    return _report(args, [verify_canonical_rho1()])


def cmd_verify_ko(args):
    return _report(args, [verify_kobayashi_ochiai()])


def cmd_verify_examples(args):
    return _report(args, [verify_examples()])


def cmd_verify_all(args):
    return _report(args, verify_all())


def build_parser():
    p = argparse.ArgumentParser(
        prog="toricpairs",
        description="Exact computations with generalized pairs on complete "
        "toric surfaces.",
    )
    p.add_argument("--json", action="store_true", help="emit JSON output")
    sub = p.add_subparsers(dest="command", required=True)

    fan = sub.add_parser("fan", help="fan operations").add_subparsers(
        dest="subcommand", required=True
    )
    q = fan.add_parser("info", help="smoothness, rank, canonical form")
    q.add_argument("fan")
    q.set_defaults(func=cmd_fan_info)
    q = fan.add_parser("resolve", help="minimal resolution")
    q.add_argument("fan")
    q.set_defaults(func=cmd_fan_resolve)
    q = fan.add_parser("equiv", help="lattice equivalence of two fans")
    q.add_argument("fan")
    q.add_argument("other")
    q.set_defaults(func=cmd_fan_equiv)

    div = sub.add_parser("divisor", help="divisor operations").add_subparsers(
        dest="subcommand", required=True
    )
    q = div.add_parser("intersect", help="Mumford intersection number")
    q.add_argument("divisor")
    q.add_argument("other")
    q.set_defaults(func=cmd_divisor_intersect)
    q = div.add_parser("nef", help="nef and ample tests")
    q.add_argument("divisor")
    q.set_defaults(func=cmd_divisor_nef)
    q = div.add_parser("cartier", help="Cartier test")
    q.add_argument("divisor")
    q.set_defaults(func=cmd_divisor_cartier)
    q = div.add_parser("class", help="class vector in a fixed basis")
    q.add_argument("divisor")
    q.set_defaults(func=cmd_divisor_class)

    pair = sub.add_parser("pair", help="generalized pair operations").add_subparsers(
        dest="subcommand", required=True
    )
    q = pair.add_parser("check", help="glc / gklt / log Calabi-Yau tests")
    q.add_argument("pair")
    q.set_defaults(func=cmd_pair_check)
    q = pair.add_parser("discrepancy", help="log discrepancy at a ray")
    q.add_argument("pair")
    q.add_argument("--ray", required=True, help="lattice vector as 'x,y'")
    q.set_defaults(func=cmd_pair_discrepancy)
    q = pair.add_parser("adjoin", help="adjunction to an invariant curve")
    q.add_argument("pair")
    q.add_argument("--ray", required=True, help="curve ray as 'x,y'")
    q.set_defaults(func=cmd_pair_adjoin)

    cx = sub.add_parser("complexity", help="decomposition complexities").add_subparsers(
        dest="subcommand", required=True
    )
    q = cx.add_parser("compute", help="complexity of a given decomposition")
    q.add_argument("pair")
    q.add_argument("decomposition")
    q.set_defaults(func=cmd_complexity_compute)
    q = cx.add_parser("search", help="bounded minimal complexity search")
    q.add_argument("pair")
    q.add_argument("--moduli-bound", type=int, default=2)
    q.add_argument("--spans", action="store_true",
                   help="also list the subspaces attaining the minimum")
    q.set_defaults(func=cmd_complexity_search)
    q = cx.add_parser("feasibility", help="decomposition feasibility system")
    q.add_argument("fixture", choices=["hirzebruch", "case42", "case43",
                                       "case43-parity"])
    q.add_argument("--n", type=int, default=None)
    q.add_argument("--alpha", type=Fraction, default=None)
    q.set_defaults(func=cmd_complexity_feasibility)

    ver = sub.add_parser("verify", help="verification pipelines").add_subparsers(
        dest="subcommand", required=True
    )
    q = ver.add_parser("case", help="one case analysis")
    q.add_argument("case_id", choices=list(DEFAULT_CASES))
    q.set_defaults(func=cmd_verify_case)
    q = ver.add_parser("theorem31", help="complexity bounds over a fan census")
    q.add_argument("--inject-fault", action="store_true",
                   help="run with a deliberately invalid input (must fail)")
    q.set_defaults(func=cmd_verify_theorem31)
    q = ver.add_parser("canonical", help="rank-one canonical fan census")
    q.set_defaults(func=cmd_verify_canonical)
    q = ver.add_parser("ko", help="effective divisor bound on the plane")
    q.set_defaults(func=cmd_verify_ko)
    q = ver.add_parser("examples", help="worked example pairs")
    q.set_defaults(func=cmd_verify_examples)
    q = ver.add_parser("all", help="every case analysis")
    q.set_defaults(func=cmd_verify_all)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (FanError, DivisorError, PairError, DecompositionError,
            ValueError, KeyError) as e:
        print(f"error: invalid input: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
