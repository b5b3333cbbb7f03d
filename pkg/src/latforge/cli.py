"""Command-line interface: ``latforge check | export | identity | homs | verify-paper``.

Exit codes: 0 success (or every check/claim holds), 1 a check or claim
fails, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from latforge import io
from latforge.claims import REGISTRY, default_cap, run_claims
from latforge.errors import LatForgeError, ParseError, UnknownProperty
from latforge.lattice import FiniteLattice
from latforge.partial import enumerate_homs, validate_partial, whitman_partial
from latforge.properties import (find_doubly_reducible, is_distributive, is_modular,
                                 is_relatively_complemented, is_semidistributive,
                                 satisfies_whitman)
from latforge.terms import Identity, QuasiIdentity, parse
from latforge.varieties import in_Momega, satisfies_identity, satisfies_quasi_identity


def _doubly_reducible(L):
    found = find_doubly_reducible(L)
    return not found, found[0] if found else None


def _momega(L):
    return in_Momega(L), None


LATTICE_PROPERTIES = {
    "modular": is_modular,
    "distributive": is_distributive,
    "semidistributive": is_semidistributive,
    "whitman": satisfies_whitman,
    "relatively-complemented": is_relatively_complemented,
}
# reported as "no doubly reducible element" and "in M_omega"
EXTRA_PROPERTIES = {"no-doubly-reducible": _doubly_reducible, "momega": _momega}
PARTIAL_PROPERTIES = {"whitman": whitman_partial, "valid": validate_partial}
ALL_PROPERTIES = sorted(set(LATTICE_PROPERTIES) | set(EXTRA_PROPERTIES) | set(PARTIAL_PROPERTIES))


def _name_witness(obj, w):
    """Element indices inside a witness replaced by names."""
    if w is None:
        return None
    if isinstance(w, dict):
        return {k: obj.names[v] for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [_name_witness(obj, v) if isinstance(v, (list, tuple)) else
                obj.names[v] if isinstance(v, int) else v for v in w]
    return w


def _run_property(obj, prop):
    if isinstance(obj, FiniteLattice):
        if prop in LATTICE_PROPERTIES:
            v = LATTICE_PROPERTIES[prop](obj)
            return bool(v), v.witness
        if prop in EXTRA_PROPERTIES:
            return EXTRA_PROPERTIES[prop](obj)
        if prop == "valid":
            return True, None
    elif prop in PARTIAL_PROPERTIES:
        v = PARTIAL_PROPERTIES[prop](obj)
        return bool(v), v.witness
    raise UnknownProperty(f"property {prop!r} does not apply here; known: {', '.join(ALL_PROPERTIES)}")


def cmd_check(args):
    obj = io.load(args.input)
    props = list(args.properties)
    for p in args.property or []:
        if p not in ALL_PROPERTIES:
            raise UnknownProperty(f"unknown property {p!r}; known: {', '.join(ALL_PROPERTIES)}")
        props.append(p)
    if not props:
        props = ["valid"] if not isinstance(obj, FiniteLattice) else list(LATTICE_PROPERTIES)
    results = {}
    for p in props:
        ok, witness = _run_property(obj, p)
        results[p] = {"holds": ok, "witness": _name_witness(obj, witness)}
    if args.json:
        print(json.dumps(results, indent=2))
    else:
        for p, r in results.items():
            line = f"{p}: {'yes' if r['holds'] else 'no'}"
            if r["witness"] is not None:
                line += f"  witness {json.dumps(r['witness'])}"
            print(line)
    return 0 if all(r["holds"] for r in results.values()) else 1


def cmd_export(args):
    obj = io.load(args.input)
    text = io.to_dot(obj) if args.dot else io.dumps(obj, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_identity(args):
    L = io.load(args.input)
    if not isinstance(L, FiniteLattice):
        raise ParseError("identity checks need a total lattice")
    law = parse(args.law)
    if isinstance(law, QuasiIdentity):
        v = satisfies_quasi_identity(L, law)
    elif isinstance(law, Identity):
        v = satisfies_identity(L, law)
    else:
        raise ParseError("expected an identity (<= s t), (= s t) or a quasi-identity")
    witness = _name_witness(L, v.witness)
    print(json.dumps({"holds": bool(v), "witness": witness}))
    return 0 if v else 1


def cmd_homs(args):
    P = io.load(args.source)
    L = io.load(args.target)
    if not isinstance(L, FiniteLattice):
        raise ParseError("target must be a total lattice")
    count = 0
    for h in enumerate_homs(P, L, require_embedding=args.embeddings):
        if count < args.limit:
            print(json.dumps(io.map_to_json(P, L, h.map)))
        count += 1
        if count >= args.limit and not args.count:
            break
    if args.count:
        print(f"total: {count}")
    return 0


def cmd_verify_paper(args):
    ids = None
    if args.claim:
        unknown = [c for c in args.claim if c not in REGISTRY]
        if unknown:
            print(f"unknown claim(s): {', '.join(unknown)}; known: {', '.join(REGISTRY)}",
                  file=sys.stderr)
            return 2
        ids = args.claim
    cap = args.cap if args.cap is not None else default_cap()
    reports = run_claims(ids, cap=cap, seed=args.seed, parallel=args.parallel)
    for r in reports:
        print(f"{r['id']:<18} {r['status']:<22} {r['runtime']:8.3f}s")
    if args.json_report:
        with open(args.json_report, "w") as fh:
            json.dump({"cap": cap, "seed": args.seed, "claims": reports}, fh, indent=2)
    return 1 if any(r["status"] == "FAIL" for r in reports) else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="latforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run property checkers on a lattice or partial lattice")
    p.add_argument("input", help="catalog name (M33, P_4, chain_3, ...), JSON file or JSON text")
    for name in ALL_PROPERTIES:
        p.add_argument(f"--{name}", dest="properties", action="append_const", const=name)
    p.add_argument("--property", action="append", help="property by name (repeatable)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_check, properties=[])

    p = sub.add_parser("export", help="write DOT or normalized JSON")
    p.add_argument("input")
    fmt = p.add_mutually_exclusive_group(required=True)
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("identity", help="model-check an identity or quasi-identity")
    p.add_argument("input")
    p.add_argument("law", help='e.g. "(<= (meet x y) x)"')
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("homs", help="enumerate homomorphisms of a (partial) lattice into a lattice")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--embeddings", action="store_true")
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--count", action="store_true", help="also count all of them")
    p.set_defaults(func=cmd_homs)

    p = sub.add_parser("verify-paper", help="run the regression claim registry")
    p.add_argument("--claim", action="append", help="claim id (repeatable); default all")
    p.add_argument("--cap", type=int, help="closure cap (default: LATFORGE_CAP or 200000)")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--json-report", metavar="PATH")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LatForgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
