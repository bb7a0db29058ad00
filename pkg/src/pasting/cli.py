"""Command-line frontend.

Subcommands cover validation, compilation, factorizations, pushouts, cell
enumeration, twisted arrows, the string generators, adjoints, string order
and the factorization-axiom and oracle suites.  Reports are JSON objects
{check, instance, verdict, witness?}; the exit status is zero exactly when
no violation was reported.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import adc, delta, dgens, dk, omega, stn, textio, theta, trees, twar


def _emit(report, as_json):
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
    else:
        for item in report if isinstance(report, list) else [report]:
            verdict = item.get("verdict", "")
            print(f"{item.get('check', '?')}: {verdict}"
                  + (f"  {item.get('witness')}" if item.get("witness")
                     else ""))


def _ok(report):
    items = report if isinstance(report, list) else [report]
    return all(i.get("verdict") in ("pass", "ok", True) for i in items)


def cmd_adc_validate(args):
    x = textio.parse_adc(args.complex)
    problems = x.validate()
    flags = x.basis_flags() if not problems else {}
    return [{"check": "adc-validate", "instance": f"dim {x.dim}",
             "verdict": "pass" if not problems else "fail",
             "witness": problems or flags}]


def cmd_theta_to_adc(args):
    t = textio.parse_term(args.term)
    x = theta.to_adc(t)
    print(json.dumps(textio.adc_to_json(x), indent=2, sort_keys=True))
    return [{"check": "theta-to-adc", "instance": repr(t),
             "verdict": "pass"}]


def cmd_adjoint(args):
    f = textio.parse_map(args.map)
    out = {}
    for side in ("left", "right"):
        g = delta.adjoint(f, side)
        out[side] = textio.show_map(g) if g is not None else None
        if g is not None:
            assert delta.galois_check(f, g, side)
    return [{"check": "adjoint", "instance": textio.show_map(f),
             "verdict": "pass", "witness": out}]


def cmd_sq_order(args):
    s_prime = textio.parse_string(args.first)
    bound = max(s_prime.alphabet_bound,
                max((i for i, _ in textio.parse_string(args.second).letters),
                    default=0) + 1)
    s_prime = textio.parse_string(args.first, bound)
    s = textio.parse_string(args.second, bound)
    swap = delta.string_order(s_prime, s)
    grid = delta.spine_in_square(s_prime, s)
    agree = swap == grid
    return [{"check": "sq-order",
             "instance": f"{args.first!r} <= {args.second!r}",
             "verdict": "pass" if agree else "fail",
             "witness": {"swap_closure": swap, "grid_factoring": grid}}]


def cmd_cells(args):
    t = textio.parse_term(args.term)
    x = theta.to_adc(t)
    cells = omega.enumerate_cells(x, args.dim)
    for c in cells:
        print(json.dumps(textio.cell_to_json(c), sort_keys=True))
    return [{"check": "cells", "instance": f"{t!r} dim {args.dim}",
             "verdict": "pass", "witness": {"count": len(cells)}}]


def cmd_twar(args):
    t = textio.parse_term(args.term)
    x = theta.to_adc(t)
    poset = twar.twar_poset(x)
    if args.dot:
        print(twar.export_dot(poset))
    else:
        print(json.dumps({
            "objects": [sorted(s.members) for s in poset.elements],
            "hasse": poset.hasse()}, indent=2))
    return [{"check": "twar", "instance": repr(t), "verdict": "pass",
             "witness": {"objects": len(poset.elements)}}]


def cmd_dn(args):
    spec = textio.parse_spec(["dn", str(args.n), str(args.p)]
                             + [str(q) for q in args.q])
    x = dgens.to_adc(spec)
    flags = x.basis_flags()
    witness = {"sizes": [len(b) for b in x.basis], "flags": flags}
    if spec.n == 1:
        witness["term"] = repr(theta.linear(2 * spec.q[0] + 1))
    return [{"check": "dn",
             "instance": f"dn {spec.n} {spec.p} "
                         + " ".join(map(str, spec.q)),
             "verdict": "pass" if flags["strongly_loop_free"] else "fail",
             "witness": witness}]


def cmd_factor(args):
    if args.system == "inj-sur":
        # argument: two terms and an object map is not enough; accept a
        # sliced description "term -> term @ (obj values)" is overly rich,
        # so factor every endomorphism-free hom pair instead
        s = textio.parse_term(args.source)
        t = textio.parse_term(args.target)
        out = []
        for h in theta.enumerate_hom(s, t):
            sur, inj = theta.factor_inj_sur(h)
            recomposed = inj.compose(sur).key() == h.key()
            out.append({"check": "factor-inj-sur",
                        "instance": str(h.obj.values),
                        "verdict": "pass" if recomposed else "fail"})
        return out
    if args.system == "active-inert":
        s = textio.parse_term(args.source)
        t = textio.parse_term(args.target)
        out = []
        for h in theta.enumerate_hom(s, t):
            m = h.adc_morphism()
            cls, act, ine = stn.classify_and_factor(m)
            ok = ine.compose(act) == m
            out.append({"check": "factor-active-inert",
                        "instance": str(h.obj.values),
                        "verdict": "pass" if ok else "fail",
                        "witness": {"active": cls.active,
                                    "inert": cls.inert}})
        return out
    if args.system == "dk":
        s = textio.parse_term(args.source)
        t = textio.parse_term(args.target)
        n = max(s.dim, t.dim, 1)
        out = []
        for h in theta.enumerate_hom(s, t):
            sm = dk.SlicedMorphism.plain(h)
            e, m, ep = dk.factor_three(sm, n)
            ok = ep.h.compose(m.h.compose(e.h)).key() == h.key()
            out.append({"check": "factor-dk", "instance": str(h.obj.values),
                        "verdict": "pass" if ok else "fail"})
        return out
    raise SystemExit(f"unknown factorization system {args.system}")


def cmd_pushout(args):
    i = textio.parse_map(args.inert)
    a = textio.parse_map(args.active)
    if not i.is_inert():
        return [{"check": "pushout", "instance": textio.show_map(i),
                 "verdict": "fail", "witness": "first map must be inert"}]
    src = theta.linear(i.source_size)
    i_t = _interval_tmor(i, src, theta.linear(i.target_size))
    a_t = _interval_tmor(a, src, theta.linear(a.target_size))
    out, a_leg, i_leg = theta.pushout_active_inert(i_t, a_t)
    return [{"check": "pushout",
             "instance": f"{textio.show_map(i)} / {textio.show_map(a)}",
             "verdict": "pass",
             "witness": {"object": repr(out),
                         "active_leg": list(a_leg.obj.values),
                         "inert_leg": list(i_leg.obj.values)}}]


def _interval_tmor(f, src, tgt):
    comps = tuple(((i, k), theta.TMor.identity(theta.POINT))
                  for i in range(f.source_size)
                  for k in range(f(i), f(i + 1)))
    return theta.TMor(src, tgt, f, comps)


def cmd_dk_verify(args):
    t = textio.parse_term(args.term)
    n = max(t.dim, args.n or 1)
    rep = dk.verify_triple(t, n, max_cells=args.cells,
                           hom_bound=args.bound)
    return [{"check": f"dk-{ax}", "instance": repr(t),
             "verdict": "pass" if rep[ax] else "fail",
             "witness": [w for w in rep["witnesses"] if w[0].startswith(ax)]
             or None}
            for ax in ("T1", "T2", "T3", "T4", "T5")]


def cmd_oracle_suite(args):
    rng = random.Random(args.seed)
    report = []

    def check(name, instance, verdict, witness=None):
        item = {"check": name, "instance": instance,
                "verdict": "pass" if verdict else "fail", "seed": args.seed}
        if witness:
            item["witness"] = witness
        report.append(item)

    bound = args.bound
    # adjoint calculus against the Galois oracle
    count = 0
    for nsz in range(min(bound, 3) + 1):
        for msz in range(min(bound, 3) + 1):
            for f in delta.all_maps(nsz, msz):
                for side in ("left", "right"):
                    g = delta.adjoint(f, side)
                    if g is not None:
                        count += 1
                        if not delta.galois_check(f, g, side):
                            check("adjoint-galois", textio.show_map(f),
                                  False)
    check("adjoint-galois", f"{count} adjoints", True)

    # string order cross-law on random strings
    mismatch = 0
    trials = 0
    for _ in range(100):
        n_letters = rng.randint(1, min(5, bound + 2))
        alpha = rng.randint(1, 3)
        a = tuple(rng.randrange(alpha) for _ in range(n_letters))
        b = tuple(rng.sample(list(a), len(a)))
        sa = delta.LetterString.plain(a, alpha)
        sb = delta.LetterString.plain(b, alpha)
        trials += 1
        if delta.string_order(sb, sa) != delta.spine_in_square(sb, sa):
            mismatch += 1
    check("string-order-crosslaw", f"{trials} seeded strings",
          mismatch == 0)

    # square criterion vs exhaustive search on seeded quadruples
    bad = 0
    for _ in range(30):
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        nn, mm = rng.randint(0, 2), rng.randint(0, 2)
        act_pq = list(delta.all_active_maps(p, q))
        act_nm = list(delta.all_active_maps(nn, mm))
        if not act_pq or not act_nm:
            continue
        u = rng.choice(act_pq)
        v = rng.choice([w for w in act_pq if u <= w] or [u])
        f = rng.choice(act_nm)
        g = rng.choice([w for w in act_nm if f <= w] or [f])
        if delta.square_nonempty(u, v, f, g) != \
                delta.square_nonempty_oracle(u, v, f, g):
            bad += 1
    check("square-criterion", "30 seeded quadruples", bad == 0)

    # cell enumeration bijection with classifying morphisms
    for term in (theta.linear(2), theta.globe(2)):
        x = theta.to_adc(term)
        cells = omega.enumerate_cells(x, x.dim)
        ms = {omega.cell_to_morphism(x, c) for c in cells}
        check("cell-globe-bijection", repr(term), len(ms) == len(cells),
              {"cells": len(cells)})

    # factorization uniqueness on a small hom-set
    s, t = theta.linear(2), theta.linear(3)
    unique = True
    for h in theta.enumerate_hom(s, t):
        sur, inj = theta.factor_inj_sur(h)
        alternatives = 0
        for mid in (theta.POINT, theta.linear(1), theta.linear(2),
                    theta.linear(3)):
            for s2 in theta.enumerate_hom(s, mid):
                if not theta.is_surjective_on_cells(s2):
                    continue
                for j2 in theta.enumerate_hom(mid, t):
                    if not theta.is_injective_on_cells(j2):
                        continue
                    if j2.compose(s2).key() == h.key():
                        alternatives += 1
        if alternatives != 1:
            unique = False
    check("inj-sur-uniqueness", "hom([2],[3])", unique)

    # pushout universal property on seeded interval cospans
    good = True
    for _ in range(10):
        l = rng.randint(0, 2)
        pool = [m for m in delta.all_maps(l, l + rng.randint(0, 2))
                if m.is_active() and m.is_injective()]
        if not pool:
            continue
        a0 = rng.choice(pool)
        a1 = delta.MonotoneMap.identity(l)
        try:
            po = delta.delta_pushout(a0, a1)
        except delta.PushoutRejected:
            continue
        if not delta.pushout_is_universal(a0, a1, po, max_cocone=3):
            good = False
    check("pushout-universality", "10 seeded cospans", good)

    return report


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="pasting",
        description="pasting-scheme combinatorics toolbox")
    parser.add_argument("--json", action="store_true",
                        help="emit the full JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("adc-validate", help="validate a complex")
    p.add_argument("complex", help="complex JSON")
    p.set_defaults(func=cmd_adc_validate)

    p = sub.add_parser("theta-to-adc", help="compile a term")
    p.add_argument("term")
    p.set_defaults(func=cmd_theta_to_adc)

    p = sub.add_parser("adjoint", help="adjoints of a monotone map")
    p.add_argument("map")
    p.set_defaults(func=cmd_adjoint)

    p = sub.add_parser("sq-order", help="string order, both characterizations")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_sq_order)

    p = sub.add_parser("cells", help="enumerate cells of a term")
    p.add_argument("term")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("twar", help="twisted-arrow poset of a term")
    p.add_argument("term")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_twar)

    p = sub.add_parser("dn", help="compile a string-generated scheme")
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.add_argument("q", type=int, nargs="*")
    p.set_defaults(func=cmd_dn)

    p = sub.add_parser("factor", help="factor every hom between two terms")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--system", default="inj-sur",
                   choices=("inj-sur", "active-inert", "dk"))
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("pushout", help="interval pushout of active along inert")
    p.add_argument("inert")
    p.add_argument("active")
    p.set_defaults(func=cmd_pushout)

    p = sub.add_parser("dk-verify", help="verify the T1-T5 axioms")
    p.add_argument("term")
    p.add_argument("--bound", type=int, default=100)
    p.add_argument("--cells", type=int, default=4)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_dk_verify)

    p = sub.add_parser("oracle-suite", help="run the cross-oracles")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_suite)

    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except (textio.ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.json)
    return 0 if _ok(report) else 1


if __name__ == "__main__":
    sys.exit(main())
