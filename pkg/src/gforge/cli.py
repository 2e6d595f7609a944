"""Command line front end.

Subcommands:

* check    -- structural conditions and action laws on a corpus graph
* witness  -- paradoxical pair search on a compact open set
* oe       -- cocycle and orbit-data roundtrips on built-in examples
* sgp      -- semigroup family checks and witnesses

Exit codes: 0 pass, 1 fail, 2 inconclusive, 64 usage.  Setting
GFORGE_BOUND_OVERRIDE in the environment replaces every depth and word
bound with its value.
"""

import argparse
import os
import re
import sys
import time

from . import corpus
from .boundary import (
    BoundaryError,
    BoundaryPoint,
    CompactOpen,
    Cylinder,
    make_cylinder,
    parse_stem,
    point_str,
    set_str,
    topological_freeness_report,
    verify_partial_action,
)
from .graph import Graph, GraphError, Path, condition_k, condition_l, condition_pi
from .invsgp import check_boundary_invariance, verify_partial_hom
from .orbit import (
    OrbitError,
    cocycles_agree,
    coe_check,
    coe_to_oe,
    identity_cocycle,
    oe_agree,
    oe_check,
    oe_to_coe,
    swap_cocycle_parallel_pair,
    swap_cocycle_two_loops,
)
from .paradox import PiecewiseWord, expand_witness, find_witness, verify_witness
from .reports import render
from .semigroups import (
    AffineFamily,
    FreeMonoidFamily,
    NkFamily,
    Progression,
    SemigroupError,
    axb_paradox_witness,
    boundary_minimality_probe,
    boundary_paradox_witness,
    rcomplete_hypothesis_check,
    thompson_truncated,
)
from .words import ReducedWord

USAGE = 64
INCONCLUSIVE = 2


class ExprError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------- small parsers

def _bound_override():
    raw = os.environ.get("GFORGE_BOUND_OVERRIDE")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ExprError(f"GFORGE_BOUND_OVERRIDE must be an integer, "
                        f"got {raw!r}")


def _effective(value, fallback):
    over = _bound_override()
    if over is not None:
        return over
    return fallback if value is None else value


def parse_set_expr(g: Graph, text: str) -> CompactOpen:
    """Z(stem), Z(stem - {inst, ...}), joined with +."""
    parts = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        m = re.fullmatch(r"Z\((.*)\)", chunk, re.S)
        if not m:
            raise ExprError(f"expected Z(...), got {chunk!r}")
        body = m.group(1).strip()
        excl_text = None
        m2 = re.fullmatch(r"(.*?)\s*-\s*\{(.*)\}", body, re.S)
        if m2:
            body, excl_text = m2.group(1).strip(), m2.group(2)
        _guard_token(g, body)
        try:
            stem = parse_stem(g, body)
            excl = []
            if excl_text is not None:
                for tok in excl_text.split(","):
                    tok = tok.strip()
                    if not tok:
                        raise ExprError("empty exclusion token")
                    p = parse_stem(g, tok)
                    if len(p) != 1:
                        raise ExprError(
                            f"exclusions are single instances, got {tok!r}")
                    excl.append(p.instances[0])
            parts.append(make_cylinder(g, stem, excl))
        except (GraphError, BoundaryError) as err:
            raise ExprError(str(err))
    return CompactOpen(g, parts)


def _guard_token(g: Graph, body: str):
    # a bare name could read as a vertex or an edge; refuse the clash
    if re.fullmatch(r"\w+", body) and body in g.vertices and body in g.edges:
        raise ExprError(f"{body!r} names both a vertex and an edge")


_PROG = re.compile(r"^(-?\d+)\+(\d+)Z?$", re.I)


def parse_progression(text: str) -> Progression:
    m = _PROG.match(text.strip().replace(" ", ""))
    if not m:
        raise ExprError(f"expected r+mZ, got {text!r}")
    return Progression(int(m.group(1)), int(m.group(2)))


def parse_family(text: str):
    if text == "affine":
        return AffineFamily()
    m = re.fullmatch(r"(nk|free):(\d+)", text)
    if not m:
        raise ExprError(f"unknown family {text!r}; use nk:K, free:N, affine")
    n = int(m.group(2))
    try:
        return NkFamily(n) if m.group(1) == "nk" else FreeMonoidFamily(n)
    except SemigroupError as err:
        raise ExprError(str(err))


# ------------------------------------------------------------ object cleanup

def _clean(g, x):
    if isinstance(x, dict):
        return {k: _clean(g, v) for k, v in x.items()}
    if isinstance(x, PiecewiseWord):
        return [(set_str(U), str(w)) for U, w in x.pieces]
    if isinstance(x, Cylinder):
        return set_str(CompactOpen(g, [x]))
    if isinstance(x, (list, tuple)):
        return [_clean(g, v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(str(v) for v in x)
    if isinstance(x, Path):
        return g.path_str(x)
    if isinstance(x, BoundaryPoint):
        return point_str(x)
    if isinstance(x, CompactOpen):
        return set_str(x)
    if isinstance(x, ReducedWord):
        return str(x)
    return x


# ----------------------------------------------------------------- handlers

def _run_check(args):
    g = corpus.by_name(args.graph)
    prop = args.property
    rep = {"check": prop, "graph": args.graph}
    if prop == "l":
        holds, witness = condition_l(g)
        rep.update(holds=holds, witness=witness and g.path_str(witness))
        return rep, 0 if holds else 1
    if prop == "k":
        holds, witness = condition_k(g)
        rep.update(holds=holds,
                   witness=witness and (witness[0], g.path_str(witness[1])))
        return rep, 0 if holds else 1
    if prop == "pi":
        pi = condition_pi(g)
        rep.update(holds=pi.holds, breaking=sorted(pi.breaking),
                   k_witness=_clean(g, pi.k_witness),
                   tail_witness=_clean(g, pi.tail_witness))
        return rep, 0 if pi.holds else 1
    if prop == "tf":
        wb = _effective(args.word_bound, 8)
        depth = _effective(args.depth, 2)
        out = topological_freeness_report(g, word_bound=wb, stem_depth=depth,
                                          copies=args.copies)
        rep.update(_clean(g, out))
        if not out["free"]:
            return rep, 1
        return rep, 0 if out["verified"] else INCONCLUSIVE
    if prop == "action":
        wl = _effective(args.word_bound, 2)
        out = verify_partial_action(g, word_len=wl, copies=args.copies)
        rep.update(_clean(g, out))
        return rep, 0 if not out["failures"] else 1
    if prop == "sigma":
        depth = _effective(args.depth, 2)
        out = verify_partial_hom(g, depth, copies=args.copies)
        rep.update(_clean(g, out))
        ok = not out["failures"] and not out["idempotent_pure_failures"]
        return rep, 0 if ok else 1
    if prop == "invariance":
        depth = _effective(args.depth, 2)
        out = check_boundary_invariance(g, depth, copies=args.copies)
        rep.update(_clean(g, out))
        return rep, 0 if not out["violations"] else 1
    raise ExprError(f"unknown property {prop!r}")


def _run_witness(args):
    g = corpus.by_name(args.graph)
    U = parse_set_expr(g, args.set)
    depth_cap = _effective(args.depth, None)
    rep = {"graph": args.graph, "set": set_str(U)}
    pair = find_witness(g, U, depth_cap=depth_cap)
    if pair is None:
        rep["found"] = False
        return rep, INCONCLUSIVE
    rep["found"] = True
    rep["pair"] = _clean(g, list(pair))
    check = verify_witness(g, U, list(pair))
    rep["verified"] = check["ok"]
    rep["failures"] = _clean(g, check["failures"])
    code = 0 if check["ok"] else 1
    if args.expand and check["ok"]:
        maps = expand_witness(g, pair, args.expand)
        more = verify_witness(g, U, maps)
        rep["expanded"] = {"count": args.expand, "verified": more["ok"]}
        if not more["ok"]:
            code = 1
    return rep, code


_OE_EXAMPLES = {
    "identity-g2": lambda: identity_cocycle(corpus.by_name("g2")),
    "swap-g2": lambda: swap_cocycle_two_loops(corpus.by_name("g2")),
    "parallel-p2": lambda: swap_cocycle_parallel_pair(corpus.by_name("p2")),
}


def _run_oe(args):
    coc = _OE_EXAMPLES[args.example]()
    depth = _effective(args.depth, 3)
    g = coc.homeo.source_graph
    first = coe_check(coc, depth=depth)
    oe = coe_to_oe(coc)
    second = oe_check(oe, depth=depth)
    back = oe_to_coe(oe)
    again = coe_to_oe(back)
    rep = {
        "example": args.example,
        "cocycle_check": _clean(g, first),
        "pieces": [(set_str(CompactOpen(g, [c])), k, l)
                   for c, k, l in oe.pieces],
        "orbit_check": _clean(g, second),
        "cocycle_roundtrip_agrees": cocycles_agree(coc, back, depth=depth),
        "orbit_roundtrip_agrees": oe_agree(oe, again, depth=depth),
    }
    ok = (not first["failures"] and not second["failures"]
          and rep["cocycle_roundtrip_agrees"] and rep["orbit_roundtrip_agrees"])
    return rep, 0 if ok else 1


def _run_sgp(args):
    fam = parse_family(args.family)
    act = args.action
    rep = {"family": fam.name(), "action": act}
    if act == "independence":
        if isinstance(fam, AffineFamily):
            out = fam.independence_report(bound=_effective(args.modulus_bound, 6))
        else:
            out = fam.independence_report(trials=args.trials, seed=args.seed)
        rep.update(out)
        return rep, 0 if out["independent"] else 1
    if act == "kernel":
        if isinstance(fam, NkFamily):
            out = fam.g0_report()
        elif isinstance(fam, FreeMonoidFamily):
            out = fam.g0_report(bound=_effective(args.word_bound, 4))
        else:
            out = fam.g0_report(bound=_effective(args.modulus_bound, 2))
        rep.update(out)
        # the kernel verdict is a computed group, not a pass/fail check
        return rep, 0 if out.get("exact") else INCONCLUSIVE
    if act == "witness":
        if isinstance(fam, AffineFamily):
            ideal = parse_progression(args.ideal or "0+1Z")
            excl = [parse_progression(t) for t in args.exclude]
            out = axb_paradox_witness(fam, ideal, excl)
        else:
            out = boundary_paradox_witness(fam, args.ideal or "",
                                           args.exclude,
                                           depth=_effective(args.depth, 8))
            if out is None:
                rep["found"] = False
                return rep, INCONCLUSIVE
        rep.update(out)
        rep["found"] = True
        return rep, 0 if out["verified"] else 1
    if act == "minimality":
        if not args.stages:
            raise ExprError("minimality needs --stages")
        moduli = [int(t) for t in args.stages.split(",") if t.strip()]
        if isinstance(fam, NkFamily):
            stages = [(s,) * fam.k for s in moduli]
        else:
            stages = moduli
        out = boundary_minimality_probe(fam, stages)
        rep.update(out)
        return rep, 0 if out["proper_filter"] else 1
    if act == "rcomplete":
        gens, rels = thompson_truncated(args.count)
        out = rcomplete_hypothesis_check(gens, rels)
        rep.update(generators=gens,
                   relations=[(" ".join(l), " ".join(r)) for l, r in rels],
                   **out)
        return rep, 0 if out["holds"] else 1
    raise ExprError(f"unknown action {act!r}")


# --------------------------------------------------------------------- main

def _build_parser():
    p = _Parser(prog="gforge", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    names = sorted(corpus.BUILDERS)

    def common(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")

    c = sub.add_parser("check", help="structural conditions and action laws")
    c.add_argument("property",
                   choices=("l", "k", "pi", "tf", "action", "sigma",
                            "invariance"))
    c.add_argument("--graph", required=True, choices=names)
    c.add_argument("--depth", type=int)
    c.add_argument("--word-bound", type=int)
    c.add_argument("--copies", type=int, default=2)
    common(c)

    w = sub.add_parser("witness", help="paradoxical pair on a compact open set")
    w.add_argument("graph", choices=names)
    w.add_argument("set", help="e.g. 'Z(v)' or 'Z(a.a - {b}) + Z(b.a)'")
    w.add_argument("--depth", type=int)
    w.add_argument("--expand", type=int)
    common(w)

    o = sub.add_parser("oe", help="cocycle and orbit-data roundtrips")
    o.add_argument("example", choices=sorted(_OE_EXAMPLES))
    o.add_argument("--depth", type=int)
    common(o)

    s = sub.add_parser("sgp", help="semigroup family checks")
    s.add_argument("family", help="nk:K, free:N, or affine")
    s.add_argument("action",
                   choices=("independence", "kernel", "witness", "minimality",
                            "rcomplete"))
    s.add_argument("--ideal")
    s.add_argument("--exclude", action="append", default=[])
    s.add_argument("--stages")
    s.add_argument("--count", type=int, default=4)
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--depth", type=int)
    s.add_argument("--word-bound", type=int)
    s.add_argument("--modulus-bound", type=int)
    common(s)
    return p


_HANDLERS = {
    "check": _run_check,
    "witness": _run_witness,
    "oe": _run_oe,
    "sgp": _run_sgp,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return stop.code if isinstance(stop.code, int) else USAGE
    t0 = time.perf_counter()
    try:
        rep, code = _HANDLERS[args.command](args)
    except ExprError as err:
        print(f"gforge: {err}", file=sys.stderr)
        return USAGE
    except (GraphError, BoundaryError, OrbitError, SemigroupError) as err:
        print(f"gforge: {err}", file=sys.stderr)
        return 1
    rep["elapsed"] = round(time.perf_counter() - t0, 6)
    sys.stdout.write(render(rep, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
