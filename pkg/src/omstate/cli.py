"""``omstate`` command-line interface.

Exit codes: 0 success or equation holds, 1 counterexample or axiom failure,
2 usage or input error, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .baer import (
    BaerStarSemigroup,
    IeStarSemigroup,
    extend_prestate,
    internalize_star,
    pc_as_oml,
    verify_baer_axioms,
    verify_iestar_axioms,
)
from .config import RunConfig
from .coordinatize import (
    enumerate_full_s,
    generate_s0,
    iso_check,
    lift_homomorphism,
    product_iso,
    sasaki,
)
from .corpus import example_state, lattices, swap_map
from .errors import (
    CarrierMismatch,
    InvalidSpec,
    OmstateError,
    ResourceCap,
    SignatureMismatch,
    TermSyntaxError,
)
from .ie import IeLattice, check_subvariety, internalize
from .io import algebra_to_json, dump_algebra, load_algebra
from .oml import Oml, OmlSpec, build_oml, center, verify_oml_axioms
from .states import StateMap, classify, enumerate_states
from .terms import (
    LATTICE,
    STAR,
    check_equation,
    format_equation,
    named,
    parse_equation,
    registry,
    sugared_translation,
    translate,
)

OK, FAIL, USAGE, CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _out(cfg: RunConfig, text: str, data: dict | None = None):
    if cfg.output_format == "json":
        print(json.dumps(data if data is not None else {"output": text}, ensure_ascii=False))
    else:
        print(text)


def _load(path, cfg, kinds=None):
    A = load_algebra(path, cap=cfg.element_cap)
    if kinds and not isinstance(A, kinds):
        raise UsageError(f"{path} holds a {type(A).__name__}, expected {' or '.join(k.__name__ for k in kinds)}")
    return A


def _lattice_of(A):
    return A.base if isinstance(A, IeLattice) else A


def _names(A, idx):
    return tuple(A.names[i] for i in idx)


# ----------------------------------------------------------------- commands


def cmd_build(args, cfg):
    L = _load(args.file, cfg, (Oml, IeLattice))
    L = _lattice_of(L)
    lines = [f"{L.n} elements, {len(L.atoms())} atoms",
             "center: {" + ", ".join(_names(L, center(L))) + "}"]
    data = {"n": L.n, "atoms": _names(L, L.atoms()), "center": _names(L, center(L))}
    code = OK
    if args.verify:
        report = verify_oml_axioms(L)
        lines.append(report.format())
        data["verified"] = report.ok
        code = OK if report.ok else FAIL
    _out(cfg, "\n".join(lines), data)
    return code


def cmd_verify_oml(args, cfg):
    with open(args.file, encoding="utf-8") as fh:
        spec = OmlSpec.from_json(json.load(fh))
    L = build_oml(spec, check=False, cap=cfg.element_cap)
    report = verify_oml_axioms(L)
    _out(cfg, report.format(), {"ok": report.ok, "failures": [f.name for f in report.failures()]})
    return OK if report.ok else FAIL


def cmd_verify_baer(args, cfg):
    S = _load(args.file, cfg, (BaerStarSemigroup, IeStarSemigroup))
    base = S.base if isinstance(S, IeStarSemigroup) else S
    reports = [verify_baer_axioms(base)]
    if isinstance(S, IeStarSemigroup):
        reports.append(verify_iestar_axioms(base, S.s))
    ok = all(r.ok for r in reports)
    _out(cfg, "\n".join(r.format() for r in reports),
         {"ok": ok, "failures": [f.name for r in reports for f in r.failures()]})
    return OK if ok else FAIL


def cmd_states(args, cfg):
    L = _lattice_of(_load(args.file, cfg, (Oml, IeLattice)))
    res = enumerate_states(L, args.kind, args.limit, cap=cfg.element_cap, workers=cfg.worker_count)
    lines = [st.bits() for st in res]
    if res.truncated:
        lines.append(f"(truncated at {args.limit})")
    _out(cfg, "\n".join(lines) if lines else "(none)",
         {"states": [st.bits() for st in res], "truncated": res.truncated})
    return OK


def cmd_internalize(args, cfg):
    L = _lattice_of(_load(args.file, cfg, (Oml, IeLattice)))
    sigma = StateMap.from_bits(args.state, L)
    ie = internalize(L, sigma)
    if args.emit:
        dump_algebra(ie, args.emit)
    _out(cfg, dump_algebra(ie), algebra_to_json(ie))
    return OK


def cmd_check_variety(args, cfg):
    L = _load(args.file, cfg, (IeLattice,))
    holds = check_subvariety(L, args.tag)
    lines = [f"{args.tag}: {'holds' if holds else 'fails'}"]
    if not holds:
        from .ie import SUBVARIETY_TAGS

        for name in SUBVARIETY_TAGS[args.tag]:
            for eq in registry()[name]:
                v = check_equation(L, eq, cfg.var_cap)
                if not v.holds:
                    lines.append(f"  {format_equation(eq, True)} fails at {v.counterexample.format()}")
    _out(cfg, "\n".join(lines), {"tag": args.tag, "holds": holds})
    return OK if holds else FAIL


def cmd_coordinatize(args, cfg):
    A = _load(args.file, cfg, (Oml, IeLattice))
    G = generate_s0(A, cap=args.cap or cfg.semigroup_cap, lattice_cap=max(16, _lattice_of(A).n))
    cert = iso_check(A, G)
    report = verify_baer_axioms(G.base)
    if args.emit:
        dump_algebra(G.ie if G.ie is not None else G.base, args.emit)
    lines = [f"S0 has {G.m} elements; P_c has {len(pc_as_oml(G.base).elements)}",
             f"Baer axioms: {'pass' if report.ok else 'FAIL'}",
             f"a -> φ_a isomorphism onto P_c: {'yes' if cert else 'no ' + cert.reason}"]
    lines += [f"  {i}: {G.base.name(i)}" for i in range(G.m)] if args.list else []
    ok = report.ok and bool(cert)
    _out(cfg, "\n".join(lines), {"m": G.m, "baer": report.ok, "iso": bool(cert), "elements": list(G.base.names)})
    return OK if ok else FAIL


def cmd_full_s(args, cfg):
    L = _lattice_of(_load(args.file, cfg, (Oml, IeLattice)))
    fns = enumerate_full_s(L)
    lines = [f"{len(fns)} residuated maps"] + [f"  {f.describe()}" for f in fns]
    _out(cfg, "\n".join(lines), {"count": len(fns), "tables": [f.table.tolist() for f in fns]})
    return OK


def cmd_extend(args, cfg):
    S = _load(args.file, cfg, (BaerStarSemigroup, IeStarSemigroup))
    base = S.base if isinstance(S, IeStarSemigroup) else S
    pc = pc_as_oml(base)
    sigma0 = StateMap.from_bits(args.state)
    ext = extend_prestate(base, sigma0)
    lines = ["P_c order: " + " ".join(pc.oml.names), f"extended: {ext.bits()}"]
    if args.emit:
        dump_algebra(internalize_star(base, ext), args.emit)
    _out(cfg, "\n".join(lines), {"state": ext.bits()})
    return OK


def cmd_translate(args, cfg):
    eq = parse_equation(args.equation, LATTICE)
    shown = format_equation(sugared_translation(eq), True)
    prim = format_equation(translate(eq), True)
    _out(cfg, f"{shown}\nprimitive: {prim}", {"display": shown, "primitive": prim,
                                                "ascii": format_equation(translate(eq))})
    return OK


def cmd_check_eq(args, cfg):
    A = _load(args.file, cfg)
    if args.named:
        eqs = named(args.named)
    elif args.equation:
        sig = STAR if isinstance(A, (BaerStarSemigroup, IeStarSemigroup)) else LATTICE
        eqs = (parse_equation(args.equation, sig),)
    else:
        raise UsageError("give an equation or --named NAME")
    var_cap = args.vars or cfg.var_cap
    lines, results, code = [], [], OK
    for eq in eqs:
        v = check_equation(A, eq, var_cap, workers=cfg.worker_count)
        text = format_equation(eq, True)
        if v.holds:
            lines.append(f"holds: {text}")
        else:
            code = FAIL
            names = A.names
            lines.append(f"fails: {text}\n  at {v.counterexample.format()}: "
                         f"{names[v.lhs_value]} ≠ {names[v.rhs_value]}")
        results.append({"equation": text, "holds": v.holds,
                        "counterexample": None if v.holds else
                        {f"x{k}": A.names[e] for k, e in v.counterexample.assignment.items()}})
    _out(cfg, "\n".join(lines), {"results": results})
    return code


def cmd_product_iso(args, cfg):
    L1 = _load(args.file1, cfg, (Oml, IeLattice))
    L2 = _load(args.file2, cfg, (Oml, IeLattice))
    cert = product_iso(L1, L2, cap=cfg.semigroup_cap)
    m, m1, m2 = cert.sizes
    text = f"|S0(L1×L2)| = {m}, |S0(L1)|·|S0(L2)| = {m1}·{m2}: " + ("isomorphic" if cert else f"not isomorphic ({cert.reason})")
    _out(cfg, text, {"ok": cert.ok, "sizes": cert.sizes})
    return OK if cert else FAIL


def _parse_map(text, L1, L2):
    text = text.strip()
    if text.startswith("["):
        return [L2.index(v) if isinstance(v, str) else int(v) for v in json.loads(text)]
    f = [None] * L1.n
    for part in text.split(","):
        a, b = part.split(":")
        f[L1.index(a.strip())] = L2.index(b.strip())
    if None in f:
        raise UsageError("map must assign every element")
    return f


def cmd_lift_hom(args, cfg):
    A1 = _load(args.file1, cfg, (Oml, IeLattice))
    A2 = _load(args.file2, cfg, (Oml, IeLattice))
    try:
        f = _parse_map(args.map, _lattice_of(A1), _lattice_of(A2))
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad --map: {exc}") from exc
    h = lift_homomorphism(A1, A2, f, cap=cfg.semigroup_cap)
    lines = [f"g: S0(L1) ({h.source.m}) -> S0(L2) ({h.target.m}), "
             f"{'bijective' if h.is_bijective else 'surjective'}"]
    lines += [f"  {h.source.base.name(i)} ↦ {h.target.base.name(j)}" for i, j in enumerate(h.g)]
    _out(cfg, "\n".join(lines), {"g": h.g.tolist(), "bijective": h.is_bijective})
    return OK


def demo_examples() -> list[str]:
    lines = []
    L = lattices()["MO2x2"]
    sigma = example_state(L)
    cls = classify(L, sigma)
    b, c = L.index("b"), L.index("c")
    bc = L.join[b, c]
    lines.append("MO2×2 with σ = 1 on {" + ", ".join(L.names[i] for i in range(L.n) if sigma[i]) + "}")
    lines.append(f"  Boolean pre-state: {'yes' if cls.is_boolean_prestate else 'no'}")
    lines.append(f"  two-valued state: {'yes' if cls.is_two_valued_state else 'no'}")
    assert (b, c) in cls.additivity_witnesses
    lines.append(f"  witness (b, c): b ⊥ c, σ(b∨c) = σ({L.name(bc)}) = {sigma[bc]}, "
                 f"σ(b)+σ(c) = {sigma[b] + sigma[c]}")
    others = ", ".join(f"({L.name(x)},{L.name(y)})" for x, y in cls.additivity_witnesses)
    lines.append(f"  all failing orthogonal pairs: {others}")
    ie = internalize(L, sigma)
    lines.append(f"  internalized s satisfies ITE_B: {'yes' if check_subvariety(ie, 'ITE_B') else 'no'}")

    B4 = lattices()["B4"]
    G = generate_s0(B4)
    commutative = bool((G.base.mul == G.base.mul.T).all())
    phi = swap_map(B4)
    phi_a = sasaki(B4, "a")
    fns = enumerate_full_s(B4)
    a = B4.index("a")
    left = (phi * phi_a)(a)
    right = (phi_a * phi)(a)
    lines.append("")
    lines.append(f"B₄: S0 has {G.m} elements, commutative: {'yes' if commutative else 'no'}")
    lines.append(f"  S(B₄) has {len(fns)} residuated maps; φ = ({phi.describe()}) in S(B₄): "
                 f"{'yes' if phi in fns else 'no'}, in S0(B₄): {'yes' if G.element(phi.table) >= 0 else 'no'}")
    lines.append(f"  a(φφ_a) = {B4.name(left)}, a(φ_aφ) = {B4.name(right)}, so φφ_a ≠ φ_aφ")

    lines.append("")
    lines.append("translated equations:")
    for name in ("ITE_B", "IJPE_B", "DIST"):
        eq = named(name)[0]
        lines.append(f"  {name}: {format_equation(eq, True)}")
        lines.append(f"    τ: {format_equation(sugared_translation(eq), True)}")
    return lines


def cmd_demo(args, cfg):
    if args.which != "paper":
        raise UsageError(f"unknown demo {args.which!r}")
    lines = demo_examples()
    _out(cfg, "\n".join(lines), {"lines": lines})
    return OK


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omstate", description="Finite orthomodular lattices, states and Baer *-semigroups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--element-cap", type=int)
    p.add_argument("--semigroup-cap", type=int)
    p.add_argument("--var-cap", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=("text", "json"))
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("build", cmd_build, "build a lattice from a file")
    sp.add_argument("file")
    sp.add_argument("--verify", action="store_true")
    add("verify-oml", cmd_verify_oml, "report every OML axiom").add_argument("file")
    add("verify-baer", cmd_verify_baer, "report Baer (and IE*_B) axioms").add_argument("file")
    sp = add("states", cmd_states, "enumerate two-valued maps")
    sp.add_argument("file")
    sp.add_argument("--class", dest="kind", choices=("prestate", "state", "jauch-piron"), default="prestate")
    sp.add_argument("--limit", type=int)
    sp = add("internalize", cmd_internalize, "turn a pre-state into an IE_B-lattice")
    sp.add_argument("file")
    sp.add_argument("state", help="bit string in element order")
    sp.add_argument("--emit")
    sp = add("check-variety", cmd_check_variety, "test ITE_B / IJPE_B / BOOL membership")
    sp.add_argument("file")
    sp.add_argument("--tag", required=True, choices=("ITE_B", "IJPE_B", "BOOL"))
    sp = add("coordinatize", cmd_coordinatize, "generate S0(L)")
    sp.add_argument("file")
    sp.add_argument("--cap", type=int)
    sp.add_argument("--emit")
    sp.add_argument("--list", action="store_true")
    add("full-s", cmd_full_s, "all residuated maps of a tiny lattice").add_argument("file")
    sp = add("extend", cmd_extend, "extend a pre-state on P_c(S) to S")
    sp.add_argument("file")
    sp.add_argument("--state", required=True)
    sp.add_argument("--emit")
    add("translate", cmd_translate, "print the τ image of a lattice equation").add_argument("equation")
    sp = add("check-eq", cmd_check_eq, "check an equation on an algebra")
    sp.add_argument("file")
    sp.add_argument("equation", nargs="?")
    sp.add_argument("--vars", type=int)
    sp.add_argument("--named")
    sp = add("product-iso", cmd_product_iso, "certify S0(L1×L2) ≅ S0(L1)×S0(L2)")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp = add("lift-hom", cmd_lift_hom, "lift a surjective homomorphism to S0")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp.add_argument("--map", required=True, help="'a:b,...' by name or a JSON list")
    sp = add("demo", cmd_demo, "run the worked examples")
    sp.add_argument("which", choices=("paper",))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and USAGE
    try:
        cfg = RunConfig.from_env(
            element_cap=args.element_cap,
            semigroup_cap=args.semigroup_cap,
            var_cap=args.var_cap,
            worker_count=args.workers,
            output_format=args.format,
        )
        return args.fn(args, cfg)
    except ResourceCap as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return CAP
    except (UsageError, CarrierMismatch, InvalidSpec, TermSyntaxError, SignatureMismatch, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except OmstateError as exc:
        msg = str(exc)
        if exc.witness is not None:
            msg += f" (witness {exc.witness})"
        print(f"failed: {msg}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
