import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from omstate.baer import pc_as_oml
from omstate.coordinatize import generate_s0
from omstate.corpus import example_state
from omstate.errors import DerivedOpOnNonProjection, ResourceCap, SignatureMismatch, TermSyntaxError
from omstate.ie import IeLattice, ie_product, internalize
from omstate.terms import (
    ONE,
    ZERO,
    Binary,
    Const,
    Equation,
    Unary,
    Var,
    all_terms,
    check_equation,
    complexity,
    displays,
    evaluate,
    expand_derived,
    format_equation,
    format_term,
    is_primitive_star,
    join,
    meet,
    mul,
    named,
    neg,
    parse_equation,
    parse_term,
    prime,
    registry,
    s_,
    sugared_translation,
    translate,
    valuation_correspondence_check,
    verify_translation_theorem,
)

x, y, z = Var(1), Var(2), Var(3)
LATTICE_SETS = ("DIST", "IE_B", "ITE_B", "IJPE_B")


def lattice_terms(max_leaves=4, signature="lattice"):
    leaves = st.sampled_from([ZERO, ONE, x, y, z])
    unary = ["neg", "s"] if signature == "lattice" else ["prime", "star", "s"]
    binary = ["meet", "join"] if signature == "lattice" else ["mul"]
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(Unary, st.sampled_from(unary), kids),
            st.builds(Binary, st.sampled_from(binary), kids, kids),
        ),
        max_leaves=max_leaves,
    )


# ---------------------------------------------------------------- parsing


def test_parse_examples():
    t = parse_term("s(x1 | (x2 & !x1))")
    assert t == s_(join(x, meet(y, neg(x))))
    assert parse_term("(x1' . x2)' . x2") == mul(prime(mul(prime(x), y)), y)
    assert parse_term("s(x ∨ (y ∧ ¬x))") == t
    assert parse_term("x1*'") == prime(Unary("star", x))
    assert parse_term("x1 | x2 & x3") == join(x, meet(y, z))
    assert parse_term("0 | 1") == join(ZERO, ONE)


def test_parse_errors():
    with pytest.raises(TermSyntaxError) as err:
        parse_term("x1 &")
    assert err.value.position == 4
    for bad in ("x1 & (x2", "x0", "s x1", "x1 ) x2", "", "x1 = x2"):
        with pytest.raises(TermSyntaxError):
            parse_term(bad)
    with pytest.raises(TermSyntaxError):
        parse_equation("x1 & x2")
    # operations outside the requested signature are rejected at their position
    with pytest.raises(TermSyntaxError) as err:
        parse_term("x1 . x2", "lattice")
    assert err.value.position == 3


@settings(max_examples=200, deadline=None)
@given(lattice_terms(8))
def test_printer_round_trip_lattice(t):
    assert parse_term(format_term(t)) == t
    assert parse_term(format_term(t, unicode=True)) == t


@settings(max_examples=200, deadline=None)
@given(lattice_terms(8, "star"))
def test_printer_round_trip_star(t):
    assert parse_term(format_term(t)) == t
    assert parse_term(format_term(t, unicode=True)) == t


def test_equation_fields():
    eq = parse_equation("s(x1) & x3 = x3")
    assert eq.variables == [1, 3] and eq.var_count == 2
    assert eq.signature == "lattice"
    assert parse_equation("x . y = y . x").signature == "star"
    assert complexity(parse_term("s(x1 | (x2 & !x1))")) == 4


# ------------------------------------------------------------ translation


def test_translate_examples():
    assert translate(x) == prime(x)
    assert translate(neg(x)) == prime(prime(x))
    assert translate(meet(x, y)) == parse_term("(x1'' . x2')' . x2'")
    assert translate(ZERO) == ZERO and translate(ONE) == ONE
    assert translate(s_(x)) == s_(prime(x))
    assert translate(join(x, y)) == translate(neg(meet(neg(x), neg(y))))


@settings(max_examples=200, deadline=None)
@given(lattice_terms(8))
def test_translate_is_primitive(t):
    out = translate(t)
    assert is_primitive_star(out)
    assert not {"meet", "join", "neg"} & {n.op for n in _ops(out)}


def _ops(t):
    if isinstance(t, Unary):
        yield t
        yield from _ops(t.arg)
    elif isinstance(t, Binary):
        yield t
        yield from _ops(t.left)
        yield from _ops(t.right)


def test_sugared_translation_agrees_with_translate(star_algebras):
    rng = random.Random(7)
    terms = [t for t in all_terms(2, 2)]
    for S in star_algebras.values():
        for t in rng.sample(terms, 40):
            a, b = translate(t), sugared_translation(t)
            assert check_equation(S, Equation(a, b)).holds
            assert check_equation(S, Equation(a, expand_derived(b))).holds


# ------------------------------------------------------------- evaluation


def test_eval_examples(lat):
    two = IeLattice(lat["2"], [0, 1])
    assert all(evaluate(two, join(x, neg(x)), [v]) == 1 for v in range(2))
    L = internalize(lat["MO2x2"], example_state())
    B = L.base
    assert evaluate(L, parse_term("s(b | c)".replace("b", "x1").replace("c", "x2")), ["b", "c"]) == B.one
    assert evaluate(L, parse_term("s(x1) | s(x2)"), ["b", "c"]) == B.zero


def test_eval_errors(lat, star_algebras):
    with pytest.raises(SignatureMismatch):
        evaluate(lat["B4"], s_(x), [1])
    with pytest.raises(SignatureMismatch):
        evaluate(lat["B4"], mul(x, y), [1, 2])
    S = star_algebras["S0(MO2/σ)"]
    non_closed = int(np.flatnonzero(~S.base.closed_mask())[0])
    with pytest.raises(DerivedOpOnNonProjection):
        evaluate(S, meet(x, y), [non_closed, S.base.one])
    with pytest.raises(DerivedOpOnNonProjection):
        check_equation(S, parse_equation("x & y = y & x"))
    with pytest.raises(KeyError):
        evaluate(lat["B4"], meet(x, y), {1: 0})


def test_check_equation_matches_oracle(lat, ie_algebras):
    eqs = [e for name in ("OML-laws",) + LATTICE_SETS for e in registry()[name]]
    for L in ie_algebras.values():
        R = oracles.Ref(L.base)
        s = [int(v) for v in L.s]
        for eq in eqs:
            mine = check_equation(L, eq)
            ref, env = oracles.holds_lattice(R, s, eq)
            assert mine.holds == ref, format_equation(eq)
            if not ref:
                assert mine.counterexample.assignment == env


def test_mo2_distributivity_fails_among_atoms(lat):
    M = lat["MO2"]
    v = check_equation(M, named("DIST")[0])
    assert not v.holds
    atoms = set(M.atoms()) | {int(M.neg[a]) for a in M.atoms()}
    assert set(v.counterexample.assignment.values()) <= atoms
    for k in ("2", "B4", "2^3"):
        assert check_equation(lat[k], named("DIST")[0]).holds


def test_ite_counterexample_on_mo2x2(lat):
    L = internalize(lat["MO2x2"], example_state(lat["MO2x2"]))
    eq = named("ITE_B")[0]
    v = check_equation(L, eq)
    assert not v.holds
    assert v.counterexample.format() == "x=a, y=b"
    b, c = L.base.index("b"), L.base.index("c")
    assert evaluate(L, eq.lhs, [b, c]) != evaluate(L, eq.rhs, [b, c])


def test_var_cap(lat):
    eq = parse_equation("x1 & x2 & x3 & x4 = x4 & x3 & x2 & x1")
    with pytest.raises(ResourceCap):
        check_equation(lat["B4"], eq)
    assert check_equation(lat["B4"], eq, var_cap=4).holds


def test_workers_do_not_change_verdicts(ie_algebras):
    S = generate_s0(ie_algebras["MO2/σ×2"]).ie
    for eq in registry()["ITE_B*"] + registry()["S-COMMUTE"]:
        assert check_equation(S, eq, workers=4) == check_equation(S, eq)


# ------------------------------------------------------- theorem checks


def test_translation_theorem_on_corpus(star_algebras):
    for name, S in star_algebras.items():
        if S.base.m > 36:
            continue
        for set_name in LATTICE_SETS:
            for eq in registry()[set_name]:
                assert verify_translation_theorem(S, eq).agree, (name, format_equation(eq))


def test_translation_theorem_examples(star_algebras):
    dist = named("DIST")[0]
    r = verify_translation_theorem(star_algebras["S0(B4/σa)"], dist)
    assert r.lattice_holds and r.star_holds
    r = verify_translation_theorem(star_algebras["S0(MO2/σ)"], dist)
    assert not r.lattice_holds and not r.star_holds


def test_valuation_correspondence(star_algebras):
    S = star_algebras["S0(MO2/σ)"]
    for t in ("x1", "x1 & x2", "s(!x1)", "x1 | s(x2)"):
        for v in itertools.product(range(S.base.m), repeat=2):
            assert valuation_correspondence_check(S, t, v)
    for S in star_algebras.values():
        for v in range(S.base.m):
            assert valuation_correspondence_check(S, "s(!x1)", [v])


@settings(max_examples=60, deadline=None)
@given(lattice_terms(6).filter(lambda t: complexity(t) <= 6), st.sampled_from(
    ["S0(B4/σa)", "S0(MO2/σ)", "S0(MO2x2/example)", "S(B4/σa)"]))
def test_translated_terms_land_in_closed_projections(star_algebras, t, name):
    # e ∈ P_c iff e′′ = e
    S = star_algebras[name]
    tt = translate(t)
    assert check_equation(S, Equation(prime(prime(tt)), tt)).holds


def test_products_agree_with_factors(ie_algebras):
    rng = random.Random(2024)
    names = sorted(ie_algebras)
    eqs = [e for n in ("DIST",) + LATTICE_SETS for e in registry()[n]]
    for _ in range(20):
        a, b = rng.choice(names), rng.choice(names)
        A, B = ie_algebras[a], ie_algebras[b]
        if A.n * B.n > 40:
            continue
        P = ie_product(A, B)
        eq = rng.choice(eqs)
        assert check_equation(P, eq).holds == (check_equation(A, eq).holds and check_equation(B, eq).holds)


# ---------------------------------------------------------------- registry


def test_registry_contents():
    reg = registry()
    assert set(reg) == {"OML-laws", "DIST", "IE_B", "ITE_B", "IJPE_B", "ITE_B*", "IJPE_B*", "DIST*", "S-COMMUTE"}
    assert len(reg["IE_B"]) == 5
    for starred, src in (("ITE_B*", "ITE_B"), ("IJPE_B*", "IJPE_B"), ("DIST*", "DIST")):
        assert reg[starred] == tuple(translate(e) for e in reg[src])
        assert displays()[starred] == tuple(sugared_translation(e) for e in reg[src])
    assert reg["S-COMMUTE"][0] == Equation(mul(s_(x), y), mul(y, s_(x)))
    assert format_equation(displays()["DIST*"][0], unicode=True) == "x′ ∧ (y′ ∨ z′) = (x′ ∧ y′) ∨ (x′ ∧ z′)"
    assert format_equation(displays()["ITE_B*"][0], unicode=True) == "s(x′ ∨ (y′ ∧ x′′)) = s(x′) ∨ s(y′ ∧ x′′)"
    with pytest.raises(TypeError):
        reg["new"] = ()
    with pytest.raises(KeyError):
        named("nope")
