import itertools

import numpy as np
import pytest

from omstate.baer import (
    BaerStarSemigroup,
    IeStarSemigroup,
    closed_projections,
    extend_internal,
    extend_prestate,
    iestar_product,
    internalize_star,
    pc_as_oml,
    projections,
    semigroup_product,
    two_element,
    verify_baer_axioms,
    verify_bs1,
    verify_iestar_axioms,
)
from omstate.coordinatize import generate_s0
from omstate.corpus import principal_state
from omstate.errors import (
    CarrierMismatch,
    NotAnIeLattice,
    NotAnIeStarSemigroup,
    NotAPrestate,
    NotAStarPrestate,
    ResourceCap,
)
from omstate.ie import internalize, ie_product, verify_ie_axioms
from omstate.oml import find_isomorphism, product, verify_oml_axioms
from omstate.states import StateMap, classify, enumerate_states, is_boolean_star_prestate

PBAER = [f"PBAER1.{i}" for i in range(1, 6)]
BS2 = [f"BS2.{i}" for i in range(1, 7)]


def restrict(S, values):
    pc = pc_as_oml(S)
    return np.asarray(values)[list(pc.elements)]


def test_two_element_semigroup():
    S = two_element()
    assert S.one == 1
    assert verify_baer_axioms(S).all_ok
    assert closed_projections(S) == [0, 1] and projections(S) == [0, 1]
    pc = pc_as_oml(S)
    assert pc.oml.n == 2 and verify_oml_axioms(pc.oml).ok


def test_s0_b4(lat):
    G = generate_s0(lat["B4"])
    assert verify_baer_axioms(G.base).all_ok
    assert len(closed_projections(G.base)) == 4
    assert find_isomorphism(pc_as_oml(G.base).oml, lat["B4"]) is not None


def test_s0_mo2_closed_projections(lat):
    G = generate_s0(lat["MO2"])
    assert len(closed_projections(G.base)) == 6
    assert find_isomorphism(pc_as_oml(G.base).oml, lat["MO2"]) is not None


def test_every_single_mul_mutation_of_s0_b4_breaks_an_axiom(lat):
    S = generate_s0(lat["B4"]).base
    for i, j, v in itertools.product(range(S.m), range(S.m), range(S.m)):
        if S.mul[i, j] == v:
            continue
        mul = S.mul.copy()
        mul[i, j] = v
        report = verify_baer_axioms(BaerStarSemigroup(mul, S.star, S.prime, S.zero))
        assert not report.ok, (i, j, v)
        assert any(f.witness is not None for f in report.failures())


def test_corrupt_semigroup_has_no_pc_lattice():
    # identity star, constant-zero prime: the image of ′ is just {0}, no top
    S = BaerStarSemigroup([[0, 0], [0, 1]], [0, 1], [0, 0], 0)
    report = verify_baer_axioms(S)
    assert not report["3-one"].passed
    # P_c collapses to a single point, so it cannot be the lattice of S
    assert pc_as_oml(S).oml.n == 1


def test_table_validation():
    with pytest.raises(CarrierMismatch):
        BaerStarSemigroup([[0, 0]], [0, 1], [1, 0], 0)
    with pytest.raises(CarrierMismatch):
        BaerStarSemigroup([[0, 0], [0, 2]], [0, 1], [1, 0], 0)


def test_pbaer_and_bs_diagnostics_on_corpus(star_algebras):
    for name, S in star_algebras.items():
        report = verify_baer_axioms(S.base)
        assert report.all_ok, (name, report.format())
        ie_report = verify_iestar_axioms(S.base, S.s)
        assert ie_report.all_ok, (name, ie_report.format())


def test_bs1_on_extended_prestates(star_algebras):
    for name, S in star_algebras.items():
        pc = pc_as_oml(S.base)
        for sigma0 in enumerate_states(pc.oml):
            sigma = extend_prestate(S.base, sigma0.array())
            assert is_boolean_star_prestate(S.base, sigma)
            assert verify_bs1(S.base, sigma).all_ok, name


def test_extend_prestate(star_algebras, lat):
    S = two_element()
    ext = extend_prestate(S, [0, 1])
    assert ext.values == (0, 1)
    G = generate_s0(lat["B4"])
    B4 = lat["B4"]
    sa = principal_state(B4, "a")
    pc = pc_as_oml(G.base)
    sigma0 = [sa[int(G.reps[e].table[B4.one])] for e in pc.elements]
    ext = extend_prestate(G.base, sigma0)
    assert ext.values == tuple(sa[int(r.table[B4.one])] for r in G.reps)
    with pytest.raises(NotAPrestate):
        extend_prestate(G.base, [1] * 4)
    with pytest.raises(CarrierMismatch):
        extend_prestate(G.base, [0, 1])


def test_extension_is_unique_among_all_candidates(star_algebras):
    """No other Boolean* pre-state restricts to the same σ₀ (exhaustive at small size)."""
    for name in ("S0(B4/σa)", "S0(2^3/id)", "S(B4/σa)"):
        S = star_algebras[name].base
        pc = pc_as_oml(S)
        closed = set(pc.elements)
        free = [x for x in range(S.m) if x not in closed]
        for sigma0 in enumerate_states(pc.oml):
            ext = extend_prestate(S, sigma0.array())
            base = np.array(ext.values)
            count = 0
            for bits in itertools.product((0, 1), repeat=len(free)):
                cand = base.copy()
                cand[free] = bits
                if is_boolean_star_prestate(S, cand):
                    count += 1
                    assert tuple(cand) == ext.values
            assert count == 1


def test_extend_internal(lat, star_algebras):
    S = two_element()
    ie = extend_internal(S, [0, 1])
    assert ie.s.tolist() == [0, 1]
    G = generate_s0(lat["B4"])
    pc = pc_as_oml(G.base)
    s_lat = internalize(pc.oml, principal_state(pc.oml, pc.oml.atoms()[0])).s
    ie = extend_internal(G.base, s_lat)
    assert verify_iestar_axioms(G.base, ie.s).all_ok
    assert np.array_equal(pc.pos[restrict(G.base, ie.s)], s_lat)
    with pytest.raises(NotAnIeLattice):
        extend_internal(G.base, [0, 1, 2, 3][::-1])


def test_iestar_axiom_failures(lat):
    G = generate_s0(lat["B4"])
    S = G.base
    one = np.full(S.m, S.one)
    report = verify_iestar_axioms(S, one)
    assert not report["bs2"].passed
    M = generate_s0(lat["MO2"]).base
    report = verify_iestar_axioms(M, M.closure())
    assert not report["bs5"].passed
    with pytest.raises(NotAnIeStarSemigroup):
        IeStarSemigroup(M, M.closure())


def test_internalize_star(lat):
    S = two_element()
    assert internalize_star(S, [0, 1]).s.tolist() == [0, 1]
    with pytest.raises(NotAStarPrestate):
        internalize_star(S, [1, 1])
    B4 = lat["B4"]
    G = generate_s0(B4)
    pc = pc_as_oml(G.base)
    sa = principal_state(B4, "a")
    # lattice indices of pc.oml follow closed-projection order
    sigma0 = [sa[int(G.reps[e].table[B4.one])] for e in pc.elements]
    route1 = internalize_star(G.base, extend_prestate(G.base, sigma0))
    route2 = extend_internal(G.base, internalize(pc.oml, sigma0).s)
    assert np.array_equal(route1.s, route2.s)
    assert verify_iestar_axioms(G.base, route1.s).all_ok


def test_two_routes_agree_everywhere(star_algebras):
    for name, S in star_algebras.items():
        pc = pc_as_oml(S.base)
        for sigma0 in enumerate_states(pc.oml):
            a = internalize_star(S.base, extend_prestate(S.base, sigma0.array())).s
            b = extend_internal(S.base, internalize(pc.oml, sigma0.array()).s).s
            assert np.array_equal(a, b), name
            # coherence of s_σ with σ on P_c
            v = sigma0.array()
            s_pc = pc.pos[restrict(S.base, a)]
            assert (v == v[s_pc]).all()


def test_pc_of_product_is_product_of_pcs(star_algebras):
    pairs = [("S0(2/id)", "S0(B4/σa)"), ("S0(MO2/σ)", "S0(2/id)"), ("S0(B4/id)", "S0(2^3/σa)")]
    for n1, n2 in pairs:
        S1, S2 = star_algebras[n1], star_algebras[n2]
        P = iestar_product(S1, S2)
        pc, pc1, pc2 = pc_as_oml(P.base), pc_as_oml(S1.base), pc_as_oml(S2.base)
        # map each closed projection (e1, e2) to the product lattice index
        f = [pc1.pos[e // S2.m] * pc2.oml.n + pc2.pos[e % S2.m] for e in pc.elements]
        L = pc.oml
        Q = product(pc1.oml, pc2.oml)
        assert sorted(f) == list(range(Q.n))
        f = np.array(f)
        assert (Q.leq[np.ix_(f, f)] == L.leq).all() and (Q.neg[f] == f[L.neg]).all()
        s_prod = ie_product(S1.pc_ie()[0], S2.pc_ie()[0]).s
        s_pc = pc.pos[restrict(P.base, P.s)]
        assert (s_prod[f] == f[s_pc]).all()


def test_product_cap(star_algebras):
    S = star_algebras["S0(MO2x2/example)"].base
    with pytest.raises(ResourceCap):
        semigroup_product(S, S, cap=100)
    assert semigroup_product(two_element(), two_element()).m == 4


def test_pc_ie_is_an_ie_lattice(star_algebras):
    for S in star_algebras.values():
        L, _ = S.pc_ie()
        assert verify_ie_axioms(L.base, L.s).all_ok
