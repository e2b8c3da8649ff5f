"""Standard small instances used by the CLI demo and the test-suite."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .baer import IeStarSemigroup, extend_internal, iestar_product, pc_as_oml
from .coordinatize import (
    GeneratedSemigroup,
    ResiduatedFn,
    enumerate_full_s,
    generate_s0,
    semigroup_from_functions,
)
from .ie import IeLattice, ie_product, internalize
from .oml import Oml, boolean_algebra, mo, mo2_times_2
from .states import StateMap, enumerate_states

EXAMPLE_TRUE_SET = ("1", "¬a", "¬b", "¬c", "¬d", "¬e")


@lru_cache(maxsize=None)
def lattices() -> dict[str, Oml]:
    return {
        "2": boolean_algebra(1),
        "B4": boolean_algebra(2),
        "2^3": boolean_algebra(3),
        "MO2": mo(2),
        "MO2x2": mo2_times_2(),
    }


def example_state(L: Oml | None = None) -> StateMap:
    """Pre-state on MO2×2 that is 1 exactly on the coatoms and 1."""
    L = L or lattices()["MO2x2"]
    return StateMap.from_true_set(L, EXAMPLE_TRUE_SET)


def principal_state(L: Oml, a) -> StateMap:
    """σ(x) = 1 iff a ≤ x (a two-valued state when a is an atom of a Boolean algebra)."""
    a = L.index(a)
    return StateMap(tuple(int(L.leq[a, x]) for x in range(L.n)), L)


def swap_map(B4: Oml | None = None) -> ResiduatedFn:
    """The residuated map on B₄ exchanging a and ¬a."""
    B4 = B4 or lattices()["B4"]
    a, na = B4.index("a"), B4.index("¬a")
    table = np.arange(B4.n)
    table[a], table[na] = na, a
    return ResiduatedFn(B4, table)


def first_state(L: Oml) -> StateMap:
    return enumerate_states(L, "state", limit=1)[0]


@lru_cache(maxsize=None)
def ie_corpus() -> dict[str, IeLattice]:
    lat = lattices()
    two, b4, b8, m2, m22 = (lat[k] for k in ("2", "B4", "2^3", "MO2", "MO2x2"))
    out = {
        "2/id": IeLattice(two, np.arange(2)),
        "B4/σa": internalize(b4, principal_state(b4, "a")),
        "B4/id": IeLattice(b4, np.arange(4)),
        "2^3/σa": internalize(b8, principal_state(b8, "a")),
        "2^3/id": IeLattice(b8, np.arange(8)),
        "MO2/σ": internalize(m2, first_state(m2)),
        "MO2x2/example": internalize(m22, example_state(m22)),
        "MO2x2/state": internalize(m22, first_state(m22)),
    }
    out["MO2/σ×2"] = ie_product(out["MO2/σ"], out["2/id"])
    return out


@lru_cache(maxsize=None)
def s0_corpus() -> dict[str, GeneratedSemigroup]:
    return {name: generate_s0(L) for name, L in ie_corpus().items()}


def full_s(L) -> GeneratedSemigroup:
    """S(L) with its abstract tables; for an IeLattice also the extended s."""
    base_l = L.base if isinstance(L, IeLattice) else L
    return semigroup_from_functions(base_l, enumerate_full_s(base_l))


@lru_cache(maxsize=None)
def star_corpus() -> dict[str, IeStarSemigroup]:
    """IE*_B-semigroups: every S₀ above, full S(B₄) and two products."""
    out = {f"S0({k})": G.ie for k, G in s0_corpus().items()}
    ie = ie_corpus()
    for key in ("B4/σa", "B4/id"):
        L = ie[key]
        G = full_s(L.base)
        pc = pc_as_oml(G.base)
        s0 = np.empty(pc.oml.n, dtype=np.intp)
        for a in range(L.n):
            s0[pc.pos[G.gen_map[a]]] = pc.pos[G.gen_map[L.s[a]]]
        out[f"S({key})"] = extend_internal(G.base, s0)
    out["S0(2/id)×S0(B4/σa)"] = iestar_product(out["S0(2/id)"], out["S0(B4/σa)"])
    out["S0(MO2/σ)×S0(2/id)"] = iestar_product(out["S0(MO2/σ)"], out["S0(2/id)"])
    return out


def indecomposable(name: str) -> bool:
    from .ie import is_directly_indecomposable

    return is_directly_indecomposable(ie_corpus()[name])
