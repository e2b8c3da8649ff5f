"""Finite Baer *-semigroups given by tables, and their IE*_B expansions.

Products are written left to right: ``mul[x, y]`` is ``x·y``.  The identity
is not stored; it is ``prime[zero]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CarrierMismatch,
    NotALattice,
    NotAnIeLattice,
    NotAnIeStarSemigroup,
    NotAPrestate,
    NotAStarPrestate,
    NotOrthomodular,
    OmstateError,
    ResourceCap,
)
from .ie import IeLattice, verify_ie_axioms
from .oml import Oml, OmlSpec, build_oml, center
from .report import AxiomReport, first_true
from .states import StateMap, classify, is_boolean_star_prestate

PRODUCT_CAP = 4096


def _table(a, shape):
    a = np.array(a, dtype=np.intp)
    if a.shape != shape:
        raise CarrierMismatch(f"table has shape {a.shape}, expected {shape}")
    if a.size and ((a < 0).any() or (a >= shape[0]).any()):
        raise CarrierMismatch("table entry out of range")
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class BaerStarSemigroup:
    mul: np.ndarray
    star: np.ndarray
    prime: np.ndarray
    zero: int
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        m = len(self.star)
        object.__setattr__(self, "mul", _table(self.mul, (m, m)))
        object.__setattr__(self, "star", _table(self.star, (m,)))
        object.__setattr__(self, "prime", _table(self.prime, (m,)))
        if self.names is None:
            object.__setattr__(self, "names", tuple(str(i) for i in range(m)))
        elif len(self.names) != m:
            raise CarrierMismatch("names must match the element count")
        else:
            object.__setattr__(self, "names", tuple(self.names))

    @property
    def m(self) -> int:
        return len(self.star)

    @property
    def one(self) -> int:
        return int(self.prime[self.zero])

    def __len__(self):
        return self.m

    def __repr__(self):
        return f"BaerStarSemigroup(m={self.m})"

    def name(self, i) -> str:
        return self.names[int(i)]

    def index(self, name) -> int:
        if isinstance(name, (int, np.integer)):
            return int(name)
        return self.names.index(name)

    def closure(self) -> np.ndarray:
        """x ↦ x′′."""
        return self.prime[self.prime]

    def derived_meet(self, e1, e2):
        """e₁ ∧ e₂ = e₁·(e₂′·e₁)′ (meaningful on closed projections)."""
        return self.mul[e1, self.prime[self.mul[self.prime[e2], e1]]]

    def derived_join(self, e1, e2):
        """e₁ ∨ e₂ = (e₁′ ∧ e₂′)′."""
        return self.prime[self.derived_meet(self.prime[e1], self.prime[e2])]

    def closed_mask(self) -> np.ndarray:
        mask = np.zeros(self.m, dtype=bool)
        mask[self.prime] = True
        return mask


def projections(S: BaerStarSemigroup) -> list[int]:
    """P(S): elements with e = e* = e·e."""
    idx = np.arange(S.m)
    return [int(e) for e in np.flatnonzero((S.star == idx) & (S.mul[idx, idx] == idx))]


def closed_projections(S: BaerStarSemigroup) -> list[int]:
    """P_c(S) as the image of ′; each member is checked to satisfy e′′ = e."""
    pc = sorted({int(v) for v in S.prime})
    proj = set(projections(S))
    for e in pc:
        if S.prime[S.prime[e]] != e or e not in proj:
            raise OmstateError(f"image of ′ contains {S.name(e)}, which is not a closed projection", (e,))
    return pc


def verify_baer_axioms(S: BaerStarSemigroup) -> AxiomReport:
    """Axioms 1–8, then the standard consequences (PBAER1.1–5) as diagnostics."""
    m = S.m
    mul, star, prime, zero = S.mul, S.star, S.prime, S.zero
    one = S.one
    x = np.arange(m)[:, None]
    y = np.arange(m)[None, :]
    r = AxiomReport(f"Baer *-semigroup axioms (m={m})", names=S.names)
    x3, y3, z3 = x[:, :, None], y[:, :, None], np.arange(m)[None, None, :]
    r.add("1-associative", mul[mul[x3, y3], z3] != mul[x3, mul[y3, z3]])
    idx = np.arange(m)
    r.add("2-zero", (mul[zero, idx] != zero) | (mul[idx, zero] != zero))
    r.add("3-one", (mul[one, idx] != idx) | (mul[idx, one] != idx))
    r.add("4-star-antihom", star[mul[x, y]] != mul[star[y], star[x]])
    r.add("5-star-involution", star[star] != idx)
    r.add("6-x-xprime", mul[idx, prime] != zero)
    r.add("7-prime-projection", (mul[prime, prime] != prime) | (star[prime] != prime))
    xy_p = prime[mul[x, y]]
    r.add("8-focal", mul[mul[prime[x], y], xy_p] != mul[y, xy_p])

    proj = np.zeros(m, dtype=bool)
    proj[projections(S)] = True
    le = mul == np.arange(m)[:, None]  # e <= f iff e·f = e
    pp = proj[x] & proj[y]
    r.add("PBAER1.1", pp & le & ~le[prime[y], prime[x]], diagnostic=True)
    cl = prime[prime]
    lhs = cl[mul[x, y]]
    r.add("PBAER1.2", (lhs != cl[mul[cl[x], y]]) | (mul[lhs, cl[y]] != lhs), diagnostic=True)
    r.add("PBAER1.3", cl[mul[star, idx]] != cl, diagnostic=True)
    closed = S.closed_mask()
    r.add("PBAER1.4", closed & ((mul[zero, idx] != zero) | (mul[idx, one] != idx)), diagnostic=True)
    r.add("PBAER1.5", (mul[x, y] == zero) != (mul[prime[x], y] == y), diagnostic=True)
    return r


@dataclass(frozen=True)
class ClosedProjectionLattice:
    """P_c(S) as an OML; ``elements[i]`` is the semigroup element at lattice index i."""

    oml: Oml
    elements: tuple[int, ...]
    pos: np.ndarray

    def lattice_index(self, x) -> int:
        i = int(self.pos[x])
        if i < 0:
            raise KeyError(f"semigroup element {x} is not a closed projection")
        return i


def pc_as_oml(S: BaerStarSemigroup) -> ClosedProjectionLattice:
    """The orthomodular lattice of closed projections, order e ≤ f iff e·f = e."""
    # tables are read-only, so the lattice is memoized on the instance
    cached = S.__dict__.get("_pc")
    if cached is None:
        cached = _build_pc(S)
        S.__dict__["_pc"] = cached
    return cached


def _build_pc(S: BaerStarSemigroup) -> ClosedProjectionLattice:
    elems = closed_projections(S)
    pos = np.full(S.m, -1, dtype=np.intp)
    pos[elems] = np.arange(len(elems))
    e = np.array(elems, dtype=np.intp)
    leq = S.mul[np.ix_(e, e)] == e[:, None]
    pairs = tuple((int(a), int(b)) for a, b in zip(*np.nonzero(leq)))
    spec = OmlSpec(
        tuple(S.names[i] for i in elems),
        pairs,
        tuple(int(v) for v in pos[S.prime[e]]),
        int(pos[S.zero]),
        int(pos[S.one]),
        covers=False,
    )
    try:
        L = build_oml(spec, cap=max(64, len(elems)))
    except NotALattice as exc:
        raise NotOrthomodular(f"P_c(S) is not a lattice: {exc}", exc.witness) from exc
    formula = pos[S.derived_meet(e[:, None], e[None, :])]
    w = first_true(formula != L.meet)
    if w is not None:
        raise NotOrthomodular("derived meet e₁·(e₂′·e₁)′ disagrees with the order meet", w)
    pos.flags.writeable = False
    return ClosedProjectionLattice(L, tuple(elems), pos)


# ------------------------------------------------------------- IE*_B layer


def _pc_or_none(S):
    try:
        return pc_as_oml(S)
    except OmstateError:
        return None


def verify_iestar_axioms(S: BaerStarSemigroup, s) -> AxiomReport:
    """bs1–bs6 with ∧/∨ on closed projections; BS2.1–6 as diagnostics.

    Any derived ∧/∨ whose argument is not a closed projection counts as a
    violation at that valuation.
    """
    s = np.asarray(s, dtype=np.intp)
    if s.shape != (S.m,) or (s < 0).any() or (s >= S.m).any():
        raise CarrierMismatch(f"s must be a table of {S.m} element indices")
    m = S.m
    prime, mul = S.prime, S.mul
    closed = S.closed_mask()
    one = S.one
    x = np.arange(m)[:, None]
    y = np.arange(m)[None, :]
    idx = np.arange(m)
    r = AxiomReport(f"IE*_B axioms (m={m})", names=S.names)

    def meet(a, b):
        return S.derived_meet(a, b), ~(closed[a] & closed[b])

    def join(a, b):
        return S.derived_join(a, b), ~(closed[a] & closed[b])

    def leq(a, b):
        return mul[a, b] == a

    r.add("bs1", np.array([s[one] != one]))
    r.add("bs2", s[prime] != prime[s])
    r.add("bs3", prime[prime[s]] != s)
    xp, yp = prime[x], prime[y]
    lhs_arg, bad1 = join(xp, s[yp])
    rhs, bad2 = join(s[xp], s[yp])
    r.add("bs4", bad1 | bad2 | (s[lhs_arg] != rhs))
    m1, b1 = meet(yp, s[x])
    m2, b2 = meet(yp, prime[s[x]])
    j, b3 = join(m1, m2)
    r.add("bs5", b1 | b2 | b3 | (j != yp))
    mxy, b1 = meet(xp, yp)
    msy, b2 = meet(s[xp], s[yp])
    r.add("bs6", b1 | b2 | ~leq(s[mxy], msy))

    pc = _pc_or_none(S)
    if pc is None:
        r.add_result("BS2.1", False, diagnostic=True)
        r.add_result("BS2.2", False, diagnostic=True)
    else:
        zc = np.zeros(m, dtype=bool)
        zc[[pc.elements[i] for i in center(pc.oml)]] = True
        r.add("BS2.1", ~zc[s], diagnostic=True)
        ok2 = bool(closed[s].all())
        if ok2:
            restricted = pc.pos[s[list(pc.elements)]]
            ok2 = verify_ie_axioms(pc.oml, restricted).all_ok
            img = np.unique(s)
            ok2 = ok2 and np.isin(S.derived_meet(img[:, None], img[None, :]), img).all()
            ok2 = ok2 and np.isin(prime[img], img).all()
        r.add_result("BS2.2", ok2, diagnostic=True)
    cl = prime[prime]
    r.add("BS2.3", s[cl] != s, diagnostic=True)
    proj = np.zeros(m, dtype=bool)
    proj[projections(S)] = True
    pp = proj[x] & proj[y] & leq(x, y)
    r.add("BS2.4", pp & (~leq(s[yp], s[xp]) | ~leq(s[x], s[y])), diagnostic=True)
    sxy = s[mul[x, y]]
    r.add("BS2.5", (sxy != s[mul[cl[x], y]]) | ~leq(sxy, s[y]), diagnostic=True)
    r.add("BS2.6", s[mul[S.star, idx]] != s, diagnostic=True)
    return r


def verify_bs1(S: BaerStarSemigroup, sigma) -> AxiomReport:
    """Consequences BS1.1–4 for a Boolean* pre-state σ."""
    v = sigma.array() if isinstance(sigma, StateMap) else np.asarray(sigma, dtype=np.int8)
    if len(v) != S.m:
        raise CarrierMismatch("state length does not match the semigroup")
    m, prime, mul = S.m, S.prime, S.mul
    x = np.arange(m)[:, None]
    y = np.arange(m)[None, :]
    cl = prime[prime]
    r = AxiomReport(f"Boolean* pre-state consequences (m={m})", names=S.names)
    r.add("BS1.1", v[cl] != v)
    proj = np.zeros(m, dtype=bool)
    proj[projections(S)] = True
    pp = proj[x] & proj[y] & (mul[x, y] == x)
    r.add("BS1.2", pp & ((v[prime[y]] > v[prime[x]]) | (v[x] > v[y])))
    vxy = v[mul[x, y]]
    r.add("BS1.3", (vxy != v[mul[cl[x], y]]) | (vxy > v[y]))
    r.add("BS1.4", v[mul[S.star, np.arange(m)]] != v)
    return r


@dataclass(frozen=True, eq=False)
class IeStarSemigroup:
    base: BaerStarSemigroup
    s: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        s = np.array(self.s, dtype=np.intp)
        s.flags.writeable = False
        object.__setattr__(self, "s", s)
        if self.validate:
            report = verify_iestar_axioms(self.base, s)
            if not report.ok:
                bad = ", ".join(f.name for f in report.failures() if not f.diagnostic)
                raise NotAnIeStarSemigroup(f"s violates {bad}", report)

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def names(self):
        return self.base.names

    def __repr__(self):
        return f"IeStarSemigroup(m={self.m})"

    def pc_ie(self) -> tuple[IeLattice, ClosedProjectionLattice]:
        """P_c(S) with the restriction of s, as an IE_B-lattice."""
        pc = pc_as_oml(self.base)
        return IeLattice(pc.oml, pc.pos[self.s[list(pc.elements)]]), pc


def extend_prestate(S: BaerStarSemigroup, sigma0) -> StateMap:
    """σ_S(x) = σ₀(x′′), the Boolean* pre-state restricting to σ₀ on P_c(S)."""
    pc = pc_as_oml(S)
    v0 = sigma0.array() if isinstance(sigma0, StateMap) else np.asarray(sigma0, dtype=np.int8)
    if len(v0) != pc.oml.n:
        raise CarrierMismatch(f"state has {len(v0)} values, P_c(S) has {pc.oml.n}")
    cls = classify(pc.oml, v0)
    if not cls.is_boolean_prestate:
        raise NotAPrestate("not a Boolean pre-state on P_c(S)", cls.prestate_witness)
    return StateMap(tuple(int(b) for b in v0[pc.pos[S.closure()]]), S)


def restrict_to_pc(S: BaerStarSemigroup, values) -> np.ndarray:
    pc = pc_as_oml(S)
    return np.asarray(values)[list(pc.elements)]


def extend_internal(S: BaerStarSemigroup, s0) -> IeStarSemigroup:
    """s_S(x) = s₀(x′′) for an IE_B operation s₀ on P_c(S) (lattice indices)."""
    pc = pc_as_oml(S)
    s0 = np.asarray(s0, dtype=np.intp)
    report = verify_ie_axioms(pc.oml, s0)
    if not report.ok:
        raise NotAnIeLattice("s₀ is not an IE_B operation on P_c(S)", report)
    elems = np.array(pc.elements, dtype=np.intp)
    return IeStarSemigroup(S, elems[s0[pc.pos[S.closure()]]])


def internalize_star(S: BaerStarSemigroup, sigma) -> IeStarSemigroup:
    """s_σ(x) = 1 if σ(x) = 1 else 0, for a Boolean* pre-state σ."""
    if not is_boolean_star_prestate(S, sigma):
        raise NotAStarPrestate("not a Boolean* pre-state")
    v = sigma.array() if isinstance(sigma, StateMap) else np.asarray(sigma)
    return IeStarSemigroup(S, np.where(v == 1, S.one, S.zero))


# ----------------------------------------------------------------- products


def semigroup_product(S1: BaerStarSemigroup, S2: BaerStarSemigroup, *, cap=PRODUCT_CAP):
    """Componentwise product; (i, j) has index ``i * S2.m + j``."""
    m1, m2 = S1.m, S2.m
    if m1 * m2 > cap:
        raise ResourceCap(f"product order {m1 * m2} exceeds cap {cap}", progress=0)
    mul = (S1.mul[:, None, :, None] * m2 + S2.mul[None, :, None, :]).reshape(m1 * m2, m1 * m2)
    star = (S1.star[:, None] * m2 + S2.star[None, :]).reshape(-1)
    prime = (S1.prime[:, None] * m2 + S2.prime[None, :]).reshape(-1)
    names = tuple(f"({a},{b})" for a in S1.names for b in S2.names)
    return BaerStarSemigroup(mul, star, prime, S1.zero * m2 + S2.zero, names)


def iestar_product(S1: IeStarSemigroup, S2: IeStarSemigroup, *, cap=PRODUCT_CAP):
    P = semigroup_product(S1.base, S2.base, cap=cap)
    s = (S1.s[:, None] * S2.m + S2.s[None, :]).reshape(-1)
    return IeStarSemigroup(P, s)


def two_element() -> BaerStarSemigroup:
    """{0, 1} with ordinary multiplication, identity star and 0′ = 1."""
    return BaerStarSemigroup([[0, 0], [0, 1]], [0, 1], [1, 0], 0, ("0", "1"))
