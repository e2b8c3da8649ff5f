"""Residuated maps on a finite OML and the semigroup generated by Sasaki projections.

Maps act on the right: ``table[x]`` is ``xφ``, and the product ``ψ·φ``
means "first ψ, then φ", so its table is ``φ.table[ψ.table]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .baer import (
    BaerStarSemigroup,
    IeStarSemigroup,
    extend_internal,
    iestar_product,
    pc_as_oml,
    semigroup_product,
    verify_baer_axioms,
    verify_iestar_axioms,
)
from .errors import (
    NotAHomomorphism,
    NotASublattice,
    NotResiduated,
    NotSurjective,
    OmstateError,
    ResourceCap,
)
from .ie import IeLattice, ie_product, is_directly_indecomposable
from .oml import Oml, product

DEFAULT_SEMIGROUP_CAP = 20000
DEFAULT_LATTICE_CAP = 16
FULL_S_CAP = 6
VERIFY_LIMIT = 256


def _split(L):
    """(Oml, s or None) from an Oml or an IeLattice."""
    if isinstance(L, IeLattice):
        return L.base, L.s
    return L, None


def residual_table(L: Oml, table) -> np.ndarray:
    """φ⁺(y) = ⋁{x : xφ ≤ y}, checked against the Galois condition."""
    table = np.asarray(table, dtype=np.intp)
    if table.shape != (L.n,):
        raise NotResiduated(f"table must have {L.n} entries")
    below = L.leq[table, :].T  # below[y, x]: xφ ≤ y
    acc = np.full(L.n, L.zero, dtype=np.intp)
    for x in range(L.n):
        acc = np.where(below[:, x], L.join[acc, x], acc)
    galois = below.T == L.leq[:, acc]  # [x, y]: xφ ≤ y  iff  x ≤ yφ⁺
    if not galois.all():
        x, y = np.argwhere(~galois)[0]
        raise NotResiduated(
            f"no residual: {L.name(x)}φ ≤ {L.name(y)} disagrees with {L.name(x)} ≤ {L.name(y)}φ⁺",
            (int(x), int(y)),
        )
    return acc


@dataclass(frozen=True, eq=False)
class ResiduatedFn:
    lattice: Oml = field(repr=False)
    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=np.intp)
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def __call__(self, x) -> int:
        return int(self.table[self.lattice.index(x)])

    def __eq__(self, other):
        return (isinstance(other, ResiduatedFn) and other.lattice is self.lattice
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash(self.table.tobytes())

    def then(self, other: ResiduatedFn) -> ResiduatedFn:
        """x(self·other) = (x self) other."""
        return ResiduatedFn(self.lattice, other.table[self.table])

    __mul__ = then

    @cached_property
    def residual(self) -> np.ndarray:
        return residual_table(self.lattice, self.table)

    def describe(self) -> str:
        L = self.lattice
        return ", ".join(f"{L.name(x)}↦{L.name(v)}" for x, v in enumerate(self.table))


def sasaki_table(L: Oml, a) -> np.ndarray:
    a = L.index(a)
    return L.meet[L.join[np.arange(L.n), L.neg[a]], a]


def sasaki(L: Oml, a) -> ResiduatedFn:
    """xφ_a = (x ∨ ¬a) ∧ a."""
    return ResiduatedFn(L, sasaki_table(L, a))


def theta(L: Oml) -> ResiduatedFn:
    return ResiduatedFn(L, np.full(L.n, L.zero))


def identity(L: Oml) -> ResiduatedFn:
    return ResiduatedFn(L, np.arange(L.n))


def residual(L: Oml, phi) -> np.ndarray:
    table = phi.table if isinstance(phi, ResiduatedFn) else phi
    return residual_table(L, table)


def star_table(L: Oml, table) -> np.ndarray:
    return L.neg[residual_table(L, table)[L.neg]]


def star_of(L: Oml, phi) -> ResiduatedFn:
    """xφ* = ¬((¬x)φ⁺)."""
    table = phi.table if isinstance(phi, ResiduatedFn) else phi
    return ResiduatedFn(L, star_table(L, table))


def prime_of(L: Oml, phi) -> ResiduatedFn:
    """φ′ = φ_{¬(1φ)}."""
    table = phi.table if isinstance(phi, ResiduatedFn) else np.asarray(phi)
    residual_table(L, table)
    return sasaki(L, L.neg[table[L.one]])


def lifted_s(L: Oml, s, table) -> int:
    """Lattice element a with s(φ) = φ_a, namely a = s(1φ)."""
    return int(s[table[L.one]])


# ---------------------------------------------------------------- closure


@dataclass(frozen=True, eq=False)
class GeneratedSemigroup:
    """A finite semigroup of residuated maps together with its abstract tables.

    ``gen_map[a]`` is the element φ_a, or -1 when ``a`` was not a generator.
    """

    lattice: Oml
    source: object = field(repr=False)
    base: BaerStarSemigroup = field(repr=False)
    reps: tuple[ResiduatedFn, ...] = field(repr=False)
    words: tuple[tuple[int, ...], ...] = field(repr=False)
    gen_map: np.ndarray = field(repr=False)
    ie: IeStarSemigroup | None = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def tables(self) -> np.ndarray:
        return np.array([r.table for r in self.reps])

    def element(self, table) -> int:
        """Index of the element whose map has the given table, or -1."""
        key = np.asarray(table, dtype=np.intp).tobytes()
        return self._lookup.get(key, -1)

    @cached_property
    def _lookup(self):
        return {r.table.tobytes(): i for i, r in enumerate(self.reps)}

    def word_name(self, i) -> str:
        return self.base.name(i)

    def evaluate_word(self, word) -> int:
        """Element φ_{w₁}·…·φ_{wₖ}; an empty word gives the identity."""
        acc = self.base.one
        for a in word:
            g = int(self.gen_map[a])
            if g < 0:
                raise KeyError(f"{self.lattice.name(a)} is not a generator")
            acc = int(self.base.mul[acc, g])
        return acc


def _element_name(L, word):
    if word == (L.zero,):
        return "θ"
    if word == (L.one,):
        return "id"
    return "".join(f"φ[{L.name(a)}]" for a in word)


def _close(L: Oml, s, generators, *, cap, source, verify):
    gens = [int(a) for a in generators]
    gtabs = {a: sasaki_table(L, a) for a in gens}
    lookup: dict[bytes, int] = {}
    tables: list[np.ndarray] = []
    words: list[tuple[int, ...]] = []

    def add(tab, word):
        key = tab.tobytes()
        i = lookup.get(key)
        if i is not None:
            return i
        if len(tables) >= cap:
            raise ResourceCap(f"closure exceeded {cap} elements", progress=len(tables))
        lookup[key] = len(tables)
        tables.append(tab)
        words.append(word)
        return len(tables) - 1

    gen_map = np.full(L.n, -1, dtype=np.intp)
    for a in gens:
        gen_map[a] = add(gtabs[a], (a,))
    i = 0
    while i < len(tables):
        t, w = tables[i], words[i]
        for a in gens:
            add(gtabs[a][t], w + (a,))
        i += 1

    T = np.array(tables, dtype=np.intp)
    m = len(T)

    def find(tab, what):
        j = lookup.get(np.ascontiguousarray(tab, dtype=np.intp).tobytes())
        if j is None:
            raise OmstateError(f"{what} left the generated set")
        return j

    mul = np.empty((m, m), dtype=np.intp)
    for i in range(m):
        for j, row in enumerate(T[:, T[i]]):
            mul[i, j] = find(row, "a product")
    star = np.array([find(star_table(L, t), "a star") for t in T], dtype=np.intp)
    prime = np.array([find(sasaki_table(L, L.neg[t[L.one]]), "a prime") for t in T], dtype=np.intp)
    zero = find(np.full(L.n, L.zero), "θ")
    names = tuple(_element_name(L, w) for w in words)
    base = BaerStarSemigroup(mul, star, prime, zero, names)
    if verify is None:
        verify = m <= VERIFY_LIMIT
    if verify:
        report = verify_baer_axioms(base)
        if not report.ok:
            raise OmstateError("generated tables violate the Baer axioms", report.failures()[0].witness)

    ie = None
    if s is not None:
        s_tab = np.array([gen_map[lifted_s(L, s, t)] for t in T], dtype=np.intp)
        if (s_tab < 0).any():
            raise OmstateError("s(1φ) is not a generator; the generating set is not closed under s")
        ie = IeStarSemigroup(base, s_tab, validate=verify)
    reps = tuple(ResiduatedFn(L, t) for t in T)
    gen_map.flags.writeable = False
    return GeneratedSemigroup(L, source, base, reps, tuple(words), gen_map, ie)


def generate_s0(L, *, cap: int = DEFAULT_SEMIGROUP_CAP, lattice_cap: int = DEFAULT_LATTICE_CAP,
                verify: bool | None = None) -> GeneratedSemigroup:
    """S₀(L): closure of all Sasaki projections under composition.

    When ``L`` is an IeLattice the result also carries the IE*_B structure
    s(φ) = φ_{s(1φ)}, cross-checked against the extension of s from P_c.
    ``verify=None`` runs the exhaustive axiom checks for up to 256 elements.
    """
    base_l, s = _split(L)
    if base_l.n > lattice_cap:
        raise ResourceCap(f"{base_l.n} lattice elements exceeds the cap {lattice_cap}", progress=0)
    G = _close(base_l, s, range(base_l.n), cap=cap, source=L, verify=verify)
    if G.ie is not None and (verify or (verify is None and G.m <= VERIFY_LIMIT)):
        pc = pc_as_oml(G.base)
        # s on P_c in lattice coordinates of pc.oml
        s0 = np.empty(pc.oml.n, dtype=np.intp)
        for a in range(base_l.n):
            s0[pc.pos[G.gen_map[a]]] = pc.pos[G.gen_map[s[a]]]
        other = extend_internal(G.base, s0)
        if not np.array_equal(other.s, G.ie.s):
            raise OmstateError("lifted s disagrees with the extension from P_c")
    return G


def semigroup_from_functions(L: Oml, fns) -> GeneratedSemigroup:
    """Abstract tables for a set of maps already closed under ·, * and ′."""
    fns = list(fns)
    lookup = {f.table.tobytes(): i for i, f in enumerate(fns)}

    def find(tab):
        j = lookup.get(np.ascontiguousarray(tab, dtype=np.intp).tobytes())
        if j is None:
            raise OmstateError("set of maps is not closed")
        return j

    T = np.array([f.table for f in fns], dtype=np.intp)
    m = len(T)
    mul = np.array([[find(T[j][T[i]]) for j in range(m)] for i in range(m)], dtype=np.intp)
    star = np.array([find(star_table(L, t)) for t in T], dtype=np.intp)
    prime = np.array([find(sasaki_table(L, L.neg[t[L.one]])) for t in T], dtype=np.intp)
    zero = find(np.full(L.n, L.zero))
    gen_map = np.array([lookup.get(sasaki_table(L, a).tobytes(), -1) for a in range(L.n)])
    names = tuple(f"f{i}" for i in range(m))
    base = BaerStarSemigroup(mul, star, prime, zero, names)
    return GeneratedSemigroup(L, fns, base, tuple(fns), tuple(() for _ in fns), gen_map)


# ------------------------------------------------------------- full S(L)


def join_irreducibles(L: Oml) -> list[int]:
    out = []
    for x in range(L.n):
        if x == L.zero:
            continue
        below = [y for y in range(L.n) if y != x and L.leq[y, x]]
        acc = L.zero
        for y in below:
            acc = L.join[acc, y]
        if acc != x:
            out.append(x)
    return out


def enumerate_full_s(L: Oml, *, cap: int = FULL_S_CAP) -> list[ResiduatedFn]:
    """Every residuated map on L, found from images of join-irreducibles."""
    if L.n > cap:
        raise ResourceCap(f"{L.n} elements exceeds the full-S cap {cap}", progress=0)
    J = join_irreducibles(L)
    below = [[j for j in J if L.leq[j, x]] for x in range(L.n)]
    out = []
    for images in itertools.product(range(L.n), repeat=len(J)):
        img = dict(zip(J, images))
        if any(L.leq[j, k] and not L.leq[img[j], img[k]] for j in J for k in J):
            continue
        table = np.full(L.n, L.zero, dtype=np.intp)
        for x in range(L.n):
            for j in below[x]:
                table[x] = L.join[table[x], img[j]]
        try:
            residual_table(L, table)
        except NotResiduated:
            continue
        out.append(ResiduatedFn(L, table))
    return out


# -------------------------------------------------------------- iso check


@dataclass(frozen=True)
class IsoCertificate:
    ok: bool
    mapping: tuple[int, ...] | None
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def iso_check(L, G: GeneratedSemigroup, gen_map=None) -> IsoCertificate:
    """Whether a ↦ φ_a is an isomorphism from L onto P_c(S) (preserving s if present).

    ``mapping[a]`` in the certificate is the lattice index of φ_a in P_c(S).
    """
    base_l, s = _split(L)
    gm = np.asarray(G.gen_map if gen_map is None else gen_map, dtype=np.intp)
    pc = pc_as_oml(G.base)
    if len(gm) != base_l.n or (gm < 0).any():
        return IsoCertificate(False, None, None, "gen_map is not total")
    f = pc.pos[gm]
    if (f < 0).any():
        a = int(np.flatnonzero(f < 0)[0])
        return IsoCertificate(False, None, (a,), "image is not a closed projection")
    if len(set(f.tolist())) != base_l.n or pc.oml.n != base_l.n:
        dup = [a for a in range(base_l.n) if (f == f[a]).sum() > 1]
        return IsoCertificate(False, None, tuple(dup[:2]) or None, "not a bijection onto P_c")
    P = pc.oml
    x = np.arange(base_l.n)[:, None]
    y = np.arange(base_l.n)[None, :]
    checks = [
        ("meet", f[base_l.meet] != P.meet[f[x], f[y]]),
        ("neg", f[base_l.neg] != P.neg[f]),
    ]
    if f[base_l.zero] != P.zero or f[base_l.one] != P.one:
        return IsoCertificate(False, None, None, "bounds not preserved")
    if s is not None and G.ie is not None:
        s_pc = pc.pos[G.ie.s[list(pc.elements)]]
        checks.append(("s", f[s] != s_pc[f]))
    for name, bad in checks:
        if bad.any():
            w = tuple(int(v) for v in np.argwhere(bad)[0])
            return IsoCertificate(False, None, w, f"{name} not preserved")
    return IsoCertificate(True, tuple(int(v) for v in f))


# ----------------------------------------------------------- sub-lattices


def _closed_subset(L: Oml, s, A):
    A = sorted({L.index(a) for a in A})
    inside = np.zeros(L.n, dtype=bool)
    inside[A] = True
    ix = np.ix_(A, A)
    problems = []
    if not (inside[L.zero] and inside[L.one]):
        problems.append("bounds")
    if not inside[L.meet[ix]].all():
        problems.append("meet")
    if not inside[L.neg[A]].all():
        problems.append("complement")
    if s is not None and not inside[s[A]].all():
        problems.append("s")
    if problems:
        raise NotASublattice(f"subset is not closed under {', '.join(problems)}")
    return A


def sub_semigroup_from_sublattice(L, A, *, cap: int = DEFAULT_SEMIGROUP_CAP) -> GeneratedSemigroup:
    """S_A: products of φ_a for a ∈ A, each acting on all of L."""
    base_l, s = _split(L)
    A = _closed_subset(base_l, s, A)
    G = _close(base_l, s, A, cap=cap, source=(L, tuple(A)), verify=None)
    pc = pc_as_oml(G.base)
    f = pc.pos[G.gen_map[A]]
    pos = {a: i for i, a in enumerate(A)}
    ok = pc.oml.n == len(A) and len(set(f.tolist())) == len(A) and (f >= 0).all()
    for a in A:
        for b in A:
            ok = ok and f[pos[int(base_l.meet[a, b])]] == pc.oml.meet[f[pos[a]], f[pos[b]]]
        ok = ok and f[pos[int(base_l.neg[a])]] == pc.oml.neg[f[pos[a]]]
        if s is not None:
            ok = ok and G.ie.s[G.gen_map[a]] == G.gen_map[s[a]]
    if not ok:
        raise OmstateError("P_c(S_A) is not isomorphic to A")
    return G


# ------------------------------------------------------------------- ψ map


@dataclass(frozen=True, eq=False)
class PsiMap:
    """ψ: S → S(P_c(S)), a ↦ (x ↦ (x·a)′′), with the checks performed on it."""

    tables: np.ndarray
    target: GeneratedSemigroup
    image: np.ndarray  # element of target for each a, or -1 outside S₀(P_c(S))
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def psi_map(S) -> PsiMap:
    base = S.base if isinstance(S, IeStarSemigroup) else S
    s = S.s if isinstance(S, IeStarSemigroup) else None
    pc = pc_as_oml(base)
    P = pc.oml
    elems = np.array(pc.elements, dtype=np.intp)
    cl = base.closure()
    # tables[a][x] = pc index of (x·a)′′ for x in P_c
    tables = pc.pos[cl[base.mul[elems[None, :], np.arange(base.m)[:, None]]]]
    target_src = P
    s_pc = None
    if s is not None:
        s_pc = pc.pos[s[elems]]
        target_src = IeLattice(P, s_pc)
    target = generate_s0(target_src, lattice_cap=max(DEFAULT_LATTICE_CAP, P.n))
    image = np.array([target.element(t) for t in tables], dtype=np.intp)

    m = base.m
    idx = np.arange(m)
    checks = {}
    comp_ok = True
    for a in range(m):
        for b in range(m):
            if not np.array_equal(tables[base.mul[a, b]], tables[b][tables[a]]):
                comp_ok = False
                break
        if not comp_ok:
            break
    checks["product"] = comp_ok
    checks["zero"] = bool((tables[base.zero] == P.zero).all())
    checks["star"] = all(np.array_equal(tables[base.star[a]], star_table(P, tables[a])) for a in idx)
    checks["prime"] = all(np.array_equal(tables[base.prime[a]], sasaki_table(P, P.neg[tables[a][P.one]]))
                          for a in idx)
    if s is not None:
        checks["s"] = all(np.array_equal(tables[s[a]], sasaki_table(P, s_pc[tables[a][P.one]])) for a in idx)
    checks["sasaki-on-pc"] = all(np.array_equal(tables[e], sasaki_table(P, pc.pos[e])) for e in elems)
    # sub-semigroup of S generated by P_c(S)
    gen = {int(e) for e in elems}
    frontier = list(gen)
    while frontier:
        nxt = []
        for a in frontier:
            for e in elems:
                c = int(base.mul[a, e])
                if c not in gen:
                    gen.add(c)
                    nxt.append(c)
        frontier = nxt
    img = {int(image[a]) for a in gen}
    checks["image-is-s0"] = -1 not in img and img == set(range(target.m))
    image.flags.writeable = False
    return PsiMap(tables, target, image, checks)


# -------------------------------------------------------------- products


@dataclass(frozen=True)
class ProductIsoCertificate:
    ok: bool
    mapping: tuple[int, ...]
    sizes: tuple[int, int, int]
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def sasaki_componentwise(L1: Oml, L2: Oml) -> bool:
    """x⃗φ_{a⃗} = (x₁φ_{a₁}, x₂φ_{a₂}) on the product lattice."""
    P = product(L1, L2)
    n2 = L2.n
    for a in range(P.n):
        lhs = sasaki_table(P, a)
        rhs = (sasaki_table(L1, a // n2)[:, None] * n2 + sasaki_table(L2, a % n2)[None, :]).reshape(-1)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def product_iso(L1, L2, *, cap: int = DEFAULT_SEMIGROUP_CAP) -> ProductIsoCertificate:
    """Certify S₀(L₁×L₂) ≅ S₀(L₁)×S₀(L₂) via componentwise generator words."""
    ie = isinstance(L1, IeLattice) and isinstance(L2, IeLattice)
    b1, _ = _split(L1)
    b2, _ = _split(L2)
    lat = ie_product(L1, L2) if ie else product(b1, b2)
    G1 = generate_s0(L1, cap=cap)
    G2 = generate_s0(L2, cap=cap)
    if G1.m * G2.m > cap:
        raise ResourceCap(f"product order {G1.m * G2.m} exceeds cap {cap}", progress=0)
    G = generate_s0(lat, cap=cap, lattice_cap=max(DEFAULT_LATTICE_CAP, b1.n * b2.n))
    right = iestar_product(G1.ie, G2.ie, cap=cap).base if ie else semigroup_product(G1.base, G2.base, cap=cap)
    right_s = iestar_product(G1.ie, G2.ie, cap=cap).s if ie else None
    n2, m2 = b2.n, G2.m
    h = np.array([
        G1.evaluate_word([c // n2 for c in w]) * m2 + G2.evaluate_word([c % n2 for c in w])
        for w in G.words
    ], dtype=np.intp)
    sizes = (G.m, G1.m, G2.m)
    mapping = tuple(int(v) for v in h)
    if not sasaki_componentwise(b1, b2):
        return ProductIsoCertificate(False, mapping, sizes, None, "Sasaki maps are not componentwise")
    if len(set(mapping)) != G.m or G.m != right.m:
        return ProductIsoCertificate(False, mapping, sizes, None, "not a bijection")
    S, R = G.base, right
    checks = [
        ("product", h[S.mul] != R.mul[h[:, None], h[None, :]]),
        ("star", h[S.star] != R.star[h]),
        ("prime", h[S.prime] != R.prime[h]),
    ]
    if ie:
        checks.append(("s", h[G.ie.s] != right_s[h]))
    for name, bad in checks:
        if bad.any():
            w = tuple(int(v) for v in np.argwhere(bad)[0])
            return ProductIsoCertificate(False, mapping, sizes, w, f"{name} not preserved")
    if h[S.zero] != R.zero:
        return ProductIsoCertificate(False, mapping, sizes, None, "zero not preserved")
    return ProductIsoCertificate(True, mapping, sizes)


# ---------------------------------------------------------- homomorphisms


@dataclass(frozen=True, eq=False)
class LiftedHom:
    g: np.ndarray
    source: GeneratedSemigroup
    target: GeneratedSemigroup

    @property
    def is_bijective(self) -> bool:
        return len(set(self.g.tolist())) == self.source.m == self.target.m


def check_ie_homomorphism(L1, L2, f) -> None:
    b1, s1 = _split(L1)
    b2, s2 = _split(L2)
    f = np.asarray(f, dtype=np.intp)
    if f.shape != (b1.n,) or (f < 0).any() or (f >= b2.n).any():
        raise NotAHomomorphism("map is not total into the target")
    x = np.arange(b1.n)[:, None]
    y = np.arange(b1.n)[None, :]
    bad = [
        ("meet", f[b1.meet] != b2.meet[f[x], f[y]]),
        ("complement", f[b1.neg] != b2.neg[f]),
    ]
    if s1 is not None and s2 is not None:
        bad.append(("s", f[s1] != s2[f]))
    for name, mask in bad:
        if mask.any():
            w = tuple(int(v) for v in np.argwhere(mask)[0])
            raise NotAHomomorphism(f"{name} not preserved", w)
    if f[b1.zero] != b2.zero or f[b1.one] != b2.one:
        raise NotAHomomorphism("bounds not preserved")


def lift_homomorphism(L1, L2, f, *, cap: int = DEFAULT_SEMIGROUP_CAP) -> LiftedHom:
    """g(φ_{a₁}…φ_{aₖ}) = φ_{f(a₁)}…φ_{f(aₖ)} for a surjective IE_B homomorphism f."""
    b1, _ = _split(L1)
    b2, _ = _split(L2)
    f = np.asarray(f, dtype=np.intp)
    check_ie_homomorphism(L1, L2, f)
    missing = sorted(set(range(b2.n)) - set(f.tolist()))
    if missing:
        raise NotSurjective(f"{b2.name(missing[0])} is not in the image", (missing[0],))
    G1 = generate_s0(L1, cap=cap)
    G2 = generate_s0(L2, cap=cap)
    g = np.array([G2.evaluate_word([f[a] for a in w]) for w in G1.words], dtype=np.intp)
    # well defined: f(xφ) = f(x) g(φ) for every element and every x
    for i, rep in enumerate(G1.reps):
        if not np.array_equal(f[rep.table], G2.reps[g[i]].table[f]):
            raise NotAHomomorphism("word images disagree; g is not well defined", (i,))
    S, T = G1.base, G2.base
    checks = [
        ("product", g[S.mul] != T.mul[g[:, None], g[None, :]]),
        ("star", g[S.star] != T.star[g]),
        ("prime", g[S.prime] != T.prime[g]),
    ]
    if G1.ie is not None and G2.ie is not None:
        checks.append(("s", g[G1.ie.s] != G2.ie.s[g]))
    for name, mask in checks:
        if mask.any():
            raise NotAHomomorphism(f"lifted map does not preserve {name}",
                                   tuple(int(v) for v in np.argwhere(mask)[0]))
    if set(g.tolist()) != set(range(T.m)):
        raise NotSurjective("lifted map is not onto S₀ of the target")
    if not np.array_equal(g[G1.gen_map], G2.gen_map[f]):
        raise NotAHomomorphism("lifted map does not agree with f on Sasaki projections")
    g.flags.writeable = False
    return LiftedHom(g, G1, G2)


# ------------------------------------------------ direct decompositions


def _canon(labels) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(int(v), len(seen)) for v in labels)


class _UnionFind:
    def __init__(self, m):
        self.parent = list(range(m))

    def find(self, a):
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def principal_congruence(S: BaerStarSemigroup, s, a, b) -> tuple[int, ...]:
    """Smallest congruence for ·, *, ′ (and s) identifying a and b."""
    uf = _UnionFind(S.m)
    unary = [S.star, S.prime] + ([s] if s is not None else [])
    work = [(a, b)]
    uf.union(a, b)
    while work:
        x, y = work.pop()
        pairs = list(zip(S.mul[x], S.mul[y])) + list(zip(S.mul[:, x], S.mul[:, y]))
        pairs += [(u[x], u[y]) for u in unary]
        for p, q in pairs:
            if uf.union(int(p), int(q)):
                work.append((int(p), int(q)))
    return _canon([uf.find(i) for i in range(S.m)])


def _join(c1, c2) -> tuple[int, ...]:
    m = len(c1)
    uf = _UnionFind(m)
    for c in (c1, c2):
        first: dict[int, int] = {}
        for i, k in enumerate(c):
            uf.union(i, first.setdefault(k, i))
    return _canon([uf.find(i) for i in range(m)])


def congruences(S: BaerStarSemigroup, s=None, *, limit: int = 20000) -> list[tuple[int, ...]]:
    """All congruences as canonical labellings, built as joins of principal ones."""
    m = S.m
    principal = sorted({principal_congruence(S, s, a, b) for a in range(m) for b in range(a + 1, m)})
    found = {tuple(range(m)), *principal}
    frontier = list(found)
    while frontier:
        nxt = []
        for c in frontier:
            for p in principal:
                j = _join(c, p)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
                    if len(found) > limit:
                        raise ResourceCap(f"more than {limit} congruences", progress=len(found))
        frontier = nxt
    return sorted(found)


@dataclass(frozen=True)
class Decomposition:
    left: tuple[int, ...]
    right: tuple[int, ...]

    @property
    def orders(self) -> tuple[int, int]:
        return (max(self.left) + 1, max(self.right) + 1)


def find_decomposition(S: BaerStarSemigroup, s=None) -> Decomposition | None:
    """A pair of congruences θ₁, θ₂ with θ₁∩θ₂ = Δ and |S/θ₁|·|S/θ₂| = |S|, both proper."""
    m = S.m
    if m < 4:
        return None
    cons = congruences(S, s)
    by_order: dict[int, list] = {}
    for c in cons:
        by_order.setdefault(max(c) + 1, []).append(c)
    for k1 in sorted(by_order):
        k2, rem = divmod(m, k1)
        if rem or k1 < 2 or k2 < 2 or k1 > k2 or k2 not in by_order:
            continue
        for c1 in by_order[k1]:
            for c2 in by_order[k2]:
                if len(set(zip(c1, c2))) == m:
                    return Decomposition(c1, c2)
    return None


@dataclass(frozen=True)
class TransferResult:
    lattice_indecomposable: bool
    semigroup_indecomposable: bool
    decomposition: Decomposition | None

    @property
    def agree(self) -> bool:
        return self.lattice_indecomposable == self.semigroup_indecomposable

    def __bool__(self):
        return self.agree


def check_indecomposable_transfer(L: IeLattice, *, cap: int = DEFAULT_SEMIGROUP_CAP) -> TransferResult:
    """Compare indecomposability of L with a decomposition search on S₀(L)."""
    G = generate_s0(L, cap=cap)
    lat = is_directly_indecomposable(L)
    dec = find_decomposition(G.base, G.ie.s)
    semi = G.m > 1 and dec is None
    return TransferResult(lat, semi, dec)
