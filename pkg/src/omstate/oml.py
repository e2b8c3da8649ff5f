"""Finite orthomodular lattices as dense integer tables.

Elements are indices ``0..n-1``; names are labels only.  Every table is a
read-only numpy array so an :class:`Oml` can be shared freely once built.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .errors import (
    InvalidSpec,
    NotALattice,
    NotInvolution,
    NotOrthocomplemented,
    NotOrthomodular,
    ResourceCap,
)
from .report import AxiomReport, first_true

DEFAULT_ELEMENT_CAP = 64


@dataclass(frozen=True)
class OmlSpec:
    """Serializable description of a lattice: order pairs plus orthocomplement."""

    names: tuple[str, ...]
    leq_pairs: tuple[tuple[int, int], ...]
    neg: tuple[int, ...]
    zero: int
    one: int
    covers: bool = True

    @property
    def n(self) -> int:
        return len(self.names)

    @classmethod
    def from_json(cls, data: dict) -> OmlSpec:
        try:
            names = tuple(str(x) for x in data["names"])
            if "covers" in data:
                pairs, covers = data["covers"], True
            elif "leq" in data:
                pairs, covers = data["leq"], False
            else:
                raise InvalidSpec("lattice file needs a 'covers' or 'leq' array")
            index = {name: i for i, name in enumerate(names)}

            def idx(v):
                if isinstance(v, str):
                    if v not in index:
                        raise InvalidSpec(f"unknown element name {v!r}")
                    return index[v]
                return int(v)

            return cls(
                names=names,
                leq_pairs=tuple((idx(a), idx(b)) for a, b in pairs),
                neg=tuple(idx(v) for v in data["neg"]),
                zero=idx(data["zero"]),
                one=idx(data["one"]),
                covers=covers,
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidSpec):
                raise
            raise InvalidSpec(f"malformed lattice spec: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "names": list(self.names),
            "covers" if self.covers else "leq": [list(p) for p in self.leq_pairs],
            "neg": list(self.neg),
            "zero": self.zero,
            "one": self.one,
        }


def _frozen(a):
    a = np.array(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Oml:
    names: tuple[str, ...]
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    neg: np.ndarray
    zero: int
    one: int
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for attr in ("leq", "meet", "join", "neg"):
            object.__setattr__(self, attr, _frozen(getattr(self, attr)))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.names)})

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def is_trivial(self) -> bool:
        return self.zero == self.one

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Oml(n={self.n}, names={list(self.names)})"

    def index(self, name) -> int:
        """Element index from a name (ints pass through)."""
        if isinstance(name, (int, np.integer)):
            return int(name)
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no element named {name!r}") from None

    def __getitem__(self, name) -> int:
        return self.index(name)

    def name(self, i) -> str:
        return self.names[int(i)]

    def atoms(self) -> list[int]:
        return [x for x in range(self.n) if x != self.zero and self.covers_of_zero(x)]

    def covers_of_zero(self, x) -> bool:
        below = np.flatnonzero(self.leq[:, x])
        return len(below) == 2

    def cover_pairs(self) -> list[tuple[int, int]]:
        """Hasse diagram edges (a covered by b)."""
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        pairs = []
        for a, b in zip(*np.nonzero(lt)):
            between = lt[a] & lt[:, b]
            if not between.any():
                pairs.append((int(a), int(b)))
        return pairs

    def to_spec(self) -> OmlSpec:
        return OmlSpec(
            names=self.names,
            leq_pairs=tuple(self.cover_pairs()),
            neg=tuple(int(v) for v in self.neg),
            zero=self.zero,
            one=self.one,
            covers=True,
        )


# ---------------------------------------------------------------- building


def _reflexive_transitive_closure(rel):
    r = rel | np.eye(len(rel), dtype=bool)
    for k in range(len(r)):
        r = r | np.outer(r[:, k], r[k, :])
    return r


def _bound_tables(leq, names):
    n = len(leq)
    meet = np.empty((n, n), dtype=np.intp)
    join = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        for b in range(a, n):
            lower = np.flatnonzero(leq[:, a] & leq[:, b])
            glb = lower[leq[np.ix_(lower, lower)].all(axis=0)] if len(lower) else lower
            if len(glb) != 1:
                raise NotALattice(f"{names[a]} and {names[b]} have no greatest lower bound", (a, b))
            upper = np.flatnonzero(leq[a] & leq[b])
            lub = upper[leq[np.ix_(upper, upper)].all(axis=1)] if len(upper) else upper
            if len(lub) != 1:
                raise NotALattice(f"{names[a]} and {names[b]} have no least upper bound", (a, b))
            meet[a, b] = meet[b, a] = glb[0]
            join[a, b] = join[b, a] = lub[0]
    return meet, join


def build_oml(spec: OmlSpec, *, check: bool = True, cap: int = DEFAULT_ELEMENT_CAP) -> Oml:
    """Build and validate an orthomodular lattice from its spec.

    With ``check=False`` only the lattice structure is required; the
    orthocomplement is taken as given (used to inspect bad candidates with
    :func:`verify_oml_axioms`).
    """
    n = spec.n
    if n == 0:
        raise InvalidSpec("a lattice needs at least one element")
    if n > cap:
        raise ResourceCap(f"{n} elements exceeds the element cap {cap}", progress=n)
    names = spec.names
    if len(set(names)) != n:
        raise InvalidSpec("element names must be unique")
    if len(spec.neg) != n:
        raise InvalidSpec(f"neg table has length {len(spec.neg)}, expected {n}")
    for v in (*spec.neg, spec.zero, spec.one, *(i for p in spec.leq_pairs for i in p)):
        if not 0 <= v < n:
            raise InvalidSpec(f"element index {v} out of range 0..{n - 1}")

    rel = np.zeros((n, n), dtype=bool)
    for a, b in spec.leq_pairs:
        rel[a, b] = True
    leq = _reflexive_transitive_closure(rel)
    both = leq & leq.T & ~np.eye(n, dtype=bool)
    w = first_true(both)
    if w is not None:
        raise NotALattice(f"order is not antisymmetric at ({names[w[0]]}, {names[w[1]]})", w)
    if not leq[spec.zero].all():
        x = int(np.flatnonzero(~leq[spec.zero])[0])
        raise NotALattice(f"{names[spec.zero]} is not below {names[x]}", (spec.zero, x))
    if not leq[:, spec.one].all():
        x = int(np.flatnonzero(~leq[:, spec.one])[0])
        raise NotALattice(f"{names[x]} is not below {names[spec.one]}", (x, spec.one))
    meet, join = _bound_tables(leq, names)
    neg = np.array(spec.neg, dtype=np.intp)
    L = Oml(names, leq, meet, join, neg, spec.zero, spec.one)
    if check:
        _check_orthocomplement(L)
    return L


def _check_orthocomplement(L: Oml):
    names, neg = L.names, L.neg
    if sorted(neg.tolist()) != list(range(L.n)):
        raise NotInvolution("neg is not a permutation")
    w = first_true(neg[neg] != np.arange(L.n))
    if w is not None:
        raise NotInvolution(f"neg(neg({names[w[0]]})) != {names[w[0]]}", w)
    # order reversal: a <= b implies neg b <= neg a
    w = first_true(L.leq & ~L.leq[np.ix_(neg, neg)].T)
    if w is not None:
        a, b = w
        raise NotOrthocomplemented(f"neg does not reverse {names[a]} <= {names[b]}", w)
    idx = np.arange(L.n)
    w = first_true((L.meet[idx, neg] != L.zero) | (L.join[idx, neg] != L.one))
    if w is not None:
        raise NotOrthocomplemented(f"{names[w[0]]} and its negation are not complements", w)
    lhs = _orthomodular_lhs(L)
    w = first_true(lhs != L.join)
    if w is not None:
        a, b = w
        raise NotOrthomodular(f"orthomodular law fails at ({names[a]}, {names[b]})", w)


def _orthomodular_lhs(L: Oml):
    x = np.arange(L.n)[:, None]
    y = np.arange(L.n)[None, :]
    return L.join[x, L.meet[L.neg[x], L.join[x, y]]]


def from_tables(names, leq, neg, zero, one, *, cap=DEFAULT_ELEMENT_CAP) -> Oml:
    """Build from a full order matrix."""
    leq = np.asarray(leq, dtype=bool)
    pairs = tuple((int(a), int(b)) for a, b in zip(*np.nonzero(leq)))
    spec = OmlSpec(tuple(names), pairs, tuple(int(v) for v in neg), int(zero), int(one), covers=False)
    return build_oml(spec, cap=cap)


# ------------------------------------------------------------ interrogation


def verify_oml_axioms(L: Oml) -> AxiomReport:
    """Exhaustively check every orthomodular-lattice axiom on the tables."""
    n = L.n
    r = AxiomReport(f"orthomodular lattice axioms (n={n})", names=L.names)
    leq, meet, join, neg = L.leq, L.meet, L.join, L.neg
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    x2, y2 = np.arange(n)[:, None], np.arange(n)[None, :]

    r.add("reflexive", ~np.diag(leq))
    r.add("antisymmetric", leq & leq.T & (x2 != y2))
    r.add("transitive", leq[x, y] & leq[y, z] & ~leq[x, z])
    r.add("bounds", ~leq[L.zero] | ~leq[:, L.one])
    m = meet[x2, y2]
    r.add("meet-lower-bound", ~leq[m, x2] | ~leq[m, y2])
    r.add("meet-greatest", leq[z, x] & leq[z, y] & ~leq[z, meet[x, y]])
    j = join[x2, y2]
    r.add("join-upper-bound", ~leq[x2, j] | ~leq[y2, j])
    r.add("join-least", leq[x, z] & leq[y, z] & ~leq[join[x, y], z])
    r.add("commutative", (meet != meet.T) | (join != join.T))
    r.add("associative", (meet[meet[x, y], z] != meet[x, meet[y, z]])
          | (join[join[x, y], z] != join[x, join[y, z]]))
    r.add("absorption", (meet[x2, join[x2, y2]] != x2) | (join[x2, meet[x2, y2]] != x2))
    r.add("involution", neg[neg] != np.arange(n))
    r.add("de-morgan", neg[join[x2, y2]] != meet[neg[x2], neg[y2]])
    r.add("complement", (meet[np.arange(n), neg] != L.zero) | (join[np.arange(n), neg] != L.one))
    r.add("orthomodular", _orthomodular_lhs(L) != join)
    return r


def orthogonal(L: Oml, a, b) -> bool:
    a, b = L.index(a), L.index(b)
    return bool(L.leq[a, L.neg[b]])


def center(L: Oml) -> list[int]:
    """Central elements: those z with a = (a∧z)∨(a∧¬z) for every a."""
    a = np.arange(L.n)[:, None]
    z = np.arange(L.n)[None, :]
    ok = L.join[L.meet[a, z], L.meet[a, L.neg[z]]] == a
    return [int(i) for i in np.flatnonzero(ok.all(axis=0))]


def is_distributive(L: Oml) -> bool:
    x = np.arange(L.n)[:, None, None]
    y = np.arange(L.n)[None, :, None]
    z = np.arange(L.n)[None, None, :]
    return bool((L.meet[x, L.join[y, z]] == L.join[L.meet[x, y], L.meet[x, z]]).all())


def subalgebra_tables(L: Oml, elems):
    """Restrict the tables to a subset closed under meet, join and neg."""
    elems = [int(e) for e in elems]
    pos = np.full(L.n, -1, dtype=np.intp)
    pos[elems] = np.arange(len(elems))
    ix = np.ix_(elems, elems)
    meet = pos[L.meet[ix]]
    join = pos[L.join[ix]]
    return pos, meet, join


def interval_oml(L: Oml, a) -> Oml:
    """The interval [0, a] with relative orthocomplement x ↦ ¬x ∧ a."""
    a = L.index(a)
    elems = [int(i) for i in np.flatnonzero(L.leq[:, a])]
    pos, meet, join = subalgebra_tables(L, elems)
    neg = pos[L.meet[L.neg[elems], a]]
    sub = Oml(
        tuple(L.names[e] for e in elems),
        L.leq[np.ix_(elems, elems)],
        meet,
        join,
        neg,
        int(pos[L.zero]),
        int(pos[a]),
    )
    _check_orthocomplement(sub)
    return sub


def product(L1: Oml, L2: Oml) -> Oml:
    """Direct product; the pair (i, j) has index ``i * L2.n + j``."""
    n1, n2 = L1.n, L2.n
    names = tuple(f"({a},{b})" for a, b in iproduct(L1.names, L2.names))
    leq = (L1.leq[:, None, :, None] & L2.leq[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    meet = (L1.meet[:, None, :, None] * n2 + L2.meet[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    join = (L1.join[:, None, :, None] * n2 + L2.join[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    neg = (L1.neg[:, None] * n2 + L2.neg[None, :]).reshape(-1)
    P = Oml(names, leq, meet, join, neg, L1.zero * n2 + L2.zero, L1.one * n2 + L2.one)
    _check_orthocomplement(P)
    return P


# ----------------------------------------------------------------- builders


def _letter(i):
    letters = string.ascii_lowercase
    return letters[i] if i < len(letters) else f"a{i}"


def boolean_algebra(k: int, *, cap: int = DEFAULT_ELEMENT_CAP) -> Oml:
    """The Boolean algebra with ``k`` atoms; elements are atom bitmasks."""
    if k < 0:
        raise InvalidSpec("k must be non-negative")
    n = 1 << k
    if n > cap:
        raise ResourceCap(f"2^{k} elements exceeds the element cap {cap}", progress=n)
    full = n - 1

    def label(mask):
        if mask == 0:
            return "0"
        if mask == full:
            return "1"
        members = [_letter(i) for i in range(k) if mask >> i & 1]
        rest = full & ~mask
        # complements of earlier atoms are named ¬x, so B₄ reads 0, a, ¬a, 1
        if bin(rest).count("1") == 1 and (len(members) > 1 or rest < mask):
            return "¬" + _letter(rest.bit_length() - 1)
        if len(members) == 1:
            return members[0]
        return "∨".join(members)

    masks = np.arange(n)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    meet = masks[:, None] & masks[None, :]
    join = masks[:, None] | masks[None, :]
    neg = full & ~masks
    if k == 0:
        return Oml(("0",), leq, meet, join, neg, 0, 0)
    return Oml(tuple(label(m) for m in range(n)), leq, meet, join, neg, 0, full)


def mo(n: int) -> Oml:
    """Height-2 lattice with ``n`` pairs of complementary atoms."""
    if n < 1:
        raise InvalidSpec("mo(n) needs n >= 1")
    names = ["0"]
    for i in range(n):
        names += [_letter(i), "¬" + _letter(i)]
    names.append("1")
    top = len(names) - 1
    covers = [(0, i) for i in range(1, top)] + [(i, top) for i in range(1, top)]
    neg = [top] + [i + 1 if i % 2 else i - 1 for i in range(1, top)] + [0]
    return build_oml(OmlSpec(tuple(names), tuple(covers), tuple(neg), 0, top))


def mo2_times_2() -> Oml:
    """MO2 × 2 with atoms a..e labelled as in the worked example.

    ``c`` is the central atom; every other atom pairs orthogonally with
    ``c`` and with exactly one further atom (a ⊥ b, d ⊥ e).
    """
    names = ("0", "a", "b", "c", "d", "e", "¬a", "¬b", "¬c", "¬d", "¬e", "1")
    ix = {name: i for i, name in enumerate(names)}
    above = {
        "¬a": ("b", "c"),
        "¬b": ("a", "c"),
        "¬c": ("a", "b", "d", "e"),
        "¬d": ("c", "e"),
        "¬e": ("c", "d"),
    }
    covers = [(0, ix[a]) for a in "abcde"]
    covers += [(ix[a], ix[co]) for co, atoms in above.items() for a in atoms]
    covers += [(ix[co], ix["1"]) for co in above]
    neg = [0] * 12
    neg[0], neg[11] = 11, 0
    for a in "abcde":
        neg[ix[a]], neg[ix["¬" + a]] = ix["¬" + a], ix[a]
    return build_oml(OmlSpec(names, tuple(covers), tuple(neg), 0, 11))


# ------------------------------------------------------------- isomorphism


def is_isomorphism(L1: Oml, L2: Oml, f) -> bool:
    f = np.asarray(f, dtype=np.intp)
    if L1.n != L2.n or sorted(f.tolist()) != list(range(L2.n)):
        return False
    return bool(
        (L2.leq[np.ix_(f, f)] == L1.leq).all()
        and (L2.neg[f] == f[L1.neg]).all()
    )


def find_isomorphism(L1: Oml, L2: Oml) -> list[int] | None:
    """OML isomorphism L1 → L2 by backtracking over atom images.

    Finite OMLs are atomistic, so a map on atoms extends by joins; atoms are
    matched only to atoms with the same number of elements above them.
    """
    if L1.n != L2.n:
        return None
    if L1.n == 1:
        return [0]
    at1, at2 = L1.atoms(), L2.atoms()
    if len(at1) != len(at2):
        return None
    up1 = L1.leq.sum(axis=1)
    up2 = L2.leq.sum(axis=1)
    if sorted(up1[at1]) != sorted(up2[at2]):
        return None
    below1 = [np.array([a for a in at1 if L1.leq[a, x]]) for x in range(L1.n)]

    def extend(img):
        f = np.empty(L1.n, dtype=np.intp)
        for x in range(L1.n):
            v = L2.zero
            for a in below1[x]:
                v = L2.join[v, img[a]]
            f[x] = v
        return f if is_isomorphism(L1, L2, f) else None

    def search(i, img, used):
        if i == len(at1):
            return extend(img)
        a = at1[i]
        for b in at2:
            if b in used or up2[b] != up1[a]:
                continue
            ok = all(
                L1.leq[a, L1.neg[p]] == L2.leq[b, L2.neg[img[p]]]
                and up1[L1.join[a, p]] == up2[L2.join[b, img[p]]]
                for p in at1[:i]
            )
            if not ok:
                continue
            img[a] = b
            used.add(b)
            found = search(i + 1, img, used)
            if found is not None:
                return found
            used.discard(b)
            del img[a]
        return None

    f = search(0, {}, set())
    return None if f is None else [int(v) for v in f]
