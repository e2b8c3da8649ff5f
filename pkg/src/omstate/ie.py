"""OMLs carrying an internal Boolean pre-state operation ``s``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CarrierMismatch, NotAnIeLattice, NotAPrestate
from .oml import Oml, center, product
from .report import AxiomReport
from .states import StateMap, classify, enumerate_states


def verify_ie_axioms(L: Oml, s) -> AxiomReport:
    """Check s1–s5 and, as derived diagnostics, the consequences E1.1–E1.6."""
    s = np.asarray(s, dtype=np.intp)
    if s.shape != (L.n,) or (s < 0).any() or (s >= L.n).any():
        raise CarrierMismatch(f"s must be a table of {L.n} element indices")
    meet, join, neg, leq = L.meet, L.join, L.neg, L.leq
    n = L.n
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    r = AxiomReport(f"IE_B axioms (n={n})", names=L.names)
    r.add("s1", np.array([s[L.one] != L.one]))
    r.add("s2", s[neg] != neg[s])
    r.add("s3", s[join[x, s[y]]] != join[s[x], s[y]])
    # witness order (x, y) as in the axiom statement
    r.add("s4", join[meet[y, s[x]], meet[y, neg[s[x]]]] != y)
    r.add("s5", ~leq[s[meet[x, y]], meet[s[x], s[y]]])

    image = np.unique(s)
    z = set(center(L))
    ix = np.ix_(image, image)
    in_image = np.zeros(n, dtype=bool)
    in_image[image] = True
    e1_bad = [i for i in image if i not in z]
    closed = in_image[meet[ix]].all() and in_image[join[ix]].all() and in_image[neg[image]].all()
    a, b, c = image[:, None, None], image[None, :, None], image[None, None, :]
    distributive = (meet[a, join[b, c]] == join[meet[a, b], meet[a, c]]).all()
    r.add_result("E1.1", not e1_bad and closed and distributive,
                 (int(e1_bad[0]),) if e1_bad else None, diagnostic=True)
    r.add("E1.2", leq & ~leq[s[x], s[y]], diagnostic=True)
    r.add("E1.3", ~leq[join[s[x], s[y]], s[join[x, y]]], diagnostic=True)
    r.add("E1.4", s[s] != s, diagnostic=True)
    r.add("E1.5", in_image != (s == np.arange(n)), diagnostic=True)
    r.add("E1.6", s[meet[x, s[y]]] != meet[s[x], s[y]], diagnostic=True)
    return r


@dataclass(frozen=True, eq=False)
class IeLattice:
    """An OML together with a table ``s`` satisfying s1–s5 (checked on creation)."""

    base: Oml
    s: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        s = np.array(self.s, dtype=np.intp)
        s.flags.writeable = False
        object.__setattr__(self, "s", s)
        if self.validate:
            report = verify_ie_axioms(self.base, s)
            if not report.ok:
                bad = ", ".join(f.name for f in report.failures() if not f.diagnostic)
                raise NotAnIeLattice(f"s violates {bad}", report)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def names(self):
        return self.base.names

    def __repr__(self):
        s = ", ".join(f"{self.base.name(i)}↦{self.base.name(v)}" for i, v in enumerate(self.s))
        return f"IeLattice(n={self.n}, s=[{s}])"

    def image(self) -> list[int]:
        return sorted({int(v) for v in self.s})


def internalize(L: Oml, sigma) -> IeLattice:
    """s_σ(x) = 1 if σ(x) = 1 else 0."""
    cls = classify(L, sigma)
    if not cls.is_boolean_prestate:
        raise NotAPrestate(f"not a Boolean pre-state (witness {cls.prestate_witness})",
                           cls.prestate_witness)
    v = np.array(sigma.values if isinstance(sigma, StateMap) else sigma)
    return IeLattice(L, np.where(v == 1, L.one, L.zero))


def is_directly_indecomposable(L: IeLattice) -> bool:
    return not L.base.is_trivial and L.image() == sorted({L.base.zero, L.base.one})


def coherent_states(L: IeLattice) -> list[StateMap]:
    """Boolean pre-states σ with σ(x)=1 iff σ(s(x))=1, in lexicographic order."""
    out = []
    for st in enumerate_states(L.base):
        v = st.array()
        if (v == v[L.s]).all():
            out.append(st)
    return out


def canonical_coherent_state(L: IeLattice) -> StateMap:
    """The lexicographically first coherent pre-state."""
    states = coherent_states(L)
    return states[0] if states else None


def state_from_s(L: IeLattice) -> StateMap:
    """σ_s(x) = 1 iff s(x) = 1 (the coherent state when L is indecomposable)."""
    return StateMap(tuple(int(v == L.base.one) for v in L.s), L.base)


SUBVARIETY_TAGS = {
    "ITE_B": ("ITE_B",),
    "IJPE_B": ("ITE_B", "IJPE_B"),
    "BOOL": ("DIST",),
}


def check_subvariety(L: IeLattice, tag: str) -> bool:
    """Whether L satisfies the defining equations of the tagged subvariety."""
    from .terms import check_equation, registry

    try:
        names = SUBVARIETY_TAGS[tag]
    except KeyError:
        raise ValueError(f"unknown subvariety tag {tag!r}; expected one of {sorted(SUBVARIETY_TAGS)}")
    reg = registry()
    return all(check_equation(L, eq).holds for name in names for eq in reg[name])


def ie_product(L1: IeLattice, L2: IeLattice) -> IeLattice:
    P = product(L1.base, L2.base)
    s = (L1.s[:, None] * L2.n + L2.s[None, :]).reshape(-1)
    return IeLattice(P, s)
