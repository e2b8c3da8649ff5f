"""Two-valued maps on finite OMLs: classification and exhaustive enumeration."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CarrierMismatch, ResourceCap
from .oml import DEFAULT_ELEMENT_CAP, Oml
from .report import first_true


@dataclass(frozen=True)
class StateMap:
    """A {0,1}-valued assignment over the elements of some algebra."""

    values: tuple[int, ...]
    carrier: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if any(v not in (0, 1) for v in vals):
            raise ValueError("state values must be 0 or 1")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int8)

    def bits(self) -> str:
        return "".join(map(str, self.values))

    @classmethod
    def from_bits(cls, bits: str, carrier=None) -> StateMap:
        bits = bits.strip()
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        return cls(tuple(int(b) for b in bits), carrier)

    @classmethod
    def from_true_set(cls, L: Oml, true_elements) -> StateMap:
        """Map that is 1 exactly on the named elements."""
        ones = {L.index(x) for x in true_elements}
        return cls(tuple(int(i in ones) for i in range(L.n)), L)


class StateKind(str, enum.Enum):
    PRESTATE = "prestate"
    STATE = "state"
    JAUCH_PIRON = "jauch-piron"


@dataclass(frozen=True)
class StateClass:
    is_boolean_prestate: bool
    is_two_valued_state: bool
    is_jauch_piron: bool
    prestate_witness: tuple | None = None
    # every orthogonal pair (x, y), x <= y, with σ(x∨y) != σ(x)+σ(y)
    additivity_witnesses: tuple[tuple[int, int], ...] = ()
    jauch_piron_witness: tuple | None = None

    def matches(self, kind: StateKind) -> bool:
        kind = StateKind(kind)
        if kind is StateKind.PRESTATE:
            return self.is_boolean_prestate
        if kind is StateKind.STATE:
            return self.is_two_valued_state
        return self.is_jauch_piron


def _check_carrier(n, sigma):
    if len(sigma) != n:
        raise CarrierMismatch(f"state has {len(sigma)} values, carrier has {n} elements")


def _values(L, sigma):
    if isinstance(sigma, StateMap):
        if sigma.carrier is not None and sigma.carrier is not L:
            raise CarrierMismatch("state belongs to a different carrier")
        return sigma.array()
    return np.asarray(sigma, dtype=np.int8)


def classify(L: Oml, sigma) -> StateClass:
    """Exhaustively decide the three state classes for ``sigma`` on ``L``."""
    _check_carrier(L.n, sigma)
    v = _values(L, sigma)
    n = L.n
    neg_bad = v[L.neg] != 1 - v
    mono_bad = L.leq & (v[:, None] > v[None, :])
    w = first_true(neg_bad)
    prestate_witness = w if w is not None else first_true(mono_bad)
    is_pre = prestate_witness is None

    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    orth = L.leq[x, L.neg[y]] & (x <= y)
    add_bad = orth & (v[L.join[x, y]] != v[x] + v[y])
    witnesses = tuple((int(a), int(b)) for a, b in np.argwhere(add_bad))
    is_state = is_pre and bool(v[L.one] == 1) and not witnesses

    jp_bad = (v[x] == 1) & (v[y] == 1) & (v[L.meet[x, y]] != 1)
    jp_witness = first_true(jp_bad)
    is_jp = is_state and jp_witness is None
    return StateClass(is_pre, is_state, is_jp, prestate_witness, witnesses, jp_witness)


@dataclass
class StateEnumeration:
    states: list[StateMap]
    truncated: bool = False

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]


def _up_down(L):
    up = [np.flatnonzero(L.leq[x]) for x in range(L.n)]
    down = [np.flatnonzero(L.leq[:, x]) for x in range(L.n)]
    return up, down


def _assign(L, up, down, state, x, val):
    """Set σ(x)=val and propagate negation and monotonicity; False on conflict."""
    nx = L.neg[x]
    if val:
        ones, zeros = up[x], down[nx]
    else:
        ones, zeros = up[nx], down[x]
    # the caller discards ``state`` on failure, so partial writes are harmless
    if (state[ones] == 0).any():
        return False
    state[ones] = 1
    if (state[zeros] == 1).any():
        return False
    state[zeros] = 0
    return True


def _prestate_dfs(L, up, down, state, start, out, limit):
    """Depth-first search in index order, 0 before 1; yields lexicographic order."""
    x = start
    while x < L.n and state[x] >= 0:
        x += 1
    if x == L.n:
        out.append(tuple(int(b) for b in state))
        return limit is not None and len(out) > limit
    for val in (0, 1):
        child = state.copy()
        if _assign(L, up, down, child, x, val):
            if _prestate_dfs(L, up, down, child, x + 1, out, limit):
                return True
    return False


def _subtrees(L, up, down, depth):
    """Partial assignments after branching on the first ``depth`` free elements."""
    frontier = [np.full(L.n, -1, dtype=np.int8)]
    for _ in range(depth):
        nxt = []
        for st in frontier:
            free = np.flatnonzero(st < 0)
            if not len(free):
                nxt.append(st)
                continue
            for val in (0, 1):
                child = st.copy()
                if _assign(L, up, down, child, int(free[0]), val):
                    nxt.append(child)
        frontier = nxt
    return frontier


def enumerate_states(
    L: Oml,
    kind: StateKind | str = StateKind.PRESTATE,
    limit: int | None = None,
    *,
    cap: int = DEFAULT_ELEMENT_CAP,
    workers: int = 1,
) -> StateEnumeration:
    """All maps of the requested class, in lexicographic bit-vector order.

    Pre-states are generated directly by propagation; the stricter classes
    filter the pre-states through :func:`classify`.
    """
    kind = StateKind(kind)
    if L.n > cap:
        raise ResourceCap(f"{L.n} elements exceeds the element cap {cap}", progress=0)
    up, down = _up_down(L)
    # a filtered class may need more raw pre-states than the limit
    raw_limit = limit if kind is StateKind.PRESTATE else None

    if workers <= 1:
        raw: list[tuple] = []
        _prestate_dfs(L, up, down, np.full(L.n, -1, dtype=np.int8), 0, raw, raw_limit)
    else:
        roots = _subtrees(L, up, down, max(1, (workers - 1).bit_length()))

        def run(root):
            out: list[tuple] = []
            _prestate_dfs(L, up, down, root, 0, out, raw_limit)
            return out

        with ThreadPoolExecutor(max_workers=workers) as pool:
            raw = sorted(v for part in pool.map(run, roots) for v in part)

    states = []
    for values in raw:
        if kind is not StateKind.PRESTATE and not classify(L, values).matches(kind):
            continue
        states.append(StateMap(values, L))
    truncated = limit is not None and len(states) > limit
    return StateEnumeration(states[:limit] if limit is not None else states, truncated)


def is_boolean_star_prestate(S, sigma) -> bool:
    """σ(x′)=1−σ(x) everywhere and σ restricted to P_c(S) is a Boolean pre-state."""
    from .baer import pc_as_oml

    _check_carrier(S.m, sigma)
    v = sigma.array() if isinstance(sigma, StateMap) else np.asarray(sigma, dtype=np.int8)
    if (v[S.prime] != 1 - v).any():
        return False
    pc = pc_as_oml(S)
    return classify(pc.oml, v[list(pc.elements)]).is_boolean_prestate
