"""Terms over the lattice and star signatures, the τ translation, and equation checking.

Grammar (ASCII, one line)::

    join  := meet ('|' meet)*
    meet  := unary (('&' | '.') unary)*
    unary := '!' unary | postfix
    post  := atom ("'" | '*')*
    atom  := '0' | '1' | 'x' k | 's' '(' join ')' | '(' join ')'

``&`` is ∧, ``|`` is ∨, ``!`` is ¬, ``.`` is ·, ``'`` is ′ and ``*`` is the
involution.  ``x``, ``y`` and ``z`` abbreviate ``x1``, ``x2`` and ``x3``; the
unicode symbols ∧ ∨ ¬ · ′ are accepted too.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Union

import numpy as np

from .baer import BaerStarSemigroup, IeStarSemigroup, pc_as_oml
from .errors import DerivedOpOnNonProjection, ResourceCap, SignatureMismatch, TermSyntaxError
from .ie import IeLattice
from .oml import Oml

DEFAULT_VAR_CAP = 3

LATTICE = "lattice"
STAR = "star"

LATTICE_OPS = frozenset({"meet", "join", "neg", "s"})
STAR_OPS = frozenset({"mul", "prime", "star", "s", "meet", "join"})
PRIMITIVE_STAR_OPS = frozenset({"mul", "prime", "star", "s"})


# ------------------------------------------------------------------- AST


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Unary:
    op: str  # neg | s | prime | star
    arg: "Term"


@dataclass(frozen=True)
class Binary:
    op: str  # meet | join | mul
    left: "Term"
    right: "Term"


Term = Union[Const, Var, Unary, Binary]

ZERO, ONE = Const(0), Const(1)


def var(k: int) -> Var:
    return Var(k)


def neg(t): return Unary("neg", t)
def s_(t): return Unary("s", t)
def prime(t): return Unary("prime", t)
def star(t): return Unary("star", t)
def meet(a, b): return Binary("meet", a, b)
def join(a, b): return Binary("join", a, b)
def mul(a, b): return Binary("mul", a, b)


def nodes(t: Term):
    yield t
    if isinstance(t, Unary):
        yield from nodes(t.arg)
    elif isinstance(t, Binary):
        yield from nodes(t.left)
        yield from nodes(t.right)


def ops(t: Term) -> set[str]:
    return {n.op for n in nodes(t) if isinstance(n, (Unary, Binary))}


def variables(t: Term) -> set[int]:
    return {n.index for n in nodes(t) if isinstance(n, Var)}


def complexity(t: Term) -> int:
    """Number of operation nodes."""
    return sum(isinstance(n, (Unary, Binary)) for n in nodes(t))


def signature_of(t: Term) -> str:
    used = ops(t)
    if used & {"mul", "prime", "star"}:
        return STAR
    return LATTICE


def is_primitive_star(t: Term) -> bool:
    return ops(t) <= PRIMITIVE_STAR_OPS


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    @property
    def variables(self) -> list[int]:
        return sorted(variables(self.lhs) | variables(self.rhs))

    @property
    def var_count(self) -> int:
        return len(self.variables)

    @property
    def signature(self) -> str:
        if STAR in (signature_of(self.lhs), signature_of(self.rhs)):
            return STAR
        return LATTICE

    def __str__(self):
        return format_equation(self)


# ---------------------------------------------------------------- parser


_UNICODE = {"∧": "&", "∨": "|", "¬": "!", "·": ".", "′": "'", "⋅": "."}
_SHORT_VARS = {"x": 1, "y": 2, "z": 3}


def _tokenize(text: str):
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        c = _UNICODE.get(c, c)
        if c in "()&|!.'*=01":
            toks.append((c, None, i))
            i += 1
        elif c == "s" and text[i + 1:i + 2] == "(":
            toks.append(("s", None, i))
            i += 1
        elif c in _SHORT_VARS:
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j > i + 1 and c == "x":
                k = int(text[i + 1:j])
                if k < 1:
                    raise TermSyntaxError("variable indices start at 1", text, i)
            elif j > i + 1:
                raise TermSyntaxError(f"unexpected digits after {c!r}", text, i + 1)
            else:
                k = _SHORT_VARS[c]
            toks.append(("var", k, i))
            i = j
        else:
            raise TermSyntaxError(f"unexpected character {text[i]!r}", text, i)
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, signature: str | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.signature = signature

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(self.text[tok[2]])
            raise TermSyntaxError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def check_op(self, op, pos):
        if self.signature == LATTICE and op not in LATTICE_OPS:
            raise TermSyntaxError(f"{op} is not a lattice operation", self.text, pos)
        if self.signature == STAR and op not in STAR_OPS:
            raise TermSyntaxError(f"{op} is not a star-signature operation", self.text, pos)

    def join(self):
        t = self.meet()
        while self.peek()[0] == "|":
            pos = self.take()[2]
            self.check_op("join", pos)
            t = Binary("join", t, self.meet())
        return t

    def meet(self):
        t = self.unary()
        while self.peek()[0] in "&.":
            kind, _, pos = self.take()
            op = "meet" if kind == "&" else "mul"
            self.check_op(op, pos)
            t = Binary(op, t, self.unary())
        return t

    def unary(self):
        if self.peek()[0] == "!":
            pos = self.take()[2]
            self.check_op("neg", pos)
            return Unary("neg", self.unary())
        return self.postfix()

    def postfix(self):
        t = self.atom()
        while self.peek()[0] in ("'", "*"):
            kind, _, pos = self.take()
            op = "prime" if kind == "'" else "star"
            self.check_op(op, pos)
            t = Unary(op, t)
        return t

    def atom(self):
        kind, val, pos = self.peek()
        if kind in ("0", "1"):
            self.take()
            return Const(int(kind))
        if kind == "var":
            self.take()
            return Var(val)
        if kind == "s":
            self.take()
            self.take("(")
            t = self.join()
            self.take(")")
            return Unary("s", t)
        if kind == "(":
            self.take()
            t = self.join()
            self.take(")")
            return t
        what = "end of input" if kind == "end" else repr(self.text[pos])
        raise TermSyntaxError(f"expected a term, found {what}", self.text, pos)

    def finish(self, t):
        kind, _, pos = self.peek()
        if kind != "end":
            raise TermSyntaxError(f"unexpected {self.text[pos]!r}", self.text, pos)
        return t


def parse_term(text: str, signature: str | None = None) -> Term:
    """Parse one term; ``signature`` restricts the allowed operations."""
    p = _Parser(text, signature)
    return p.finish(p.join())


def parse_equation(text: str, signature: str | None = None) -> Equation:
    p = _Parser(text, signature)
    lhs = p.join()
    p.take("=")
    rhs = p.join()
    eq = Equation(lhs, p.finish(rhs))
    if signature is None and eq.signature == STAR and "neg" in ops(eq.lhs) | ops(eq.rhs):
        pos = next(i for i, c in enumerate(text) if c in "!¬")
        raise TermSyntaxError("¬ cannot be mixed with star-signature operations", text, pos)
    return eq


# --------------------------------------------------------- pretty printer

_LEVEL = {"join": 1, "meet": 2, "mul": 2, "neg": 3, "prime": 4, "star": 4}
_ASCII = {"join": " | ", "meet": " & ", "mul": " . ", "neg": "!", "prime": "'", "star": "*"}
_PRETTY = {"join": " ∨ ", "meet": " ∧ ", "mul": "·", "neg": "¬", "prime": "′", "star": "*"}
_PRETTY_VARS = {1: "x", 2: "y", 3: "z"}


def _level(t):
    if isinstance(t, (Unary, Binary)) and t.op != "s":
        return _LEVEL[t.op]
    return 5


def format_term(t: Term, unicode: bool = False) -> str:
    sym = _PRETTY if unicode else _ASCII

    def wrap(child, min_level):
        text = go(child)
        return f"({text})" if _level(child) < min_level else text

    def go(t):
        if isinstance(t, Const):
            return str(t.value)
        if isinstance(t, Var):
            return _PRETTY_VARS.get(t.index, f"x{t.index}") if unicode else f"x{t.index}"
        if isinstance(t, Unary):
            if t.op == "s":
                return f"s({go(t.arg)})"
            if t.op == "neg":
                return sym["neg"] + wrap(t.arg, 3)
            return wrap(t.arg, 4) + sym[t.op]
        # mixed binary operators are always parenthesized for readability
        left, right = go(t.left), go(t.right)
        if _level(t.left) < _LEVEL[t.op] or (isinstance(t.left, Binary) and t.left.op != t.op):
            left = f"({left})"
        if _level(t.right) <= _LEVEL[t.op] or isinstance(t.right, Binary):
            right = f"({right})"
        return left + sym[t.op] + right

    return go(t)


def format_equation(eq: Equation, unicode: bool = False) -> str:
    return f"{format_term(eq.lhs, unicode)} = {format_term(eq.rhs, unicode)}"


# ------------------------------------------------------------ translation


def translate(t):
    """τ: lattice terms to primitive star terms (·, ′, s, 0, 1 only)."""
    if isinstance(t, Equation):
        return Equation(translate(t.lhs), translate(t.rhs))
    if isinstance(t, Const):
        return t
    if isinstance(t, Var):
        return prime(t)
    if isinstance(t, Unary):
        if t.op == "neg":
            return prime(translate(t.arg))
        if t.op == "s":
            return s_(translate(t.arg))
    if isinstance(t, Binary):
        if t.op == "meet":
            a, b = translate(t.left), translate(t.right)
            return mul(prime(mul(prime(a), b)), b)
        if t.op == "join":
            return translate(neg(meet(neg(t.left), neg(t.right))))
    raise SignatureMismatch(f"not a lattice term: {format_term(t)}")


def sugared_translation(t):
    """τ with ∧ and ∨ kept as the derived operations on closed projections.

    Variables become x′ and ¬t becomes t′; the result evaluates to the same
    element as :func:`translate` in any IE*_B-semigroup.
    """
    if isinstance(t, Equation):
        return Equation(sugared_translation(t.lhs), sugared_translation(t.rhs))
    if isinstance(t, Const):
        return t
    if isinstance(t, Var):
        return prime(t)
    if isinstance(t, Unary):
        if t.op == "neg":
            return prime(sugared_translation(t.arg))
        if t.op == "s":
            return s_(sugared_translation(t.arg))
    if isinstance(t, Binary) and t.op in ("meet", "join"):
        return Binary(t.op, sugared_translation(t.left), sugared_translation(t.right))
    raise SignatureMismatch(f"not a lattice term: {format_term(t)}")


def expand_derived(t: Term) -> Term:
    """Replace derived ∧/∨ on star terms by e₁·(e₂′·e₁)′ and (e₁′ ∧ e₂′)′."""
    if isinstance(t, (Const, Var)):
        return t
    if isinstance(t, Unary):
        return Unary(t.op, expand_derived(t.arg))
    a, b = expand_derived(t.left), expand_derived(t.right)
    if t.op == "meet":
        return mul(a, prime(mul(prime(b), a)))
    if t.op == "join":
        return prime(expand_derived(meet(prime(a), prime(b))))
    return Binary(t.op, a, b)


# -------------------------------------------------------------- semantics


class _Interp:
    """Vectorized operations of one algebra."""

    def __init__(self, algebra):
        self.algebra = algebra
        self.kind = LATTICE
        self.s = None
        if isinstance(algebra, IeLattice):
            base, self.s = algebra.base, algebra.s
        elif isinstance(algebra, IeStarSemigroup):
            base, self.s, self.kind = algebra.base, algebra.s, STAR
        elif isinstance(algebra, BaerStarSemigroup):
            base, self.kind = algebra, STAR
        elif isinstance(algebra, Oml):
            base = algebra
        else:
            raise SignatureMismatch(f"cannot evaluate terms in {type(algebra).__name__}")
        self.base = base
        self.names = base.names
        if self.kind == LATTICE:
            self.size = base.n
            self.consts = (base.zero, base.one)
        else:
            self.size = base.m
            self.consts = (base.zero, base.one)
            self.closed = base.closed_mask()

    def check(self, t: Term):
        allowed = LATTICE_OPS if self.kind == LATTICE else STAR_OPS
        bad = ops(t) - allowed
        if self.s is None:
            bad |= ops(t) & {"s"}
        if bad:
            raise SignatureMismatch(f"operation {sorted(bad)[0]} is not available on {type(self.algebra).__name__}")

    def run(self, t: Term, env: dict, grid_shape):
        if isinstance(t, Const):
            return np.full(grid_shape, self.consts[t.value], dtype=np.intp)
        if isinstance(t, Var):
            return env[t.index]
        if isinstance(t, Unary):
            a = self.run(t.arg, env, grid_shape)
            if t.op == "s":
                return self.s[a]
            if t.op == "neg":
                return self.base.neg[a]
            if t.op == "prime":
                return self.base.prime[a]
            return self.base.star[a]
        a = self.run(t.left, env, grid_shape)
        b = self.run(t.right, env, grid_shape)
        if self.kind == LATTICE:
            return (self.base.meet if t.op == "meet" else self.base.join)[a, b]
        if t.op == "mul":
            return self.base.mul[a, b]
        bad = ~(self.closed[a] & self.closed[b])
        if bad.any():
            raise DerivedOpOnNonProjection(
                f"derived {'∧' if t.op == 'meet' else '∨'} applied to a non-closed element",
                tuple(int(v) for v in np.argwhere(bad)[0]) if bad.ndim else (),
            )
        if t.op == "meet":
            return self.base.derived_meet(a, b)
        return self.base.derived_join(a, b)


def _element(interp, value):
    if isinstance(value, str):
        return interp.names.index(value)
    return int(value)


def evaluate(algebra, term: Term, valuation) -> int:
    """Value of ``term`` under ``valuation`` (a mapping or a sequence for x1, x2, …)."""
    it = _Interp(algebra)
    it.check(term)
    if isinstance(valuation, Valuation):
        valuation = valuation.assignment
    if not isinstance(valuation, dict):
        valuation = {i + 1: v for i, v in enumerate(valuation)}
    missing = variables(term) - set(valuation)
    if missing:
        raise KeyError(f"valuation misses x{min(missing)}")
    env = {k: np.array(_element(it, v), dtype=np.intp) for k, v in valuation.items()}
    try:
        return int(it.run(term, env, ()))
    except DerivedOpOnNonProjection as exc:
        raise DerivedOpOnNonProjection(str(exc), dict(valuation)) from None


eval_term = evaluate


@dataclass(frozen=True)
class Valuation:
    assignment: dict
    algebra: object = field(default=None, compare=False, repr=False)

    def format(self) -> str:
        names = getattr(self.algebra, "names", None)
        parts = []
        for k, v in sorted(self.assignment.items()):
            label = _PRETTY_VARS.get(k, f"x{k}")
            parts.append(f"{label}={names[v] if names else v}")
        return ", ".join(parts)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counterexample: Valuation | None = None
    lhs_value: int | None = None
    rhs_value: int | None = None
    checked: int = 0

    def __bool__(self):
        return self.holds


def _grid(size, k, first=None):
    """Index arrays for all valuations in lexicographic order (x1 most significant)."""
    if k == 0:
        return []
    if first is None:
        return list(np.indices((size,) * k).reshape(k, -1))
    rest = np.indices((size,) * (k - 1)).reshape(k - 1, -1) if k > 1 else np.empty((0, 1), dtype=np.intp)
    cols = rest.shape[1]
    return [np.full(cols, first, dtype=np.intp)] + list(rest)


def check_equation(algebra, eq: Equation | str, var_cap: int = DEFAULT_VAR_CAP, *,
                   workers: int = 1) -> Verdict:
    """Scan every valuation in lexicographic order; report the first counterexample."""
    if isinstance(eq, str):
        eq = parse_equation(eq)
    vs = eq.variables
    if len(vs) > var_cap:
        raise ResourceCap(f"{len(vs)} variables exceeds the variable cap {var_cap}", progress=0)
    it = _Interp(algebra)
    it.check(eq.lhs)
    it.check(eq.rhs)
    k = len(vs)
    n = it.size

    def scan(first):
        cols = _grid(n, k, first)
        env = dict(zip(vs, cols))
        shape = cols[0].shape if cols else ()
        try:
            a = it.run(eq.lhs, env, shape)
            b = it.run(eq.rhs, env, shape)
        except DerivedOpOnNonProjection as exc:
            pos = exc.witness[0] if exc.witness else 0
            raise DerivedOpOnNonProjection(
                str(exc), {v: int(c[pos]) for v, c in zip(vs, cols)}) from None
        a, b = np.broadcast_to(a, shape), np.broadcast_to(b, shape)
        bad = np.flatnonzero(a != b)
        if len(bad):
            j = bad[0]
            return Valuation({v: int(c[j]) for v, c in zip(vs, cols)}, it.base), int(a[j]), int(b[j])
        return None

    total = n ** k
    if k == 0 or total <= 1 << 20:
        chunks = [None]
    else:
        chunks = list(range(n))
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan, chunks))
    else:
        results = []
        for c in chunks:
            r = scan(c)
            results.append(r)
            if r is not None:
                break
    for r in results:
        if r is not None:
            return Verdict(False, r[0], r[1], r[2], total)
    return Verdict(True, None, None, None, total)


def _pc_algebra(S):
    base = S.base if isinstance(S, IeStarSemigroup) else S
    pc = pc_as_oml(base)
    if isinstance(S, IeStarSemigroup):
        s_pc = pc.pos[S.s[list(pc.elements)]]
        return IeLattice(pc.oml, s_pc, validate=False), pc
    return pc.oml, pc


@dataclass(frozen=True)
class TranslationCheck:
    lattice_holds: bool
    star_holds: bool

    @property
    def agree(self) -> bool:
        return self.lattice_holds == self.star_holds

    def __bool__(self):
        return self.agree


def verify_translation_theorem(S, eq: Equation | str, var_cap: int = DEFAULT_VAR_CAP) -> TranslationCheck:
    """Compare P_c(S) ⊨ eq with S ⊨ τ(eq)."""
    if isinstance(eq, str):
        eq = parse_equation(eq, LATTICE)
    lat, _ = _pc_algebra(S)
    return TranslationCheck(
        check_equation(lat, eq, var_cap).holds,
        check_equation(S, translate(eq), var_cap).holds,
    )


def valuation_correspondence_check(S, t: Term | str, v) -> bool:
    """v_c(t) = v(τ(t)) with v_c(x) = v(x′), and v*(τ(t)) = w(t) with v*(x) = ¬w(x), w = v_c."""
    if isinstance(t, str):
        t = parse_term(t, LATTICE)
    lat, pc = _pc_algebra(S)
    base = S.base if isinstance(S, IeStarSemigroup) else S
    if not isinstance(v, dict):
        v = {i + 1: x for i, x in enumerate(v)}
    elems = np.array(pc.elements)
    vc = {k: int(pc.pos[base.prime[x]]) for k, x in v.items()}
    first = int(pc.pos[evaluate(S, translate(t), v)]) == evaluate(lat, t, vc)
    P = pc.oml
    vstar = {k: int(elems[P.neg[w]]) for k, w in vc.items()}
    second = evaluate(S, translate(t), vstar) == int(elems[evaluate(lat, t, vc)])
    return first and second


# --------------------------------------------------------------- registry


_LATTICE_SOURCES = {
    "OML-laws": (
        "x & y = y & x",
        "x | y = y | x",
        "x & (y & z) = (x & y) & z",
        "x | (y | z) = (x | y) | z",
        "x & (x | y) = x",
        "x | (x & y) = x",
        "!!x = x",
        "!(x | y) = !x & !y",
        "x & !x = 0",
        "x | (!x & (x | y)) = x | y",
    ),
    "DIST": ("x & (y | z) = (x & y) | (x & z)",),
    "IE_B": (
        "s(1) = 1",
        "s(!x) = !s(x)",
        "s(x | s(y)) = s(x) | s(y)",
        "y = (y & s(x)) | (y & !s(x))",
        # s(x ∧ y) ≤ s(x) ∧ s(y), written as an equation
        "s(x & y) & (s(x) & s(y)) = s(x & y)",
    ),
    "ITE_B": ("s(x | (y & !x)) = s(x) | s(y & !x)",),
    "IJPE_B": ("s(x) & s(!x | y) = s(x & y)",),
}

# the translated equations as usually displayed, with derived ∧/∨ on closed projections
DISPLAYS = {
    "ITE_B*": ("s(x' | (y' & x'')) = s(x') | s(y' & x'')",),
    "IJPE_B*": ("s(x') & s(x'' | y') = s(x' & y')",),
    "DIST*": ("x' & (y' | z') = (x' & y') | (x' & z')",),
}

STARRED = {"ITE_B*": "ITE_B", "IJPE_B*": "IJPE_B", "DIST*": "DIST"}


@lru_cache(maxsize=None)
def registry() -> MappingProxyType:
    """Named equation sets; starred entries are τ of their unstarred sources."""
    reg = {name: tuple(parse_equation(e, LATTICE) for e in eqs) for name, eqs in _LATTICE_SOURCES.items()}
    for starred, src in STARRED.items():
        reg[starred] = tuple(translate(e) for e in reg[src])
        shown = tuple(parse_equation(e, STAR) for e in DISPLAYS[starred])
        if shown != tuple(sugared_translation(e) for e in reg[src]):
            raise AssertionError(f"display of {starred} does not match its source")
        if not all(is_primitive_star(e.lhs) and is_primitive_star(e.rhs) for e in reg[starred]):
            raise AssertionError(f"{starred} is not primitive")
    reg["S-COMMUTE"] = (parse_equation("s(x) . y = y . s(x)", STAR),)
    return MappingProxyType(reg)


@lru_cache(maxsize=None)
def displays() -> MappingProxyType:
    return MappingProxyType({k: tuple(parse_equation(e, STAR) for e in v) for k, v in DISPLAYS.items()})


def named(name: str) -> tuple[Equation, ...]:
    reg = registry()
    if name not in reg:
        raise KeyError(f"unknown equation set {name!r}; known: {', '.join(reg)}")
    return reg[name]


def all_terms(var_count: int, max_complexity: int, signature: str = LATTICE):
    """Every lattice term up to the given complexity (used for property checks)."""
    leaves = [ZERO, ONE] + [Var(k) for k in range(1, var_count + 1)]
    by_c = {0: leaves}
    unary = ["neg", "s"]
    binary = ["meet", "join"]
    for c in range(1, max_complexity + 1):
        out = [Unary(op, t) for op in unary for t in by_c[c - 1]]
        for cl in range(c):
            cr = c - 1 - cl
            out += [Binary(op, a, b) for op in binary for a in by_c[cl] for b in by_c[cr]]
        by_c[c] = out
    return itertools.chain.from_iterable(by_c[c] for c in range(max_complexity + 1))
