"""First-order formulas over the order signature.

The AST covers the pure order language (x < y, x = y), relational atoms
for finite signatures, and a primitive block atom sim_b(x, y) meaning
"x and y lie in the same b-block".  Schematic infinitary families are
kept as truncated disjunctions/conjunctions with an explicit bound and
never claim a determinate value past the truncation.

Rank bookkeeping assigns each formula the pair (s, p): levels at which
it is Sigma_s respectively Pi_p.  A sim_b atom is Sigma_{2b} definable,
so it is booked as (2b+1, 2b+1); with that convention the two
translators shift qrank exactly, by left addition, on every formula
that contains at least one quantifier.  qrank reports the smaller side.

eval3 checks a sentence against the enumerated prefix of a presentation
and answers True / False / None (unknown).  Determinate answers are
sound for the full order, not just the prefix: quantifiers additionally
range over "gap" elements, one for each nonempty interval between
consecutive enumerated addresses, whose atomic facts are exactly the
position-determined ones.  Two gap elements from the same gap compare
unknown (unless the gap provably holds a single element), which is what
keeps certification honest.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from .intervals import beta_block_key, interval_card
from .ordinals import ONE, ZERO, Ordinal, cnf_add, cnf_double, parse_ordinal, render_ordinal
from .parser import ParseError
from .terms import UnsupportedTermError


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Less(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class Eq(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple


@dataclass(frozen=True)
class Sim(Formula):
    beta: Ordinal
    x: str
    y: str

    def __post_init__(self):
        if isinstance(self.beta, int):
            object.__setattr__(self, "beta", Ordinal.from_int(self.beta))
        if self.beta < ONE:
            raise ValueError("sim atoms need a level >= 1")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Family(Formula):
    """Truncated schematic junction: stands for an omega-indexed family.

    `floor` records a rank lower bound the missing instances would
    contribute, so a truncation of a limit-level family still reports
    the family's rank.
    """

    kind: str  # "or" | "and"
    name: str
    instances: tuple
    floor: Ordinal | None = None


TRUE = And(())
FALSE = Or(())


def conj(*parts: Formula) -> Formula:
    flat = [q for q in parts if q != TRUE]
    if any(q == FALSE for q in flat):
        return FALSE
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat = [q for q in parts if q != FALSE]
    if any(q == TRUE for q in flat):
        return TRUE
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, (Less, Eq)):
        return frozenset((f.x, f.y))
    if isinstance(f, Sim):
        return frozenset((f.x, f.y))
    if isinstance(f, Rel):
        return frozenset(f.args)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out: frozenset = frozenset()
        for q in f.parts:
            out |= free_vars(q)
        return out
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Family):
        out = frozenset()
        for q in f.instances:
            out |= free_vars(q)
        return out
    raise TypeError(f"not a formula: {f!r}")


def _fresh(base: str, taken) -> str:
    if base not in taken:
        return base
    k = 0
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


# --- the sentence catalog ---


def _le(x: str, y: str) -> Formula:
    return disj(Less(x, y), Eq(x, y))


def _ge(x: str, y: str) -> Formula:
    return disj(Less(y, x), Eq(x, y))


def successor_formula(x: str = "x", y: str = "y") -> Formula:
    """y is the immediate successor of x: x < y and nothing sits strictly between."""
    z = _fresh("z", {x, y})
    return conj(Less(x, y), Forall(z, disj(_le(z, x), _ge(z, y))))


def library(name: str, n: int | None = None, x: str = "x", y: str = "y", z: str = "z") -> Formula:
    """The named catalog formula; Succ and BkContains take the chain length n."""
    key = name.lower().rstrip("_n")
    if key == "l":
        v = _fresh("y", {x})
        return Exists(v, Less(v, x))
    if key == "r":
        v = _fresh("y", {x})
        return Exists(v, Less(x, v))
    if key == "b":
        v = _fresh("y", {x, z})
        return Exists(v, conj(Less(x, v), Less(v, z)))
    if key == "s":
        return successor_formula(x, y)
    if key == "hasleast":
        return Exists("x", Not(Exists("y", Less("y", "x"))))
    if key == "hasgreatest":
        return Exists("x", Not(Exists("y", Less("x", "y"))))
    if key == "succ":
        if n is None or n < 1:
            raise ValueError("succ needs a chain length n >= 1")
        return succ_chain(n)
    if key == "bkcontains" or key == "bk":
        if n is None or n < 1:
            raise ValueError("bk needs a block size n >= 1")
        return bk_contains(n)
    raise ValueError(f"unknown catalog formula: {name}")


def succ_chain(n: int) -> Formula:
    """There are n successive elements: adjacent pairs have nothing between them."""
    xs = [f"x{i + 1}" for i in range(n)]
    links = []
    for a, b in zip(xs, xs[1:]):
        links.append(Less(a, b))
        links.append(Not(Exists("y", conj(Less(a, "y"), Less("y", b)))))
    body = conj(*links)
    for v in reversed(xs):
        body = Exists(v, body)
    return body


def bk_contains(n: int) -> Formula:
    """Some maximal successor chain has exactly n elements: an n-sized block."""
    xs = [f"x{i + 1}" for i in range(n)]
    parts = [successor_formula(a, b) for a, b in zip(xs, xs[1:])]
    parts.append(Not(Exists("z", successor_formula("z", xs[0]))))
    parts.append(Not(Exists("z", successor_formula(xs[-1], "z"))))
    body = conj(*parts)
    for v in reversed(xs):
        body = Exists(v, body)
    return body


def card_at_least(k: int) -> Formula:
    """At least k elements, as a purely existential chain."""
    if k < 1:
        return TRUE
    xs = [f"x{i + 1}" for i in range(k)]
    body = conj(*[Less(a, b) for a, b in zip(xs, xs[1:])])
    for v in reversed(xs):
        body = Exists(v, body)
    return body


def exact_card(n: int) -> Formula:
    return conj(card_at_least(n), Not(card_at_least(n + 1)))


def successor_guard(v: str) -> Formula:
    """v has an immediate predecessor; picks the designated element of a 2-part."""
    u = _fresh("u", {v})
    return Exists(u, successor_formula(u, v))


def unfold_sim(beta: Ordinal, bound: int, x: str = "x", y: str = "y") -> Formula:
    """One unfolding step of sim_beta as a truncated family, for export only.

    Successor levels say "at most n classes of the previous level strictly
    between"; limit levels collect the lower sim atoms.  Ranks of the
    successor unfolding land exactly on Sigma_{2 beta}.
    """
    from .presentations import ordinals_below

    if beta < ONE:
        raise ValueError("sim atoms start at level 1")
    name = f"sim_{render_ordinal(beta)}"
    if beta.is_successor:
        alpha = beta.predecessor()

        def apart(a: str, b: str) -> Formula:
            if alpha.is_zero:
                return Not(Eq(a, b))
            return Not(Sim(alpha, a, b))

        insts = []
        for n in range(bound):
            zs = [f"z{i + 1}" for i in range(n + 1)]
            parts = [conj(Less(x, v), Less(v, y)) for v in zs]
            for i in range(len(zs)):
                for j in range(i + 1, len(zs)):
                    parts.append(apart(zs[i], zs[j]))
            inner = conj(*parts)
            for v in reversed(zs):
                inner = Exists(v, inner)
            insts.append(Not(inner))
        return Family("or", name, tuple(insts))
    insts = []
    for alpha in ordinals_below(beta):
        if len(insts) >= bound:
            break
        if alpha.is_zero:
            insts.append(Eq(x, y))
        else:
            insts.append(Sim(alpha, x, y))
    return Family("or", name, tuple(insts), floor=cnf_double(beta))


# --- rank bookkeeping ---


def _rank(f: Formula) -> tuple:
    """(s, p): least levels making f Sigma_s respectively Pi_p."""
    if isinstance(f, (Less, Eq, Rel)):
        return ZERO, ZERO
    if isinstance(f, Sim):
        lvl = cnf_add(cnf_double(f.beta), ONE)
        return lvl, lvl
    if isinstance(f, Not):
        s, p = _rank(f.body)
        return p, s
    if isinstance(f, (And, Or)):
        s, p = ZERO, ZERO
        for q in f.parts:
            qs, qp = _rank(q)
            s, p = max(s, qs), max(p, qp)
        return s, p
    if isinstance(f, Exists):
        s, _ = _rank(f.body)
        s = max(s, ONE)
        return s, cnf_add(s, ONE)
    if isinstance(f, Forall):
        _, p = _rank(f.body)
        p = max(p, ONE)
        return cnf_add(p, ONE), p
    if isinstance(f, Family):
        s, p = ZERO, ZERO
        for q in f.instances:
            qs, qp = _rank(q)
            s, p = max(s, qs), max(p, qp)
        if f.kind == "or":
            s = max(s, ONE)
            if f.floor is not None:
                s = max(s, f.floor)
            return s, cnf_add(s, ONE)
        p = max(p, ONE)
        if f.floor is not None:
            p = max(p, f.floor)
        return cnf_add(p, ONE), p
    raise TypeError(f"not a formula: {f!r}")


def qrank(f: Formula) -> tuple:
    """(level, kind) with kind one of "sigma", "pi", "delta"."""
    s, p = _rank(f)
    if s < p:
        return s, "sigma"
    if p < s:
        return p, "pi"
    return s, "delta"


def rank_text(f: Formula) -> str:
    level, kind = qrank(f)
    label = {"sigma": "Sigma", "pi": "Pi", "delta": "Delta"}[kind]
    return f"{label}_{render_ordinal(level)}"


# --- the two structural translators ---


def translate_zeta_power(f: Formula, beta: Ordinal | int) -> Formula:
    """Relativize to zeta^beta blocks: = becomes sim_beta, < adds block apartness.

    Takes Sigma_g input to Sigma_{2 beta + g} output, clause by clause.
    """
    if isinstance(beta, int):
        beta = Ordinal.from_int(beta)
    if beta < ONE:
        raise ValueError("zeta-power translation needs beta >= 1")

    def go(q: Formula) -> Formula:
        if isinstance(q, Less):
            return And((q, Not(Sim(beta, q.x, q.y))))
        if isinstance(q, Eq):
            return Sim(beta, q.x, q.y)
        if isinstance(q, (Sim, Rel)):
            raise ValueError("translation input must be over the pure order signature")
        if isinstance(q, Not):
            return Not(go(q.body))
        if isinstance(q, And):
            return And(tuple(go(r) for r in q.parts))
        if isinstance(q, Or):
            return Or(tuple(go(r) for r in q.parts))
        if isinstance(q, Exists):
            return Exists(q.var, go(q.body))
        if isinstance(q, Forall):
            return Forall(q.var, go(q.body))
        if isinstance(q, Family):
            floor = None if q.floor is None else cnf_add(cnf_double(beta), q.floor)
            return Family(q.kind, q.name, tuple(go(r) for r in q.instances), floor)
        raise TypeError(f"not a formula: {q!r}")

    return go(f)


def translate_eta2eta(f: Formula) -> Formula:
    """Guard every quantifier by "is the designated successor element".

    Atomic formulas pass through unchanged; takes Sigma_g input to
    Sigma_{1 + g} output.
    """

    def go(q: Formula) -> Formula:
        if isinstance(q, (Less, Eq)):
            return q
        if isinstance(q, (Sim, Rel)):
            raise ValueError("translation input must be over the pure order signature")
        if isinstance(q, Not):
            return Not(go(q.body))
        if isinstance(q, And):
            return And(tuple(go(r) for r in q.parts))
        if isinstance(q, Or):
            return Or(tuple(go(r) for r in q.parts))
        if isinstance(q, Exists):
            return Exists(q.var, And((successor_guard(q.var), go(q.body))))
        if isinstance(q, Forall):
            return Forall(q.var, Or((Not(successor_guard(q.var)), go(q.body))))
        if isinstance(q, Family):
            floor = None if q.floor is None else cnf_add(ONE, q.floor)
            return Family(q.kind, q.name, tuple(go(r) for r in q.instances), floor)
        raise TypeError(f"not a formula: {q!r}")

    return go(f)


# --- bounded three-valued checking ---


@dataclass(frozen=True)
class _Gap:
    """Virtual element ranging over the open gap before sorted slot `slot`."""

    slot: int


def _kand(vals) -> bool | None:
    out: bool | None = True
    for v in vals:
        if v is False:
            return False
        if v is None:
            out = None
    return out


def _kor(vals) -> bool | None:
    out: bool | None = False
    for v in vals:
        if v is True:
            return True
        if v is None:
            out = None
    return out


class _Checker:
    def __init__(self, p, stage: int):
        self.p = p
        self.term = p.term
        self.n = min(stage, p.size)
        ids = list(range(self.n))
        self.order = sorted(ids, key=cmp_to_key(p.compare))
        self.slot_of = {i: pos for pos, i in enumerate(self.order)}
        self.gap_cards = [self._gap_card(g) for g in range(self.n + 1)]
        self.gaps = [g for g in range(self.n + 1) if self.gap_cards[g] != 0]

    def _gap_card(self, g: int):
        lo = self.p.addr(self.order[g - 1]) if g > 0 else None
        hi = self.p.addr(self.order[g]) if g < self.n else None
        return interval_card(self.term, lo, hi)

    def less(self, u, v) -> bool | None:
        if isinstance(u, _Gap) and isinstance(v, _Gap):
            if u.slot != v.slot:
                return u.slot < v.slot
            return False if self.gap_cards[u.slot] == 1 else None
        if isinstance(u, _Gap):
            return u.slot <= self.slot_of[v]
        if isinstance(v, _Gap):
            return self.slot_of[u] < v.slot
        return self.p.less(u, v)

    def eq(self, u, v) -> bool | None:
        if isinstance(u, _Gap) and isinstance(v, _Gap):
            if u.slot != v.slot:
                return False
            return True if self.gap_cards[u.slot] == 1 else None
        if isinstance(u, _Gap) or isinstance(v, _Gap):
            return False
        return u == v

    def sim(self, beta: Ordinal, u, v) -> bool | None:
        if isinstance(u, _Gap) or isinstance(v, _Gap):
            return None
        a = beta_block_key(self.term, self.p.addr(u), beta)
        b = beta_block_key(self.term, self.p.addr(v), beta)
        return a == b

    def eval(self, f: Formula, env: dict) -> bool | None:
        if isinstance(f, Less):
            return self.less(env[f.x], env[f.y])
        if isinstance(f, Eq):
            return self.eq(env[f.x], env[f.y])
        if isinstance(f, Sim):
            return self.sim(f.beta, env[f.x], env[f.y])
        if isinstance(f, Rel):
            raise UnsupportedTermError("relational atoms have no order-presentation semantics")
        if isinstance(f, Not):
            v = self.eval(f.body, env)
            return None if v is None else not v
        if isinstance(f, And):
            return _kand(self.eval(q, env) for q in f.parts)
        if isinstance(f, Or):
            return _kor(self.eval(q, env) for q in f.parts)
        if isinstance(f, Exists):
            return self._quant(f.var, f.body, env, want=True)
        if isinstance(f, Forall):
            return self._quant(f.var, f.body, env, want=False)
        if isinstance(f, Family):
            # A truncation never certifies the unbounded direction.
            if f.kind == "or":
                v = _kor(self.eval(q, env) for q in f.instances)
                return True if v is True else None
            v = _kand(self.eval(q, env) for q in f.instances)
            return False if v is False else None
        raise TypeError(f"not a formula: {f!r}")

    def _quant(self, var: str, body: Formula, env: dict, want: bool) -> bool | None:
        # Enumerated elements plus one virtual element per nonempty gap
        # cover the whole order, so a uniform verdict is a sound verdict.
        unknown = False
        for i in range(self.n):
            v = self.eval(body, {**env, var: i})
            if v is want:
                return want
            if v is None:
                unknown = True
        for g in self.gaps:
            v = self.eval(body, {**env, var: _Gap(g)})
            if v is want:
                return want
            if v is None:
                unknown = True
        return None if unknown else (not want)


def eval3(f: Formula, p, stage: int, env: dict | None = None) -> bool | None:
    """Check f on the first `stage` enumerated elements; None means unknown.

    Free variables are bound by `env`, mapping names to element ids.
    """
    checker = _Checker(p, stage)
    bound = dict(env or {})
    missing = free_vars(f) - set(bound)
    if missing:
        raise ValueError(f"unbound variables: {sorted(missing)}")
    return checker.eval(f, bound)


# --- concrete syntax ---

_MACROS = ("succ", "bk", "sim", "hasleast", "hasgreatest", "true", "false")


def parse_formula(src: str) -> Formula:
    return _FParser(src).parse()


class _FParser:
    def __init__(self, src: str):
        self.src = src
        self.toks = self._lex(src)
        self.pos = 0

    @staticmethod
    def _lex(src: str) -> list:
        out = []
        i = 0
        while i < len(src):
            c = src[i]
            if c.isspace():
                i += 1
                continue
            if c.isalnum() or c == "_":
                j = i
                while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                    j += 1
                out.append(("name", src[i:j]))
                i = j
                continue
            two = src[i : i + 2]
            if two in ("->", "<=", ">=", "!="):
                out.append(("op", two))
                i += 2
                continue
            if c in "().,<>=&|~!+*^":
                out.append(("op", c))
                i += 1
                continue
            raise ParseError(f"bad character {c!r} in formula at {i}")
        out.append(("end", ""))
        return out

    def _peek(self, k: int = 0):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def _take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def _expect(self, text: str):
        kind, val = self._take()
        if val != text:
            raise ParseError(f"expected {text!r}, got {val!r}")

    def parse(self) -> Formula:
        f = self._implies()
        if self._peek()[0] != "end":
            raise ParseError(f"trailing input from {self._peek()[1]!r}")
        return f

    def _implies(self) -> Formula:
        left = self._or()
        if self._peek()[1] == "->":
            self._take()
            right = self._implies()
            return disj(Not(left), right)
        return left

    def _or(self) -> Formula:
        parts = [self._and()]
        while self._peek()[1] == "|":
            self._take()
            parts.append(self._and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def _and(self) -> Formula:
        parts = [self._unary()]
        while self._peek()[1] == "&":
            self._take()
            parts.append(self._unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def _unary(self) -> Formula:
        kind, val = self._peek()
        if val in ("~", "!"):
            self._take()
            return Not(self._unary())
        if kind == "name" and val in ("E", "A") and self._peek(1)[0] == "name" and self._peek(2)[1] == ".":
            self._take()
            var = self._take()[1]
            self._expect(".")
            body = self._implies()
            return Exists(var, body) if val == "E" else Forall(var, body)
        return self._atom()

    def _atom(self) -> Formula:
        kind, val = self._peek()
        if val == "(":
            self._take()
            f = self._implies()
            self._expect(")")
            return f
        if kind != "name":
            raise ParseError(f"expected an atom, got {val!r}")
        low = val.lower()
        if low in _MACROS or (self._peek(1)[1] == "(" and low in ("l", "r", "b", "s")):
            return self._macro()
        var = self._take()[1]
        op = self._peek()[1]
        if op in ("<", "=", "<=", ">", ">=", "!="):
            self._take()
            other = self._take()
            if other[0] != "name":
                raise ParseError(f"expected a variable after {op!r}")
            w = other[1]
            if op == "<":
                return Less(var, w)
            if op == "=":
                return Eq(var, w)
            if op == ">":
                return Less(w, var)
            if op == "<=":
                return _le(var, w)
            if op == ">=":
                return _ge(var, w)
            return Not(Eq(var, w))
        raise ParseError(f"lone variable {var!r} is not a formula")

    def _macro(self) -> Formula:
        name = self._take()[1]
        low = name.lower()
        if low == "true":
            return TRUE
        if low == "false":
            return FALSE
        if low in ("hasleast", "hasgreatest"):
            return library(low)
        self._expect("(")
        if low in ("succ", "bk"):
            self._expect("n")
            self._expect("=")
            n = self._int()
            self._expect(")")
            return library(low, n=n)
        if low == "sim":
            self._expect("b")
            self._expect("=")
            beta = self._ordinal()
            self._expect(",")
            x = self._take()[1]
            self._expect(",")
            y = self._take()[1]
            self._expect(")")
            return Sim(beta, x, y)
        args = [self._take()[1]]
        while self._peek()[1] == ",":
            self._take()
            args.append(self._take()[1])
        self._expect(")")
        if low == "l":
            return library("L", x=args[0])
        if low == "r":
            return library("R", x=args[0])
        if low == "b":
            if len(args) != 2:
                raise ParseError("B takes two variables")
            return library("B", x=args[0], z=args[1])
        if low == "s":
            if len(args) != 2:
                raise ParseError("S takes two variables")
            return successor_formula(args[0], args[1])
        raise ParseError(f"unknown macro {name!r}")

    def _int(self) -> int:
        kind, val = self._take()
        if kind != "name" or not val.isdigit():
            raise ParseError(f"expected a number, got {val!r}")
        return int(val)

    def _ordinal(self) -> Ordinal:
        chunk = []
        while self._peek()[1] not in (",", ")") and self._peek()[0] != "end":
            chunk.append(self._take()[1])
        try:
            return parse_ordinal("".join(chunk))
        except Exception as e:
            raise ParseError(f"bad ordinal {''.join(chunk)!r}: {e}") from e


def formula_text(f: Formula) -> str:
    if f == TRUE:
        return "true"
    if f == FALSE:
        return "false"
    if isinstance(f, Less):
        return f"{f.x} < {f.y}"
    if isinstance(f, Eq):
        return f"{f.x} = {f.y}"
    if isinstance(f, Sim):
        return f"sim(b={render_ordinal(f.beta)}, {f.x}, {f.y})"
    if isinstance(f, Rel):
        return f"{f.name}({', '.join(f.args)})"
    if isinstance(f, Not):
        return f"~{_sub_text(f.body)}"
    if isinstance(f, And):
        return "(" + " & ".join(formula_text(q) for q in f.parts) + ")"
    if isinstance(f, Or):
        return "(" + " | ".join(formula_text(q) for q in f.parts) + ")"
    if isinstance(f, Exists):
        return f"E {f.var}. {formula_text(f.body)}"
    if isinstance(f, Forall):
        return f"A {f.var}. {formula_text(f.body)}"
    if isinstance(f, Family):
        joiner = " | " if f.kind == "or" else " & "
        return f"[{f.name}](" + joiner.join(formula_text(q) for q in f.instances) + ")"
    raise TypeError(f"not a formula: {f!r}")


def _sub_text(f: Formula) -> str:
    text = formula_text(f)
    if isinstance(f, (Less, Eq, Exists, Forall)):
        return f"({text})"
    return text
