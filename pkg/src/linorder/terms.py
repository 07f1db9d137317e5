"""Term algebra for countable linear orders.

Constructors: finite chains, omega, omega*, zeta, eta, finite sums,
binary products (second coordinate dominant, so A.B means B-many copies
of A), shuffles of finitely many mutually non-isomorphic orders, strong
eta and zeta representations of a set of naturals, zeta powers with a
CNF exponent below w^w, and reversal.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ordinals import Ordinal, render_ordinal


class UnsupportedTermError(Exception):
    """Raised when an operation falls outside the supported fragment."""


class PreconditionError(Exception):
    """Raised when a documented operation precondition fails."""


class _Infinite:
    """Countably infinite cardinality marker, comparable with ints."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "infinite"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Infinite)

    def __hash__(self) -> int:
        return hash("_Infinite")

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return isinstance(other, _Infinite)

    def __gt__(self, other: object) -> bool:
        return not isinstance(other, _Infinite)

    def __ge__(self, other: object) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INFINITE = _Infinite()
Card = int | _Infinite


def add_card(a: Card, b: Card) -> Card:
    if a is INFINITE or b is INFINITE:
        return INFINITE
    return a + b


def mul_card(a: Card, b: Card) -> Card:
    if a == 0 or b == 0:
        return 0
    if a is INFINITE or b is INFINITE:
        return INFINITE
    return a * b


# --- set specifications ------------------------------------------------------


@dataclass(frozen=True)
class ExplicitSet:
    """Finite set given by its strictly increasing positive members."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vs = self.values
        if not vs:
            raise ValueError("explicit set must be nonempty")
        if any(v < 1 for v in vs) or list(vs) != sorted(set(vs)):
            raise ValueError(f"values must be strictly increasing positives: {vs}")

    def contains(self, n: int) -> bool:
        return n in self.values

    def nth(self, i: int) -> int:
        return self.values[i]

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def size(self) -> Card:
        return len(self.values)

    def members_upto(self, bound: int) -> list[int]:
        return [v for v in self.values if v <= bound]

    def to_json(self):
        return {"explicit": list(self.values)}

    def __repr__(self) -> str:
        return f"{{{','.join(map(str, self.values))}}}"


@dataclass(frozen=True)
class ArithmeticSet:
    """Infinite progression {start, start+step, start+2*step, ...}."""

    start: int
    step: int

    def __post_init__(self) -> None:
        if self.start < 1 or self.step < 1:
            raise ValueError(f"start and step must be positive: {self.start}:{self.step}")

    def contains(self, n: int) -> bool:
        return n >= self.start and (n - self.start) % self.step == 0

    def nth(self, i: int) -> int:
        return self.start + i * self.step

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def size(self) -> Card:
        return INFINITE

    def members_upto(self, bound: int) -> list[int]:
        return [self.nth(i) for i in range((bound - self.start) // self.step + 1)] if bound >= self.start else []

    def to_json(self):
        return {"arithmetic": [self.start, self.step]}

    def __repr__(self) -> str:
        return f"{{{self.start}:{self.step}}}"


SetSpec = ExplicitSet | ArithmeticSet


# --- terms -------------------------------------------------------------------


class Term:
    __slots__ = ()

    def __repr__(self) -> str:
        from .render import render  # local import: render depends on Term classes

        return f"<{render(self)}>"


@dataclass(frozen=True, repr=False)
class Finite(Term):
    size: int

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError("finite size must be >= 0")


@dataclass(frozen=True, repr=False)
class Omega(Term):
    pass


@dataclass(frozen=True, repr=False)
class OmegaStar(Term):
    pass


@dataclass(frozen=True, repr=False)
class Zeta(Term):
    pass


@dataclass(frozen=True, repr=False)
class Eta(Term):
    pass


@dataclass(frozen=True, repr=False)
class Sum(Term):
    parts: tuple[Term, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("sum needs at least one part")


@dataclass(frozen=True, repr=False)
class Product(Term):
    """left.right: right-many copies of left."""

    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Shuffle(Term):
    """Dense mix of the member orders: eta split into mutually dense classes."""

    members: tuple[Term, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("shuffle needs at least one member")


@dataclass(frozen=True, repr=False)
class EtaRep(Term):
    """eta + a0 + eta + a1 + ... for the increasing enumeration of the set."""

    spec: SetSpec


@dataclass(frozen=True, repr=False)
class ZetaRep(Term):
    """zeta + a0 + zeta + a1 + ... for the increasing enumeration of the set."""

    spec: SetSpec


@dataclass(frozen=True, repr=False)
class ZetaPower(Term):
    """Finite-support functions exp -> zeta, compared at the largest disagreement."""

    exp: Ordinal

    def __post_init__(self) -> None:
        if self.exp.is_zero:
            raise ValueError("zeta power exponent must be >= 1")


@dataclass(frozen=True, repr=False)
class Rev(Term):
    inner: Term


OMEGA = Omega()
OMEGA_STAR = OmegaStar()
ZETA = Zeta()
ETA = Eta()

_BASE_RANK = {Finite: 0, Omega: 1, OmegaStar: 2, Zeta: 3, Eta: 4, ZetaPower: 5,
              Sum: 6, Product: 7, Shuffle: 8, EtaRep: 9, ZetaRep: 10, Rev: 11}


def term_key(t: Term):
    """Canonical sort key; total on terms, used for deterministic member order."""
    r = _BASE_RANK[type(t)]
    if isinstance(t, Finite):
        return (r, t.size)
    if isinstance(t, (Omega, OmegaStar, Zeta, Eta)):
        return (r,)
    if isinstance(t, ZetaPower):
        return (r, t.exp.terms)
    if isinstance(t, Sum):
        return (r, tuple(term_key(p) for p in t.parts))
    if isinstance(t, Product):
        return (r, term_key(t.left), term_key(t.right))
    if isinstance(t, Shuffle):
        return (r, tuple(term_key(m) for m in t.members))
    if isinstance(t, (EtaRep, ZetaRep)):
        s = t.spec
        tag = (0, s.values) if isinstance(s, ExplicitSet) else (1, (s.start, s.step))
        return (r, tag)
    if isinstance(t, Rev):
        return (r, term_key(t.inner))
    raise TypeError(f"not a term: {t!r}")


def shuffle_of(members) -> Shuffle:
    """Shuffle with members normalized, deduplicated and canonically ordered."""
    seen = []
    for m in members:
        nm = normalize(m)
        if nm not in seen:
            seen.append(nm)
    return Shuffle(tuple(sorted(seen, key=term_key)))


def shuffle_member_ok(m: Term) -> bool:
    """Members must live where isomorphism is decidable: nonempty finite orders and base orders."""
    return (isinstance(m, Finite) and m.size >= 1) or isinstance(m, (Omega, OmegaStar, Zeta, Eta))


# --- normalization -----------------------------------------------------------


def normalize(t: Term) -> Term:
    """Flatten sums, merge adjacent finite summands, drop empty parts, push Rev down.

    Idempotent.  Rev survives only over a representation term with an
    infinite set, where no constructor for the reversal exists.
    """
    if isinstance(t, (Omega, OmegaStar, Zeta, Eta, Finite)):
        return t
    if isinstance(t, ZetaPower):
        return ZETA if t.exp == 1 else t
    if isinstance(t, Sum):
        flat: list[Term] = []
        for p in t.parts:
            np = normalize(p)
            if isinstance(np, Sum):
                flat.extend(np.parts)
            else:
                flat.append(np)
        merged: list[Term] = []
        for p in flat:
            if isinstance(p, Finite):
                if p.size == 0:
                    continue
                if merged and isinstance(merged[-1], Finite):
                    merged[-1] = Finite(merged[-1].size + p.size)
                    continue
            merged.append(p)
        if not merged:
            return Finite(0)
        return merged[0] if len(merged) == 1 else Sum(tuple(merged))
    if isinstance(t, Product):
        left = normalize(t.left)
        right = normalize(t.right)
        if isinstance(left, Finite) and left.size == 0:
            return Finite(0)
        if isinstance(right, Finite) and right.size == 0:
            return Finite(0)
        if isinstance(left, Finite) and isinstance(right, Finite):
            return Finite(left.size * right.size)
        if isinstance(left, Finite) and left.size == 1:
            return right
        if isinstance(right, Finite) and right.size == 1:
            return left
        return Product(left, right)
    if isinstance(t, Shuffle):
        return shuffle_of(t.members)
    if isinstance(t, (EtaRep, ZetaRep)):
        return t
    if isinstance(t, Rev):
        return _normalize_rev(normalize(t.inner))
    raise TypeError(f"not a term: {t!r}")


def _normalize_rev(inner: Term) -> Term:
    if isinstance(inner, Finite):
        return inner
    if isinstance(inner, Omega):
        return OMEGA_STAR
    if isinstance(inner, OmegaStar):
        return OMEGA
    if isinstance(inner, (Zeta, Eta)):
        return inner
    if isinstance(inner, ZetaPower):
        # negating every coordinate is an anti-isomorphism, so zeta^b is self-reverse
        return inner
    if isinstance(inner, Sum):
        return normalize(Sum(tuple(Rev(p) for p in reversed(inner.parts))))
    if isinstance(inner, Product):
        return normalize(Product(Rev(inner.left), Rev(inner.right)))
    if isinstance(inner, Shuffle):
        return normalize(Shuffle(tuple(Rev(m) for m in inner.members)))
    if isinstance(inner, (EtaRep, ZetaRep)):
        spec = inner.spec
        if isinstance(spec, ExplicitSet):
            filler: Term = ETA if isinstance(inner, EtaRep) else ZETA
            parts: list[Term] = [filler]
            for v in reversed(spec.values):
                parts.extend([Finite(v), filler])
            return normalize(Sum(tuple(parts)))
        # reversal of an infinite representation leaves the constructor fragment
        return Rev(inner)
    if isinstance(inner, Rev):
        return inner.inner
    raise TypeError(f"not a term: {inner!r}")


# --- basic structural measures -----------------------------------------------


def cardinality(t: Term) -> Card:
    if isinstance(t, Finite):
        return t.size
    if isinstance(t, (Omega, OmegaStar, Zeta, Eta, EtaRep, ZetaRep, ZetaPower)):
        return INFINITE
    if isinstance(t, Sum):
        cards = [cardinality(p) for p in t.parts]
        if any(c is INFINITE for c in cards):
            return INFINITE
        return sum(cards)  # type: ignore[arg-type]
    if isinstance(t, Product):
        cl, cr = cardinality(t.left), cardinality(t.right)
        if cl == 0 or cr == 0:
            return 0
        if cl is INFINITE or cr is INFINITE:
            return INFINITE
        return cl * cr  # type: ignore[operator]
    if isinstance(t, Shuffle):
        return INFINITE
    if isinstance(t, Rev):
        return cardinality(t.inner)
    raise TypeError(f"not a term: {t!r}")


def is_empty(t: Term) -> bool:
    return cardinality(t) == 0


def has_least(t: Term) -> bool:
    """Whether the order has a least element (empty orders report False)."""
    if isinstance(t, Finite):
        return t.size >= 1
    if isinstance(t, Omega):
        return True
    if isinstance(t, (OmegaStar, Zeta, Eta, Shuffle, EtaRep, ZetaRep, ZetaPower)):
        return False
    if isinstance(t, Sum):
        for p in t.parts:
            if not is_empty(p):
                return has_least(p)
        return False
    if isinstance(t, Product):
        if is_empty(t):
            return False
        return has_least(t.left) and has_least(t.right)
    if isinstance(t, Rev):
        return has_greatest(t.inner)
    raise TypeError(f"not a term: {t!r}")


def has_greatest(t: Term) -> bool:
    if isinstance(t, Finite):
        return t.size >= 1
    if isinstance(t, OmegaStar):
        return True
    if isinstance(t, (Omega, Zeta, Eta, Shuffle, EtaRep, ZetaRep, ZetaPower)):
        return False
    if isinstance(t, Sum):
        for p in reversed(t.parts):
            if not is_empty(p):
                return has_greatest(p)
        return False
    if isinstance(t, Product):
        if is_empty(t):
            return False
        return has_greatest(t.left) and has_greatest(t.right)
    if isinstance(t, Rev):
        return has_least(t.inner)
    raise TypeError(f"not a term: {t!r}")


def ill_founded(t: Term) -> bool:
    """Whether the order embeds an infinite descending sequence."""
    if isinstance(t, (Finite, Omega)):
        return False
    if isinstance(t, (OmegaStar, Zeta, Eta, Shuffle, EtaRep, ZetaRep, ZetaPower)):
        return not is_empty(t)
    if isinstance(t, Sum):
        return any(ill_founded(p) for p in t.parts)
    if isinstance(t, Product):
        if is_empty(t):
            return False
        return ill_founded(t.left) or ill_founded(t.right)
    if isinstance(t, Rev):
        return co_ill_founded(t.inner)
    raise TypeError(f"not a term: {t!r}")


def co_ill_founded(t: Term) -> bool:
    """Whether the order embeds an infinite ascending sequence."""
    if isinstance(t, (Finite, OmegaStar)):
        return False
    if isinstance(t, (Omega, Zeta, Eta, Shuffle, EtaRep, ZetaRep, ZetaPower)):
        return not is_empty(t)
    if isinstance(t, Sum):
        return any(co_ill_founded(p) for p in t.parts)
    if isinstance(t, Product):
        if is_empty(t):
            return False
        return co_ill_founded(t.left) or co_ill_founded(t.right)
    if isinstance(t, Rev):
        return ill_founded(t.inner)
    raise TypeError(f"not a term: {t!r}")


def contains_rev_rep(t: Term) -> bool:
    """Detects the one normal form the constructors cannot express directly."""
    if isinstance(t, Rev):
        return True
    if isinstance(t, Sum):
        return any(contains_rev_rep(p) for p in t.parts)
    if isinstance(t, Product):
        return contains_rev_rep(t.left) or contains_rev_rep(t.right)
    if isinstance(t, Shuffle):
        return any(contains_rev_rep(m) for m in t.members)
    return False


def to_json(t: Term):
    if isinstance(t, Finite):
        return {"op": "finite", "size": t.size}
    if isinstance(t, Omega):
        return {"op": "omega"}
    if isinstance(t, OmegaStar):
        return {"op": "omega*"}
    if isinstance(t, Zeta):
        return {"op": "zeta"}
    if isinstance(t, Eta):
        return {"op": "eta"}
    if isinstance(t, Sum):
        return {"op": "sum", "parts": [to_json(p) for p in t.parts]}
    if isinstance(t, Product):
        return {"op": "product", "left": to_json(t.left), "right": to_json(t.right)}
    if isinstance(t, Shuffle):
        return {"op": "shuffle", "members": [to_json(m) for m in t.members]}
    if isinstance(t, EtaRep):
        return {"op": "etarep", "set": t.spec.to_json()}
    if isinstance(t, ZetaRep):
        return {"op": "zetarep", "set": t.spec.to_json()}
    if isinstance(t, ZetaPower):
        return {"op": "zeta^", "exp": render_ordinal(t.exp)}
    if isinstance(t, Rev):
        return {"op": "rev", "inner": to_json(t.inner)}
    raise TypeError(f"not a term: {t!r}")


def card_json(c: Card):
    return "infinite" if c is INFINITE else c
