"""Finite-stage presentations of terms on an initial segment of the naturals.

Element n of a presentation is the n-th address produced by a fixed
deterministic schedule, so extending never changes an existing comparison
and two runs of the same schedule agree step for step.

Schedules per constructor:

  Eta       a FIFO queue of gaps; each cycle fills the oldest gap (end gaps
            by stepping one unit outward, interior gaps at the midpoint)
            and enqueues the two sub-gaps, so an adjacent pair existing at
            stage s is split by stage s + (number of pending gaps)
  Shuffle   the same gap discipline on a skeleton of block positions, but
            filling a gap spawns one block of every member class at once;
            one further cycle step advances a single older block, rotating
  Sum       round-robin over the parts, skipping exhausted ones
  Product   dovetailing along anti-diagonals of the two child streams
  Rep       one new segment is activated per cycle, then every active
            segment (filler and block alike) contributes one element
  ZetaPower batched by a bound k: supports inside the first k exponents
            of a fixed ordinal stream, values in [-k..k]
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, Iterator

from .ordinals import Ordinal, render_ordinal
from .terms import (ArithmeticSet, EtaRep, Eta, Finite, Omega, OmegaStar,
                    Product, Rev, Shuffle, Sum, Term, UnsupportedTermError,
                    Zeta, ZetaPower, ZetaRep, cardinality, normalize)
from .intervals import less_at


def address_stream(t: Term) -> Iterator:
    """Deterministic enumeration of every address of the term, once each."""
    if isinstance(t, Finite):
        return iter(range(t.size))
    if isinstance(t, Omega):
        return itertools.count()
    if isinstance(t, OmegaStar):
        return itertools.count()
    if isinstance(t, Zeta):
        return _zeta_stream()
    if isinstance(t, Eta):
        return _eta_stream()
    if isinstance(t, Sum):
        return _sum_stream(t)
    if isinstance(t, Product):
        return _product_stream(t)
    if isinstance(t, Shuffle):
        return _shuffle_stream(t)
    if isinstance(t, (EtaRep, ZetaRep)):
        return _rep_stream(t)
    if isinstance(t, ZetaPower):
        return _zeta_power_stream(t)
    if isinstance(t, Rev):
        raise UnsupportedTermError(
            "no enumeration schedule for the reversal of an infinite representation")
    raise TypeError(f"not a term: {t!r}")


def _zeta_stream() -> Iterator[int]:
    yield 0
    for k in itertools.count(1):
        yield k
        yield -k


def _eta_stream() -> Iterator[Fraction]:
    gaps: list[tuple] = [(None, None)]
    while True:
        a, b = gaps.pop(0)
        if a is None and b is None:
            x = Fraction(0)
        elif a is None:
            x = b - 1
        elif b is None:
            x = a + 1
        else:
            x = (a + b) / 2
        yield x
        gaps.append((a, x))
        gaps.append((x, b))


def _sum_stream(t: Sum) -> Iterator:
    streams = [(i, address_stream(p)) for i, p in enumerate(t.parts)
               if cardinality(p) != 0]
    while streams:
        alive = []
        for i, s in streams:
            try:
                yield (i, next(s))
                alive.append((i, s))
            except StopIteration:
                pass
        streams = alive


def _product_stream(t: Product) -> Iterator:
    ls = address_stream(t.left)
    rs = address_stream(t.right)
    lbuf: list = []
    rbuf: list = []
    l_done = r_done = False
    for d in itertools.count():
        while not l_done and len(lbuf) <= d:
            try:
                lbuf.append(next(ls))
            except StopIteration:
                l_done = True
        while not r_done and len(rbuf) <= d:
            try:
                rbuf.append(next(rs))
            except StopIteration:
                r_done = True
        emitted = False
        for k in range(d + 1):
            if k < len(lbuf) and d - k < len(rbuf):
                yield (lbuf[k], rbuf[d - k])
                emitted = True
        if not emitted and l_done and r_done:
            return


def _gap_positions(a, b, k: int) -> list[Fraction]:
    if a is None and b is None:
        return [Fraction(i) for i in range(k)]
    if a is None:
        return [b - k + i for i in range(k)]
    if b is None:
        return [a + 1 + i for i in range(k)]
    return [a + (b - a) * Fraction(i, k + 1) for i in range(1, k + 1)]


def _shuffle_stream(t: Shuffle) -> Iterator:
    k = len(t.members)
    gaps: list[tuple] = [(None, None)]
    live: list[tuple] = []   # (position, member index, its address stream)
    fill_at = 0
    while True:
        a, b = gaps.pop(0)
        ps = _gap_positions(a, b, k)
        for pos, m in zip(ps, range(k)):
            s = address_stream(t.members[m])
            yield (pos, m, next(s))
            live.append((pos, m, s))
        for lo, hi in zip([a] + ps, ps + [b]):
            gaps.append((lo, hi))
        # one fill step: advance a single older block
        while live:
            fill_at %= len(live)
            pos, m, s = live[fill_at]
            try:
                yield (pos, m, next(s))
                fill_at += 1
                break
            except StopIteration:
                live.pop(fill_at)


def _rep_segment(t: EtaRep | ZetaRep, seg: int) -> Term | None:
    spec = t.spec
    if isinstance(spec, ArithmeticSet):
        limit = None
    else:
        limit = 2 * len(spec.values)
    if limit is not None and seg > limit:
        return None
    if seg % 2 == 0:
        return Eta() if isinstance(t, EtaRep) else Zeta()
    return Finite(spec.nth((seg - 1) // 2))


def _rep_stream(t: EtaRep | ZetaRep) -> Iterator:
    active: list[tuple] = []
    for cycle in itertools.count():
        seg = _rep_segment(t, cycle)
        if seg is not None:
            active.append((cycle, address_stream(seg)))
        for si, s in list(active):
            try:
                yield (si, next(s))
            except StopIteration:
                active.remove((si, s))


def ordinals_below(beta: Ordinal) -> Iterator[Ordinal]:
    """All ordinals strictly below beta, deterministically, each once."""
    if beta.is_zero:
        return
    deg = beta.terms[0][0]
    if deg == 0:
        for i in range(beta.terms[0][1]):
            yield Ordinal.from_int(i)
        return
    seen: set = set()
    for s in itertools.count(1):
        batch = []
        for coeffs in itertools.product(range(s + 1), repeat=deg + 1):
            o = Ordinal(tuple((e, c) for e, c in
                              zip(range(deg, -1, -1), coeffs) if c))
            if o < beta and o.terms not in seen:
                batch.append(o)
        batch.sort()
        for o in batch:
            seen.add(o.terms)
            yield o


def _zeta_power_stream(t: ZetaPower) -> Iterator:
    exps = ordinals_below(t.exp)
    positions: list[Ordinal] = []
    exps_done = False
    for k in itertools.count(1):
        while not exps_done and len(positions) < k:
            try:
                positions.append(next(exps))
            except StopIteration:
                exps_done = True
        p = len(positions)
        batch = []
        for vals in itertools.product(range(-k, k + 1), repeat=p):
            uses_new = (any(abs(v) == k for v in vals)
                        or (p == k and vals[p - 1] != 0))
            if k == 1 and not any(vals):
                uses_new = True     # the empty map belongs to the first batch
            if not uses_new:
                continue
            addr = tuple(sorted(((e, v) for e, v in zip(positions, vals) if v),
                                key=lambda ev: ev[0].terms, reverse=True))
            batch.append(addr)
        batch.sort(key=lambda a: tuple((e.terms, v) for e, v in a))
        yield from batch


# --- presentations -----------------------------------------------------------


class Presentation:
    """A finite stage of the enumeration, comparable by element id.

    A custom address iterator replaces the default schedule; it must be
    deterministic and yield each address of the term at most once.
    """

    def __init__(self, term: Term, stream: Iterator | None = None):
        self.term = normalize(term)
        self.addrs: list = []
        self._stream = address_stream(self.term) if stream is None else stream
        self._exhausted = False
        self.distinguished: "DenseSetSpec | None" = None

    @classmethod
    def build(cls, term: Term, stage: int = 0) -> "Presentation":
        p = cls(term)
        p.extend(stage)
        return p

    def extend(self, steps: int) -> "Presentation":
        for _ in range(steps):
            if self._exhausted:
                break
            try:
                self.addrs.append(next(self._stream))
            except StopIteration:
                self._exhausted = True
                break
        return self

    @property
    def size(self) -> int:
        return len(self.addrs)

    def addr(self, i: int):
        return self.addrs[i]

    def less(self, i: int, j: int) -> bool:
        return less_at(self.term, self.addrs[i], self.addrs[j])

    def compare(self, i: int, j: int) -> int:
        if i == j or self.addrs[i] == self.addrs[j]:
            return 0
        return -1 if self.less(i, j) else 1

    def sorted_ids(self) -> list[int]:
        return sorted(range(self.size), key=cmp_to_key(self.compare))

    def rank_array(self) -> list[int]:
        """rank_array()[i] = how many enumerated elements sit below element i."""
        ranks = [0] * self.size
        for pos, i in enumerate(self.sorted_ids()):
            ranks[i] = pos
        return ranks

    def least_id(self) -> int | None:
        ids = self.sorted_ids()
        return ids[0] if ids else None

    def greatest_id(self) -> int | None:
        ids = self.sorted_ids()
        return ids[-1] if ids else None

    def pairs_json(self) -> list:
        out = []
        for i in range(self.size):
            for j in range(i + 1, self.size):
                out.append([i, j, "<" if self.less(i, j) else ">"])
        return out

    def to_json(self) -> dict:
        return {
            "n": self.size,
            "pairs": self.pairs_json(),
            "addresses": [render_addr(a) for a in self.addrs],
        }


def render_addr(a) -> str:
    if isinstance(a, bool):
        raise TypeError("not an address")
    if isinstance(a, int):
        return str(a)
    if isinstance(a, Fraction):
        return str(a)
    if isinstance(a, Ordinal):
        return render_ordinal(a)
    if isinstance(a, tuple):
        return "(" + ",".join(render_addr(x) for x in a) + ")"
    raise TypeError(f"not an address: {a!r}")


# --- distinguished dense sets ------------------------------------------------


@dataclass
class DenseSetSpec:
    """A decidable set of naturals with its exact finite-stage densities."""
    membership: Callable[[int], bool]
    name: str = "D"

    def density_profile(self, n: int) -> Fraction:
        return density_of(self, n)

    def members_upto(self, n: int) -> list[int]:
        return [i for i in range(n + 1) if self.membership(i)]

    def to_json(self, n: int) -> dict:
        rho = self.density_profile(n)
        return {"name": self.name, "members": self.members_upto(n),
                "rho": [str(rho), float(rho)]}


def density_of(d: DenseSetSpec, n: int) -> Fraction:
    """|S intersect {0..n}| / (n+1), exactly."""
    hits = sum(1 for i in range(n + 1) if d.membership(i))
    return Fraction(hits, n + 1)


def _is_square(n: int) -> bool:
    r = int(n ** 0.5)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r * r == n


def non_squares() -> DenseSetSpec:
    return DenseSetSpec(lambda n: not _is_square(n), name="non-squares")


def all_naturals() -> DenseSetSpec:
    return DenseSetSpec(lambda n: True, name="all")


def cofinite_complement(excluded: frozenset[int]) -> DenseSetSpec:
    return DenseSetSpec(lambda n: n not in excluded, name="cofinite")


def build(term: Term, stage: int = 0) -> Presentation:
    return Presentation.build(term, stage)
