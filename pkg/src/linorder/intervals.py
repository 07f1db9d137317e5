"""Symbolic queries on (term, address) pairs.

Addresses name points of the limit structure a term denotes, using one
convention per constructor:

  Finite/Omega   int i >= 0, the i-th element from the bottom
  OmegaStar      int i >= 0, the i-th element from the top
  Zeta           int k, order as in the integers
  Eta            Fraction
  Sum            (part_index, sub)
  Product        (left_sub, right_sub), right coordinate dominant
  Shuffle        (position: Fraction, member_index, sub)
  EtaRep/ZetaRep (segment_index, sub); even segments are filler copies of
                 eta resp. zeta, odd segment 2i+1 is the i-th block
  ZetaPower      tuple of (exponent: Ordinal, value != 0), sorted by
                 exponent descending; compared at the largest disagreement

Every query here is decided exactly from the term, never by sampling.
Reversals of infinite representations have no address convention and are
rejected.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .ordinals import Ordinal, cnf_left_subtract
from .terms import (Card, EtaRep, Eta, Finite, INFINITE, Omega, OmegaStar,
                    PreconditionError, Product, Rev, Shuffle, Sum, Term,
                    UnsupportedTermError, Zeta, ZetaPower, ZetaRep,
                    ArithmeticSet, add_card, cardinality, mul_card)
from .condense import (W, WSTAR, Z, BlockType, block_view, mergeable,
                       merged_type)

_ZERO = Ordinal.from_int(0)
_ONE = Ordinal.from_int(1)


def _reject_rev(t: Term) -> None:
    if isinstance(t, Rev):
        raise UnsupportedTermError(
            "no address convention for the reversal of an infinite representation")


# --- order ------------------------------------------------------------------


def less_at(t: Term, a, b) -> bool:
    """Strict order between two addresses of the same term."""
    _reject_rev(t)
    if isinstance(t, (Finite, Omega, Zeta)):
        return a < b
    if isinstance(t, OmegaStar):
        return a > b
    if isinstance(t, Eta):
        return a < b
    if isinstance(t, Sum):
        (i, sa), (j, sb) = a, b
        if i != j:
            return i < j
        return less_at(t.parts[i], sa, sb)
    if isinstance(t, Product):
        (la, ra), (lb, rb) = a, b
        if ra != rb:
            return less_at(t.right, ra, rb)
        return less_at(t.left, la, lb)
    if isinstance(t, Shuffle):
        (pa, ma, sa), (pb, mb, sb) = a, b
        if pa != pb:
            return pa < pb
        return less_at(t.members[ma], sa, sb)
    if isinstance(t, (EtaRep, ZetaRep)):
        (sa_i, sa), (sb_i, sb) = a, b
        if sa_i != sb_i:
            return sa_i < sb_i
        return less_at(_segment_term(t, sa_i), sa, sb)
    if isinstance(t, ZetaPower):
        return _zp_less(a, b)
    raise TypeError(f"not a term: {t!r}")


def _segment_term(t: EtaRep | ZetaRep, seg: int) -> Term:
    if seg % 2 == 0:
        return Eta() if isinstance(t, EtaRep) else Zeta()
    return Finite(t.spec.nth((seg - 1) // 2))


def _zp_less(a, b) -> bool:
    ia = ib = 0
    while ia < len(a) or ib < len(b):
        ea = a[ia][0] if ia < len(a) else None
        eb = b[ib][0] if ib < len(b) else None
        if ea is not None and (eb is None or eb < ea):
            return a[ia][1] < 0        # b is zero at the larger exponent ea
        if eb is not None and (ea is None or ea < eb):
            return b[ib][1] > 0
        va, vb = a[ia][1], b[ib][1]
        if va != vb:
            return va < vb
        ia += 1
        ib += 1
    return False


# --- interval cardinalities --------------------------------------------------


def interval_card(t: Term, a=None, b=None) -> Card:
    """Number of elements strictly inside (a, b); None bounds are infinities."""
    if a is None and b is None:
        return cardinality(t)
    if a is None:
        return _card_below(t, b)
    if b is None:
        return _card_above(t, a)
    if a == b:
        return 0
    if not less_at(t, a, b):
        raise PreconditionError("interval bounds out of order")
    return _card_between(t, a, b)


def exists_below(t: Term, a) -> bool:
    return interval_card(t, None, a) != 0


def exists_above(t: Term, a) -> bool:
    return interval_card(t, a, None) != 0


def _card_below(t: Term, b) -> Card:
    _reject_rev(t)
    if isinstance(t, (Finite, Omega)):
        return b
    if isinstance(t, (OmegaStar, Zeta, Eta, Shuffle, EtaRep, ZetaRep, ZetaPower)):
        # below any point: the top-indexed tail, the integers, a dense
        # unbounded set, or a filler segment with no least element
        return INFINITE
    if isinstance(t, Sum):
        j, sb = b
        total: Card = _card_below(t.parts[j], sb)
        for k in range(j):
            total = add_card(total, cardinality(t.parts[k]))
        return total
    if isinstance(t, Product):
        lb, rb = b
        return add_card(_card_below(t.left, lb),
                        mul_card(_card_below(t.right, rb), cardinality(t.left)))
    raise TypeError(f"not a term: {t!r}")


def _card_above(t: Term, a) -> Card:
    _reject_rev(t)
    if isinstance(t, Finite):
        return t.size - 1 - a
    if isinstance(t, OmegaStar):
        return a
    if isinstance(t, (Omega, Zeta, Eta, Shuffle, EtaRep, ZetaRep, ZetaPower)):
        # EtaRep/ZetaRep end with filler (or continue forever), so every
        # point has a filler tail above it
        return INFINITE
    if isinstance(t, Sum):
        i, sa = a
        total: Card = _card_above(t.parts[i], sa)
        for k in range(i + 1, len(t.parts)):
            total = add_card(total, cardinality(t.parts[k]))
        return total
    if isinstance(t, Product):
        la, ra = a
        return add_card(_card_above(t.left, la),
                        mul_card(_card_above(t.right, ra), cardinality(t.left)))
    raise TypeError(f"not a term: {t!r}")


def _card_between(t: Term, a, b) -> Card:
    _reject_rev(t)
    if isinstance(t, (Finite, Omega)):
        return b - a - 1
    if isinstance(t, OmegaStar):
        return a - b - 1
    if isinstance(t, Zeta):
        return b - a - 1
    if isinstance(t, Eta):
        return INFINITE
    if isinstance(t, Sum):
        (i, sa), (j, sb) = a, b
        if i == j:
            return _card_between(t.parts[i], sa, sb)
        total: Card = add_card(_card_above(t.parts[i], sa),
                               _card_below(t.parts[j], sb))
        for k in range(i + 1, j):
            total = add_card(total, cardinality(t.parts[k]))
        return total
    if isinstance(t, Product):
        (la, ra), (lb, rb) = a, b
        if ra == rb:
            return _card_between(t.left, la, lb)
        mid = mul_card(_card_between(t.right, ra, rb), cardinality(t.left))
        return add_card(add_card(_card_above(t.left, la), mid),
                        _card_below(t.left, lb))
    if isinstance(t, Shuffle):
        (pa, ma, sa), (pb, mb, sb) = a, b
        if pa == pb:
            return _card_between(t.members[ma], sa, sb)
        return INFINITE
    if isinstance(t, (EtaRep, ZetaRep)):
        (si, sa), (sj, sb) = a, b
        if si == sj:
            return _card_between(_segment_term(t, si), sa, sb)
        # crossing a segment boundary always spans an unbounded filler side
        return INFINITE
    if isinstance(t, ZetaPower):
        diff_exps = _zp_diff_exps(a, b)
        if diff_exps == [_ZERO]:
            return abs(_zp_value(a, _ZERO) - _zp_value(b, _ZERO)) - 1
        return INFINITE
    raise TypeError(f"not a term: {t!r}")


def _zp_value(addr, exp: Ordinal) -> int:
    for e, v in addr:
        if e == exp:
            return v
    return 0


def _zp_strip(addr, beta: Ordinal):
    """Coordinates with exponent >= beta, i.e. the address modulo the
    first beta positions."""
    return tuple((e, v) for e, v in addr if not e < beta)


def _zp_diff_exps(a, b) -> list[Ordinal]:
    exps = {e for e, _ in a} | {e for e, _ in b}
    return [e for e in exps if _zp_value(a, e) != _zp_value(b, e)]


# --- successors, endpoints, canonical points ---------------------------------


def succ_of(t: Term, a):
    """Address of the immediate successor, or None."""
    _reject_rev(t)
    if isinstance(t, Finite):
        return a + 1 if a + 1 < t.size else None
    if isinstance(t, Omega):
        return a + 1
    if isinstance(t, OmegaStar):
        return a - 1 if a >= 1 else None
    if isinstance(t, Zeta):
        return a + 1
    if isinstance(t, Eta):
        return None
    if isinstance(t, Sum):
        i, sa = a
        s = succ_of(t.parts[i], sa)
        if s is not None:
            return (i, s)
        # crossing parts takes standing at the part's top, not merely
        # having no successor inside it (dense parts have neither)
        if sa != greatest_addr(t.parts[i]):
            return None
        for j in range(i + 1, len(t.parts)):
            if cardinality(t.parts[j]) != 0:
                nxt = least_addr(t.parts[j])
                return None if nxt is None else (j, nxt)
        return None
    if isinstance(t, Product):
        la, ra = a
        s = succ_of(t.left, la)
        if s is not None:
            return (s, ra)
        if la != greatest_addr(t.left):
            return None
        rl = least_addr(t.left)
        rs = succ_of(t.right, ra)
        if rl is None or rs is None:
            return None
        return (rl, rs)
    if isinstance(t, Shuffle):
        pos, m, sa = a
        s = succ_of(t.members[m], sa)
        return None if s is None else (pos, m, s)
    if isinstance(t, (EtaRep, ZetaRep)):
        si, sa = a
        s = succ_of(_segment_term(t, si), sa)
        # a block top has a filler above it, which has no least element
        return None if s is None else (si, s)
    if isinstance(t, ZetaPower):
        return _zp_set(a, _ZERO, _zp_value(a, _ZERO) + 1)
    raise TypeError(f"not a term: {t!r}")


def pred_of(t: Term, a):
    _reject_rev(t)
    if isinstance(t, Finite):
        return a - 1 if a >= 1 else None
    if isinstance(t, Omega):
        return a - 1 if a >= 1 else None
    if isinstance(t, OmegaStar):
        return a + 1
    if isinstance(t, Zeta):
        return a - 1
    if isinstance(t, Eta):
        return None
    if isinstance(t, Sum):
        i, sa = a
        p = pred_of(t.parts[i], sa)
        if p is not None:
            return (i, p)
        if sa != least_addr(t.parts[i]):
            return None
        for j in range(i - 1, -1, -1):
            if cardinality(t.parts[j]) != 0:
                prv = greatest_addr(t.parts[j])
                return None if prv is None else (j, prv)
        return None
    if isinstance(t, Product):
        la, ra = a
        p = pred_of(t.left, la)
        if p is not None:
            return (p, ra)
        if la != least_addr(t.left):
            return None
        lg = greatest_addr(t.left)
        rp = pred_of(t.right, ra)
        if lg is None or rp is None:
            return None
        return (lg, rp)
    if isinstance(t, Shuffle):
        pos, m, sa = a
        p = pred_of(t.members[m], sa)
        return None if p is None else (pos, m, p)
    if isinstance(t, (EtaRep, ZetaRep)):
        si, sa = a
        p = pred_of(_segment_term(t, si), sa)
        return None if p is None else (si, p)
    if isinstance(t, ZetaPower):
        return _zp_set(a, _ZERO, _zp_value(a, _ZERO) - 1)
    raise TypeError(f"not a term: {t!r}")


def _zp_set(addr, exp: Ordinal, val: int):
    entries = [(e, v) for e, v in addr if e != exp]
    if val != 0:
        entries.append((exp, val))
    entries.sort(key=lambda ev: ev[0], reverse=True)
    return tuple(entries)


def least_addr(t: Term):
    _reject_rev(t)
    if isinstance(t, Finite):
        return 0 if t.size >= 1 else None
    if isinstance(t, Omega):
        return 0
    if isinstance(t, Sum):
        for i, p in enumerate(t.parts):
            if cardinality(p) != 0:
                sub = least_addr(p)
                return None if sub is None else (i, sub)
        return None
    if isinstance(t, Product):
        ll, rl = least_addr(t.left), least_addr(t.right)
        if ll is None or rl is None:
            return None
        return (ll, rl)
    return None


def greatest_addr(t: Term):
    _reject_rev(t)
    if isinstance(t, Finite):
        return t.size - 1 if t.size >= 1 else None
    if isinstance(t, OmegaStar):
        return 0
    if isinstance(t, Sum):
        for i in range(len(t.parts) - 1, -1, -1):
            if cardinality(t.parts[i]) != 0:
                sub = greatest_addr(t.parts[i])
                return None if sub is None else (i, sub)
        return None
    if isinstance(t, Product):
        lg, rg = greatest_addr(t.left), greatest_addr(t.right)
        if lg is None or rg is None:
            return None
        return (lg, rg)
    return None


def canonical_point(t: Term):
    """A fixed valid address in a nonempty term."""
    _reject_rev(t)
    if cardinality(t) == 0:
        raise PreconditionError("empty order has no points")
    if isinstance(t, (Finite, Omega, OmegaStar)):
        return 0
    if isinstance(t, Zeta):
        return 0
    if isinstance(t, Eta):
        return Fraction(0)
    if isinstance(t, Sum):
        for i, p in enumerate(t.parts):
            if cardinality(p) != 0:
                return (i, canonical_point(p))
    if isinstance(t, Product):
        return (canonical_point(t.left), canonical_point(t.right))
    if isinstance(t, Shuffle):
        return (Fraction(0), 0, canonical_point(t.members[0]))
    if isinstance(t, EtaRep):
        return (0, Fraction(0))
    if isinstance(t, ZetaRep):
        return (0, 0)
    if isinstance(t, ZetaPower):
        return ()
    raise TypeError(f"not a term: {t!r}")


def descending_chain_addr(t: Term, j: int):
    """The j-th point of a fixed strictly descending sequence."""
    _reject_rev(t)
    if isinstance(t, OmegaStar):
        return j
    if isinstance(t, Zeta):
        return -j
    if isinstance(t, Eta):
        return Fraction(-j)
    if isinstance(t, Sum):
        from .terms import ill_founded
        for i, p in enumerate(t.parts):
            if ill_founded(p):
                return (i, descending_chain_addr(p, j))
    if isinstance(t, Product):
        from .terms import ill_founded
        if ill_founded(t.right):
            return (canonical_point(t.left), descending_chain_addr(t.right, j))
        if ill_founded(t.left):
            return (descending_chain_addr(t.left, j), canonical_point(t.right))
    if isinstance(t, Shuffle):
        n = len(t.members)
        return (Fraction(-j * n), 0, canonical_point(t.members[0]))
    if isinstance(t, EtaRep):
        return (0, Fraction(-j))
    if isinstance(t, ZetaRep):
        return (0, -j)
    if isinstance(t, ZetaPower):
        return () if j == 0 else ((_ZERO, -j),)
    raise PreconditionError("no descending sequence in a well order")


def ascending_chain_addr(t: Term, j: int):
    """The j-th point of a fixed strictly ascending sequence."""
    _reject_rev(t)
    if isinstance(t, Omega):
        return j
    if isinstance(t, Zeta):
        return j
    if isinstance(t, Eta):
        return Fraction(j)
    if isinstance(t, Sum):
        from .terms import co_ill_founded
        for i in range(len(t.parts) - 1, -1, -1):
            if co_ill_founded(t.parts[i]):
                return (i, ascending_chain_addr(t.parts[i], j))
    if isinstance(t, Product):
        from .terms import co_ill_founded
        if co_ill_founded(t.right):
            return (canonical_point(t.left), ascending_chain_addr(t.right, j))
        if co_ill_founded(t.left):
            return (ascending_chain_addr(t.left, j), canonical_point(t.right))
    if isinstance(t, Shuffle):
        n = len(t.members)
        return (Fraction(j * n + len(t.members) - 1), len(t.members) - 1,
                canonical_point(t.members[-1]))
    if isinstance(t, EtaRep):
        si = _last_filler_seg(t)
        return (si, Fraction(j))
    if isinstance(t, ZetaRep):
        return (_last_filler_seg(t), j)
    if isinstance(t, ZetaPower):
        return () if j == 0 else ((_ZERO, j),)
    raise PreconditionError("no ascending sequence in a reverse well order")


def _last_filler_seg(t: EtaRep | ZetaRep) -> int:
    spec = t.spec
    if isinstance(spec, ArithmeticSet):
        return 0
    return 2 * len(spec.values)


# --- block identification ----------------------------------------------------


class BlockInfo(NamedTuple):
    key: tuple
    type: BlockType
    is_first: bool     # the term's first block (least point of the quotient)
    is_last: bool


def block_of(t: Term, addr) -> BlockInfo:
    _reject_rev(t)
    if isinstance(t, Finite):
        return BlockInfo(("all",), ("fin", t.size), True, True)
    if isinstance(t, Omega):
        return BlockInfo(("all",), W, True, True)
    if isinstance(t, OmegaStar):
        return BlockInfo(("all",), WSTAR, True, True)
    if isinstance(t, Zeta):
        return BlockInfo(("all",), Z, True, True)
    if isinstance(t, Eta):
        return BlockInfo(("pt", addr), ("fin", 1), False, False)
    if isinstance(t, Sum):
        return _sum_block(t, addr)
    if isinstance(t, Product):
        return _product_block(t, addr)
    if isinstance(t, Shuffle):
        pos, m, sub = addr
        member = t.members[m]
        inner = block_of(member, sub)
        # a block instance at one skeleton position; dense on both sides
        return BlockInfo(("blk", pos, inner.key), inner.type, False, False)
    if isinstance(t, EtaRep):
        si, sub = addr
        if si % 2 == 0:
            return BlockInfo(("pt", si, sub), ("fin", 1), False, False)
        return BlockInfo(("seg", si), ("fin", t.spec.nth((si - 1) // 2)),
                         False, False)
    if isinstance(t, ZetaRep):
        si, sub = addr
        ty: BlockType = Z if si % 2 == 0 else ("fin", t.spec.nth((si - 1) // 2))
        spec = t.spec
        last = (not isinstance(spec, ArithmeticSet)
                and si == 2 * len(spec.values))
        return BlockInfo(("seg", si), ty, si == 0, last)
    if isinstance(t, ZetaPower):
        return BlockInfo(("zp", _zp_strip(addr, _ONE)), Z, False, False)
    raise TypeError(f"not a term: {t!r}")


def _prev_nonempty(parts, i: int):
    for j in range(i - 1, -1, -1):
        if cardinality(parts[j]) != 0:
            return j
    return None


def _next_nonempty(parts, i: int):
    for j in range(i + 1, len(parts)):
        if cardinality(parts[j]) != 0:
            return j
    return None


def _sum_block(t: Sum, addr) -> BlockInfo:
    i, sub = addr
    inner = block_of(t.parts[i], sub)
    # grow the fused run leftwards
    lj, lfirst, lty = i, inner.is_first, inner.type
    left_types: list[BlockType] = []
    while lfirst:
        p = _prev_nonempty(t.parts, lj)
        if p is None:
            break
        pv = block_view(t.parts[p])
        if not mergeable(pv.last_block, lty):
            break
        lty = pv.last_block
        left_types.append(lty)
        lj = p
        lfirst = pv.n_blocks == 1
    # and rightwards
    rj, rlast, rty = i, inner.is_last, inner.type
    right_types: list[BlockType] = []
    while rlast:
        n = _next_nonempty(t.parts, rj)
        if n is None:
            break
        nv = block_view(t.parts[n])
        if not mergeable(rty, nv.first_block):
            break
        rty = nv.first_block
        right_types.append(rty)
        rj = n
        rlast = nv.n_blocks == 1
    ty = inner.type
    for x in left_types:
        ty = merged_type(x, ty)
    for y in right_types:
        ty = merged_type(ty, y)
    if lj == i:
        local = inner.key
    else:
        # the run starts at part lj's final block; a leftward-mergeable
        # block ends in a greatest element, so the address below exists
        local = block_of(t.parts[lj], greatest_addr(t.parts[lj])).key
    key = ("p", lj, local)
    first_part = _next_nonempty(t.parts, -1)
    last_part = _prev_nonempty(t.parts, len(t.parts))
    return BlockInfo(key, ty, lfirst and lj == first_part,
                     rlast and rj == last_part)


def _product_block(t: Product, addr) -> BlockInfo:
    la, ra = addr
    l, r = t.left, t.right
    if isinstance(l, Finite):
        inner = block_of(r, ra)
        ty = (("fin", l.size * inner.type[1]) if inner.type[0] == "fin"
              else inner.type)
        return BlockInfo(("fl", inner.key), ty, inner.is_first, inner.is_last)
    lv = block_view(l)
    rv = block_view(r)
    inner = block_of(l, la)
    self_merge = mergeable(lv.last_block, lv.first_block)
    r_dense = (not rv.census.has_infinite) and rv.census.sup_block <= 1
    if self_merge and not r_dense:
        if not isinstance(r, (Omega, OmegaStar, Zeta)):
            raise UnsupportedTermError(
                "block identity under irregular copy fusion is not supported")
        m = merged_type(lv.last_block, lv.first_block)
        if inner.is_last and succ_of(r, ra) is not None:
            return BlockInfo(("bd", ra), m, False, False)
        if inner.is_first and pred_of(r, ra) is not None:
            return BlockInfo(("bd", pred_of(r, ra)), m, False, False)
    rl = least_addr(r)
    rg = greatest_addr(r)
    return BlockInfo(("cp", ra, inner.key), inner.type,
                     inner.is_first and rl is not None and ra == rl,
                     inner.is_last and rg is not None and ra == rg)


def block_key(t: Term, addr) -> tuple:
    return block_of(t, addr).key


def block_type(t: Term, addr) -> BlockType:
    return block_of(t, addr).type


def same_block(t: Term, a, b) -> bool:
    return block_of(t, a).key == block_of(t, b).key


def is_block_least(t: Term, addr) -> bool:
    # an immediate predecessor is always in the same block, and a block
    # with no least element gives every member a predecessor
    return pred_of(t, addr) is None


def is_block_greatest(t: Term, addr) -> bool:
    return succ_of(t, addr) is None


def block_above_count(t: Term, addr) -> Card:
    """Elements of the same block strictly above the address."""
    ty = block_of(t, addr).type
    if ty in (W, Z):
        return INFINITE
    n = 0
    cur = addr
    while True:
        s = succ_of(t, cur)
        if s is None:
            return n
        n += 1
        cur = s


def block_below_count(t: Term, addr) -> Card:
    ty = block_of(t, addr).type
    if ty in (WSTAR, Z):
        return INFINITE
    n = 0
    cur = addr
    while True:
        p = pred_of(t, cur)
        if p is None:
            return n
        n += 1
        cur = p


# --- successor-chain bounds --------------------------------------------------


def sup_blocks_between(t: Term, a=None, b=None) -> Card:
    """Sup of the sizes of blocks lying entirely inside the open interval.

    A block not containing either endpoint is entirely inside or entirely
    outside, since blocks are convex.
    """
    _reject_rev(t)
    if a is not None and b is not None and same_block(t, a, b):
        return 0
    if isinstance(t, (Finite, Omega, OmegaStar, Zeta)):
        if a is None and b is None:
            return cardinality(t) if isinstance(t, Finite) else INFINITE
        return 0
    if isinstance(t, Eta):
        return 1
    if isinstance(t, Sum):
        return _sum_sup_between(t, a, b)
    if isinstance(t, Product):
        return _product_sup_between(t, a, b)
    if isinstance(t, Shuffle):
        # full instances of every member class appear densely
        return block_view(t).census.sup_block
    if isinstance(t, (EtaRep, ZetaRep)):
        return _rep_sup_between(t, a, b)
    if isinstance(t, ZetaPower):
        if a is None or b is None:
            return INFINITE
        # adjacent blocks have nothing strictly between them
        sa, sb = _zp_strip(a, _ONE), _zp_strip(b, _ONE)
        diff = _zp_diff_exps(sa, sb)
        if diff == [_ONE] and abs(_zp_value(sa, _ONE) - _zp_value(sb, _ONE)) == 1:
            return 0
        return INFINITE
    raise TypeError(f"not a term: {t!r}")


def _sum_sup_between(t: Sum, a, b) -> Card:
    ia = a[0] if a is not None else None
    ib = b[0] if b is not None else None
    if ia is not None and ia == ib:
        return sup_blocks_between(t.parts[ia], a[1], b[1])
    best: Card = 0
    if ia is not None:
        best = max(best, sup_blocks_between(t.parts[ia], a[1], None))
    if ib is not None:
        best = max(best, sup_blocks_between(t.parts[ib], None, b[1]))
    lo = ia + 1 if ia is not None else 0
    hi = ib if ib is not None else len(t.parts)
    for k in range(lo, hi):
        best = max(best, block_view(t.parts[k]).census.sup_block)
    return best


def _product_sup_between(t: Product, a, b) -> Card:
    l, r = t.left, t.right
    if isinstance(l, Finite):
        ra = a[1] if a is not None else None
        rb = b[1] if b is not None else None
        return mul_card(l.size, sup_blocks_between(r, ra, rb))
    ra = a[1] if a is not None else None
    rb = b[1] if b is not None else None
    if a is not None and b is not None and ra == rb:
        return sup_blocks_between(l, a[0], b[0])
    best: Card = 0
    if a is not None:
        best = max(best, sup_blocks_between(l, a[0], None))
    if b is not None:
        best = max(best, sup_blocks_between(l, None, b[0]))
    lv = block_view(l)
    rv = block_view(r)
    r_dense = (not rv.census.has_infinite) and rv.census.sup_block <= 1
    fused = mergeable(lv.last_block, lv.first_block) and not r_dense
    interior = interval_card(r, ra, rb)
    if not fused:
        if interior != 0:
            best = max(best, lv.census.sup_block)
        return best
    # copies adjacent in r fuse across the boundary, so an interior copy
    # keeps only its non-edge blocks intact
    if interior != 0 and lv.n_blocks != 1:
        body = lv.census.copy()
        body.remove_one(lv.last_block)
        body.remove_one(lv.first_block)
        best = max(best, body.sup_block)
    m = merged_type(lv.last_block, lv.first_block)
    m_card: Card = m[1] if m[0] == "fin" else INFINITE
    if _full_boundary_exists(t, a, b, ra, rb):
        best = max(best, m_card)
    return best


def _full_boundary_exists(t: Product, a, b, ra, rb) -> bool:
    """Whether some fused boundary block lies entirely inside (a, b)."""
    l, r = t.left, t.right

    def left_ok(c) -> bool:
        # copy c's final block must sit strictly above a
        if a is None:
            return True
        if less_at(r, ra, c):
            return True
        return c == ra and not block_of(l, a[0]).is_last

    def right_ok(cp) -> bool:
        if b is None:
            return True
        if less_at(r, cp, rb):
            return True
        return cp == rb and not block_of(l, b[0]).is_first

    cand = set()
    if a is not None:
        cand.add(ra)
        cand.add(succ_of(r, ra))
    if b is not None:
        p = pred_of(r, rb)
        cand.add(p)
        if p is not None:
            cand.add(pred_of(r, p))
    if a is None and b is None:
        cand.add(canonical_point(r))
        cand.add(pred_of(r, canonical_point(r)))
    for c in cand:
        if c is None:
            continue
        cp = succ_of(r, c)
        if cp is None:
            continue
        if left_ok(c) and right_ok(cp):
            return True
    return False


def _rep_sup_between(t: EtaRep | ZetaRep, a, b) -> Card:
    sa = a[0] if a is not None else None
    sb = b[0] if b is not None else None
    if sa is not None and sa == sb:
        return sup_blocks_between(_segment_term(t, sa), a[1], b[1])
    spec = t.spec
    filler_inside = False
    if isinstance(t, ZetaRep):
        # a whole zeta filler strictly inside dominates everything
        lo = sa + 1 if sa is not None else 0
        if isinstance(spec, ArithmeticSet):
            filler_inside = sb is None or any(
                s % 2 == 0 for s in range(lo, sb))
        else:
            hi = sb if sb is not None else 2 * len(spec.values) + 1
            filler_inside = any(s % 2 == 0 for s in range(lo, hi))
        if filler_inside:
            return INFINITE
    best: Card = 0
    if isinstance(t, EtaRep):
        best = 1  # full singleton filler blocks sit inside any crossing interval
    lo = sa + 1 if sa is not None else 0
    if isinstance(spec, ArithmeticSet):
        if sb is None:
            return INFINITE  # block sizes are unbounded upward
        for s in range(lo, sb):
            if s % 2 == 1:
                best = max(best, spec.nth((s - 1) // 2))
    else:
        hi = sb if sb is not None else 2 * len(spec.values) + 1
        for s in range(lo, hi):
            if s % 2 == 1:
                best = max(best, spec.nth((s - 1) // 2))
    return best


def interval_succ_sup(t: Term, a=None, b=None) -> Card:
    """Sup of the lengths of successor chains inside the open interval.

    A chain of consecutive elements never leaves its block, so the bound
    is the largest of: the part of a's block above a, the part of b's
    block below b, and the blocks entirely inside.
    """
    if a is not None and b is not None:
        if a == b:
            return 0
        if not less_at(t, a, b):
            raise PreconditionError("interval bounds out of order")
        if same_block(t, a, b):
            return interval_card(t, a, b)
    pieces: list[Card] = [sup_blocks_between(t, a, b)]
    if a is not None:
        pieces.append(block_above_count(t, a))
    if b is not None:
        pieces.append(block_below_count(t, b))
    best: Card = 0
    for p in pieces:
        if p is INFINITE:
            return INFINITE
        best = max(best, p)
    return best


def succ_sup(t: Term) -> Card:
    """Sup of successor-chain lengths over the whole order."""
    return interval_succ_sup(t, None, None)


def interval_has_least(t: Term, a=None, b=None) -> bool:
    """Whether the suborder strictly inside (a, b) has a least element."""
    if a is not None:
        s = succ_of(t, a)
        return s is not None and (b is None or less_at(t, s, b))
    l = least_addr(t)
    if l is None:
        return False
    return b is None or less_at(t, l, b)


def interval_has_greatest(t: Term, a=None, b=None) -> bool:
    if b is not None:
        p = pred_of(t, b)
        return p is not None and (a is None or less_at(t, a, p))
    g = greatest_addr(t)
    if g is None:
        return False
    return a is None or less_at(t, a, g)


# --- level-beta block classes ------------------------------------------------


def beta_block_key(t: Term, addr, beta: Ordinal):
    """Class of the address under the beta-iterated block relation.

    Supported where the class structure is explicit: zeta powers, products
    with a zeta-power left factor, and the base orders.
    """
    _reject_rev(t)
    if beta == _ZERO:
        return ("pt", addr)
    if beta == _ONE:
        return ("b1", block_of(t, addr).key)
    if isinstance(t, (Finite, Omega, OmegaStar, Zeta)):
        return ("all",)
    if isinstance(t, Eta):
        return ("pt", addr)
    if isinstance(t, ZetaPower):
        return ("zp", _zp_strip(addr, beta))
    if isinstance(t, Product) and isinstance(t.left, ZetaPower):
        la, ra = addr
        gamma = t.left.exp
        if beta < gamma:
            return ("prod", _zp_strip(la, beta), ra)
        if beta == gamma:
            return ("prod", ra)
        delta = cnf_left_subtract(gamma, beta)
        if delta is None:
            raise UnsupportedTermError(
                "iterated block class needs beta >= the zeta-power exponent here")
        return ("lift", beta_block_key(t.right, ra, delta))
    raise UnsupportedTermError(
        f"iterated block classes at level {beta!r} are not supported "
        f"for this term shape")
