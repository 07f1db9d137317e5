"""Finite-distance block analysis.

Two elements are related when only finitely many elements sit between
them.  Classes of that relation (1-blocks) are convex and each is shaped
like a finite chain, omega, omega*, or zeta.  This module computes, by
structural recursion, the multiset of block shapes a term realizes, the
first and last block when the quotient has endpoints, the quotient order
itself, and the suborders formed by the omega-shaped and omega*-shaped
blocks.

Adjacent blocks across a sum boundary fuse exactly when the left side
ends in a finite or omega* block and the right side starts with a finite
or omega block; fused shapes follow n+m, n+omega = omega,
omega*+m = omega*, omega*+omega = zeta.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ordinals import Ordinal
from .terms import (Card, EtaRep, Eta, Finite, INFINITE, Omega, OmegaStar,
                    Product, Rev, Shuffle, Sum, Term, UnsupportedTermError,
                    Zeta, ZetaPower, ZetaRep, ExplicitSet, add_card,
                    cardinality, has_greatest, has_least, is_empty, normalize)

# block shapes: ("fin", n) with n >= 1, ("w",), ("w*",), ("z",)
FIN1 = ("fin", 1)
W = ("w",)
WSTAR = ("w*",)
Z = ("z",)

BlockType = tuple

# census counts saturate here; a saturated bucket stays put under edge
# removal, which is sound as long as true multiplicities below the cap are
# tracked exactly -- no supported composition stacks more removals than
# that against one bucket
_SAT = 8


def mergeable(x: BlockType | None, y: BlockType | None) -> bool:
    if x is None or y is None:
        return False
    return x[0] in ("fin", "w*") and y[0] in ("fin", "w")


def merged_type(x: BlockType, y: BlockType) -> BlockType:
    if x[0] == "fin" and y[0] == "fin":
        return ("fin", x[1] + y[1])
    if x[0] == "fin" and y[0] == "w":
        return W
    if x[0] == "w*" and y[0] == "fin":
        return WSTAR
    if x[0] == "w*" and y[0] == "w":
        return Z
    raise ValueError(f"blocks {x} and {y} do not merge")


def block_type_json(t: BlockType | None):
    if t is None:
        return None
    return {"fin": t[1]} if t[0] == "fin" else t[0]


@dataclass(frozen=True)
class BkSet:
    """Set of finite block sizes: explicit values plus arithmetic tails."""

    explicit: frozenset[int] = frozenset()
    progressions: tuple[tuple[int, int], ...] = ()

    def contains(self, n: int) -> bool:
        if n in self.explicit:
            return True
        return any(n >= a and (n - a) % d == 0 for a, d in self.progressions)

    @property
    def is_empty(self) -> bool:
        return not self.explicit and not self.progressions

    @property
    def sup(self) -> Card:
        if self.progressions:
            return INFINITE
        return max(self.explicit) if self.explicit else 0

    def members_upto(self, bound: int) -> list[int]:
        out = set(v for v in self.explicit if v <= bound)
        for a, d in self.progressions:
            out.update(range(a, bound + 1, d))
        return sorted(out)

    def to_json(self):
        if self.is_empty:
            return "empty"
        if not self.progressions:
            return sorted(self.explicit)
        out: dict = {"arithmetic": [list(p) for p in sorted(self.progressions)]}
        extra = sorted(v for v in self.explicit
                       if not any(v >= a and (v - a) % d == 0
                                  for a, d in self.progressions))
        if extra:
            out["plus"] = extra
        return out


class Census:
    """Block shapes with multiplicities, saturated at _SAT."""

    __slots__ = ("counts", "progressions")

    def __init__(self, counts: dict | None = None, progressions: tuple = ()):
        self.counts: dict[BlockType, int] = dict(counts or {})
        self.progressions: tuple[tuple[int, int], ...] = tuple(progressions)

    def copy(self) -> "Census":
        return Census(self.counts, self.progressions)

    def add(self, ty: BlockType, k: int = 1) -> None:
        self.counts[ty] = min(_SAT, self.counts.get(ty, 0) + k)

    def remove_one(self, ty: BlockType) -> None:
        c = self.counts.get(ty, 0)
        if c <= 0:
            raise ValueError(f"removing absent block type {ty}")
        if c == 1:
            del self.counts[ty]
        elif c < _SAT:
            self.counts[ty] = c - 1
        # a saturated bucket stays saturated

    def union(self, other: "Census") -> "Census":
        out = self.copy()
        for ty, c in other.counts.items():
            out.add(ty, c)
        out.progressions = tuple(dict.fromkeys(self.progressions + other.progressions))
        return out

    def saturate(self) -> "Census":
        """Every present shape occurs unboundedly often."""
        return Census({ty: _SAT for ty in self.counts}, self.progressions)

    def has(self, ty: BlockType) -> bool:
        return ty in self.counts

    @property
    def has_infinite(self) -> bool:
        return any(ty[0] != "fin" for ty in self.counts)

    def bk(self) -> BkSet:
        fins = frozenset(ty[1] for ty in self.counts if ty[0] == "fin")
        return BkSet(fins, self.progressions)

    @property
    def sup_block(self) -> Card:
        if self.has_infinite:
            return INFINITE
        return self.bk().sup

    def scale(self, n: int) -> "Census":
        out = Census()
        for ty, c in self.counts.items():
            out.add(("fin", n * ty[1]) if ty[0] == "fin" else ty, c)
        out.progressions = tuple((n * a, n * d) for a, d in self.progressions)
        return out

    def swap_directions(self) -> "Census":
        swap = {W: WSTAR, WSTAR: W}
        return Census({swap.get(ty, ty): c for ty, c in self.counts.items()},
                      self.progressions)

    def to_json(self):
        out = []
        for ty in sorted(self.counts, key=lambda s: (s[0], s[1] if len(s) > 1 else 0)):
            out.append({"shape": block_type_json(ty),
                        "count": self.counts[ty] if self.counts[ty] < _SAT else "many"})
        for a, d in self.progressions:
            out.append({"shape": {"fin": f"{a}+{d}k"}, "count": "one each"})
        return out


@dataclass
class BlockView:
    """Summary of the block structure of one term."""

    census: Census
    first_block: BlockType | None
    last_block: BlockType | None
    quotient: Term | None          # None: outside the supported quotient fragment
    n_blocks: Card
    lomega: Term | None            # order of the omega-shaped blocks
    lomegastar: Term | None
    exact: bool = True             # census and edge data trustworthy

    @property
    def empty(self) -> bool:
        return self.n_blocks == 0


def _empty_view() -> BlockView:
    return BlockView(Census(), None, None, Finite(0), 0, Finite(0), Finite(0))


def _single(ty: BlockType, lomega: Term, lomegastar: Term) -> BlockView:
    c = Census()
    c.add(ty)
    return BlockView(c, ty, ty, Finite(1), 1, lomega, lomegastar)


_VIEW_CACHE: dict[Term, BlockView] = {}


def block_view(t: Term) -> BlockView:
    t = normalize(t)
    hit = _VIEW_CACHE.get(t)
    if hit is None:
        hit = _VIEW_CACHE[t] = _block_view(t)
    return hit


def _block_view(t: Term) -> BlockView:
    none = Finite(0)
    if isinstance(t, Finite):
        if t.size == 0:
            return _empty_view()
        return _single(("fin", t.size), none, none)
    if isinstance(t, Omega):
        return _single(W, Finite(1), none)
    if isinstance(t, OmegaStar):
        return _single(WSTAR, none, Finite(1))
    if isinstance(t, Zeta):
        return _single(Z, none, none)
    if isinstance(t, Eta):
        c = Census()
        c.add(FIN1, _SAT)
        return BlockView(c, None, None, Eta(), INFINITE, none, none)
    if isinstance(t, Sum):
        view = _empty_view()
        for p in t.parts:
            view = _concat(view, block_view(p))
        return view
    if isinstance(t, Product):
        return _product_view(t)
    if isinstance(t, Shuffle):
        c = Census()
        lomega: Term = none
        lomegastar: Term = none
        all_finite = True
        for m in t.members:
            mv = block_view(m)
            c = c.union(mv.census.saturate())
            if mv.census.has(W):
                lomega = Eta()
            if mv.census.has(WSTAR):
                lomegastar = Eta()
            if mv.census.has_infinite:
                all_finite = False
        quotient: Term | None = Eta() if all_finite else None
        return BlockView(c, None, None, quotient, INFINITE, lomega, lomegastar)
    if isinstance(t, EtaRep):
        c = Census()
        c.add(FIN1, _SAT)
        spec = t.spec
        if isinstance(spec, ExplicitSet):
            for v in spec.values:
                c.add(("fin", v))
            m = len(spec.values)
            quotient = normalize(Sum((Product(Sum((Eta(), Finite(1))), Finite(m)),
                                      Eta())))
        else:
            c.progressions = ((spec.start, spec.step),)
            quotient = normalize(Product(Sum((Eta(), Finite(1))), Omega()))
        return BlockView(c, None, None, quotient, INFINITE, none, none)
    if isinstance(t, ZetaRep):
        c = Census()
        c.add(Z, _SAT)
        spec = t.spec
        if isinstance(spec, ExplicitSet):
            for v in spec.values:
                c.add(("fin", v))
            m = len(spec.values)
            return BlockView(c, Z, Z, Finite(2 * m + 1), 2 * m + 1, none, none)
        c.progressions = ((spec.start, spec.step),)
        return BlockView(c, Z, None, Omega(), INFINITE, none, none)
    if isinstance(t, ZetaPower):
        c = Census()
        beta = t.exp
        if beta == Ordinal.from_int(1):
            c.add(Z, 1)
            return BlockView(c, Z, Z, Finite(1), 1, none, none)
        c.add(Z, _SAT)
        q = normalize(ZetaPower(beta.predecessor())) if beta.is_successor else None
        return BlockView(c, None, None, q, INFINITE, none, none)
    if isinstance(t, Rev):
        inner = block_view(t.inner)
        swap = {W: WSTAR, WSTAR: W}
        return BlockView(
            census=inner.census.swap_directions(),
            first_block=swap.get(inner.last_block, inner.last_block),
            last_block=swap.get(inner.first_block, inner.first_block),
            quotient=None if inner.quotient is None else normalize(Rev(inner.quotient)),
            n_blocks=inner.n_blocks,
            lomega=None if inner.lomegastar is None else normalize(Rev(inner.lomegastar)),
            lomegastar=None if inner.lomega is None else normalize(Rev(inner.lomega)),
            exact=inner.exact,
        )
    raise TypeError(f"not a term: {t!r}")


def _cat_terms(*parts: Term | None) -> Term | None:
    if any(p is None for p in parts):
        return None
    return normalize(Sum(tuple(p for p in parts if p is not None)))


def _concat(left: BlockView, right: BlockView) -> BlockView:
    """View of left-then-right with boundary fusion."""
    if left.empty:
        return right
    if right.empty:
        return left
    exact = left.exact and right.exact
    if not mergeable(left.last_block, right.first_block):
        return BlockView(
            census=left.census.union(right.census),
            first_block=left.first_block,
            last_block=right.last_block,
            quotient=_cat_terms(left.quotient, right.quotient),
            n_blocks=add_card(left.n_blocks, right.n_blocks),
            lomega=_cat_terms(left.lomega, right.lomega),
            lomegastar=_cat_terms(left.lomegastar, right.lomegastar),
            exact=exact,
        )
    x, y = left.last_block, right.first_block
    m = merged_type(x, y)
    lc = left.census.copy()
    lc.remove_one(x)
    rc = right.census.copy()
    rc.remove_one(y)
    census = lc.union(rc)
    census.add(m)
    first = m if left.n_blocks == 1 else left.first_block
    last = m if right.n_blocks == 1 else right.last_block
    n_blocks = add_card(left.n_blocks, right.n_blocks)
    if n_blocks is not INFINITE:
        n_blocks -= 1
    # the two boundary points of the quotient fuse into one
    quotient = None
    if left.quotient is not None and right.quotient is not None:
        rq_rest = drop_least(right.quotient)
        if rq_rest is not None:
            quotient = _cat_terms(left.quotient, rq_rest)
    lomega = _merge_directional(left, right, m, W, "lomega")
    lomegastar = _merge_directional(left, right, m, WSTAR, "lomegastar")
    return BlockView(census, first, last, quotient, n_blocks, lomega, lomegastar, exact)


def _merge_directional(left: BlockView, right: BlockView, m: BlockType,
                       direction: BlockType, attr: str) -> Term | None:
    """Order of omega (or omega*) blocks across one fusing boundary."""
    lt, rt = getattr(left, attr), getattr(right, attr)
    if lt is None or rt is None:
        return None
    lose_left = left.last_block == direction
    lose_right = right.first_block == direction
    gain = m == direction
    if not (lose_left or lose_right or gain):
        return _cat_terms(lt, rt)
    if lose_left:
        lt = drop_greatest(lt)
    if lose_right:
        rt = drop_least(rt)
    if lt is None or rt is None:
        return None
    mid: tuple[Term, ...] = (Finite(1),) if gain else ()
    return normalize(Sum((lt,) + mid + (rt,)))


def drop_least(t: Term) -> Term | None:
    """The order minus its least element; None when that leaves the fragment."""
    t = normalize(t)
    if not has_least(t):
        return None
    if isinstance(t, Finite):
        return Finite(t.size - 1)
    if isinstance(t, Omega):
        return t
    if isinstance(t, Sum):
        for i, p in enumerate(t.parts):
            if not is_empty(p):
                rest = drop_least(p)
                if rest is None:
                    return None
                return normalize(Sum((rest,) + t.parts[i + 1:]))
        return None
    if isinstance(t, Product):
        dl, dr = drop_least(t.left), drop_least(t.right)
        if dl is None or dr is None:
            return None
        return normalize(Sum((dl, Product(t.left, dr))))
    return None


def drop_greatest(t: Term) -> Term | None:
    t = normalize(t)
    if not has_greatest(t):
        return None
    if isinstance(t, Finite):
        return Finite(t.size - 1)
    if isinstance(t, OmegaStar):
        return t
    if isinstance(t, Sum):
        for i in range(len(t.parts) - 1, -1, -1):
            if not is_empty(t.parts[i]):
                rest = drop_greatest(t.parts[i])
                if rest is None:
                    return None
                return normalize(Sum(t.parts[:i] + (rest,)))
        return None
    if isinstance(t, Product):
        dl, dr = drop_greatest(t.left), drop_greatest(t.right)
        if dl is None or dr is None:
            return None
        return normalize(Sum((Product(t.left, dr), dl)))
    return None


def _product_view(t: Product) -> BlockView:
    l, r = t.left, t.right
    if is_empty(l) or is_empty(r):
        return _empty_view()
    if isinstance(l, Finite):
        rv = block_view(r)
        return BlockView(
            census=rv.census.scale(l.size),
            first_block=_scale_type(rv.first_block, l.size),
            last_block=_scale_type(rv.last_block, l.size),
            quotient=rv.quotient,
            n_blocks=rv.n_blocks,
            lomega=rv.lomega,
            lomegastar=rv.lomegastar,
            exact=rv.exact,
        )
    lv = block_view(l)
    if isinstance(r, Finite):
        view = _empty_view()
        for _ in range(r.size):
            view = _concat(view, lv)
        return view
    rv = block_view(r)
    self_merge = mergeable(lv.last_block, lv.first_block)
    # an index order with only singleton blocks has no adjacent copies
    r_dense = (not rv.census.has_infinite) and rv.census.sup_block <= 1
    if not self_merge or r_dense:
        census = lv.census.saturate()
        first = lv.first_block if has_least(r) else None
        last = lv.last_block if has_greatest(r) else None
        quotient = None if lv.quotient is None else normalize(Product(lv.quotient, r))
        lomega = _scale_directional(lv.lomega, r)
        lomegastar = _scale_directional(lv.lomegastar, r)
        return BlockView(census, first, last, quotient, INFINITE,
                         lomega, lomegastar, lv.exact and rv.exact)
    if isinstance(r, (Omega, OmegaStar, Zeta)):
        return _self_merge_view(lv, r)
    # adjacent copies fuse but the index successor pattern is irregular;
    # shapes present are still known, everything else is not certified
    return BlockView(lv.census.saturate(), None, None, None, INFINITE,
                     None, None, exact=False)


def _scale_directional(base: Term | None, r: Term) -> Term | None:
    if base is None:
        return None
    return Finite(0) if is_empty(base) else normalize(Product(base, r))


def _scale_type(ty: BlockType | None, n: int) -> BlockType | None:
    if ty is None:
        return None
    return ("fin", n * ty[1]) if ty[0] == "fin" else ty


def _self_merge_view(lv: BlockView, r: Term) -> BlockView:
    """Copies of one view glued at every boundary of an omega, omega*, or
    zeta index order (all of whose adjacent pairs are successor steps)."""
    x, y = lv.last_block, lv.first_block
    m = merged_type(x, y)
    body = lv.census.copy()
    body.remove_one(x)
    body.remove_one(y)
    census = body.saturate()
    census.add(m, _SAT)
    first: BlockType | None = None
    last: BlockType | None = None
    if isinstance(r, Omega):
        census.add(y)  # the lowest copy keeps its opening block
        first = y
    if isinstance(r, OmegaStar):
        census.add(x)  # the topmost copy keeps its closing block
        last = x
    quotient = None
    if lv.quotient is not None:
        if isinstance(r, Omega):
            q_body = drop_least(lv.quotient)
            if q_body is not None:
                quotient = _cat_terms(lv.quotient, normalize(Product(q_body, r)))
        elif isinstance(r, OmegaStar):
            mid_q = drop_greatest(lv.quotient)
            mid_q = drop_least(mid_q) if mid_q is not None else None
            if mid_q is not None:
                unit = normalize(Sum((mid_q, Finite(1))))
                quotient = _cat_terms(normalize(Product(unit, r)), mid_q, Finite(1))
        else:
            q_body = drop_least(lv.quotient)
            if q_body is not None:
                quotient = _scale_directional(q_body, r)
    lomega = _self_merge_directional(lv, r, m, W, "lomega")
    lomegastar = _self_merge_directional(lv, r, m, WSTAR, "lomegastar")
    return BlockView(census, first, last, quotient, INFINITE,
                     lomega, lomegastar, lv.exact)


def _self_merge_directional(lv: BlockView, r: Term, m: BlockType,
                            direction: BlockType, attr: str) -> Term | None:
    base = getattr(lv, attr)
    if base is None:
        return None
    lose_l = lv.last_block == direction
    lose_r = lv.first_block == direction
    gain = m == direction
    if not (lose_l or lose_r or gain):
        return _scale_directional(base, r)
    body: Term | None = base
    if lose_l:
        body = drop_greatest(body) if body is not None else None
    if lose_r:
        body = drop_least(body) if body is not None else None
    if body is None:
        return None
    g: Term = Finite(1) if gain else Finite(0)
    cell = normalize(Sum((body, g)))
    if isinstance(r, Omega):
        head = base if not lose_l else drop_greatest(base)
        if head is None:
            return None
        return _cat_terms(head, g, _scale_directional(cell, r))
    if isinstance(r, OmegaStar):
        tail = base if not lose_r else drop_least(base)
        if tail is None:
            return None
        return _cat_terms(_scale_directional(normalize(Sum((g, body))), r), g, tail)
    return _scale_directional(cell, r)


# ---------------------------------------------------------------------------
# public queries

def bk_set(t: Term) -> BkSet:
    """The set of finite block sizes the term realizes."""
    v = block_view(t)
    if not v.exact:
        raise UnsupportedTermError(
            "block census is not certified for this term shape")
    return v.census.bk()


def condense_one(t: Term) -> dict:
    """JSON-ready block decomposition of one term."""
    t = normalize(t)
    v = block_view(t)
    if not v.exact:
        raise UnsupportedTermError(
            "block analysis is not certified for this term shape")
    from .render import render
    return {
        "term": render(t),
        "census": v.census.to_json(),
        "bk": v.census.bk().to_json(),
        "first_block": block_type_json(v.first_block),
        "last_block": block_type_json(v.last_block),
        "quotient": render(v.quotient) if v.quotient is not None else "unsupported",
        "n_blocks": "infinite" if v.n_blocks is INFINITE else v.n_blocks,
        "omega_blocks_order": (render(v.lomega)
                               if v.lomega is not None else "unsupported"),
        "omegastar_blocks_order": (render(v.lomegastar)
                                   if v.lomegastar is not None else "unsupported"),
    }


def block_predicates(t: Term) -> dict:
    """The block facts the substructure finders branch on."""
    v = block_view(t)
    if not v.exact:
        raise UnsupportedTermError(
            "block analysis is not certified for this term shape")
    from .terms import co_ill_founded, ill_founded
    out = {
        "has_zeta_block": v.census.has(Z),
        "first_quotient_block": block_type_json(v.first_block),
        "last_quotient_block": block_type_json(v.last_block),
    }
    out["omegastar_into_omega_blocks"] = (
        None if v.lomega is None else ill_founded(v.lomega))
    out["omega_into_omegastar_blocks"] = (
        None if v.lomegastar is None else co_ill_founded(v.lomegastar))
    return out
