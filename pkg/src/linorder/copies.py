"""Copies of a term carrying a distinguished dense set.

A generic copy re-enumerates a term so that a computable set D of
density one holds exactly a selected substructure, with the complement
parked on a sparse schedule (the perfect squares by default).  A coarse
pair enumerates two orders, the term and a fully computable cover,
through one shared target enumeration, so their orders agree on every
pair drawn from D.

The square schedule keeps ρ_n(D) ≥ 1 − (√n + 1)/(n + 1), comfortably
above 0.95 from n = 10⁴ on.
"""

from __future__ import annotations

from itertools import count
from math import isqrt
from typing import Iterator

from .elementarity import EmbeddingDescriptor, Selector
from .intervals import less_at, same_block
from .presentations import (DenseSetSpec, Presentation, address_stream,
                            all_naturals, cofinite_complement, non_squares)
from .terms import (INFINITE, Omega, OmegaStar, PreconditionError, Product,
                    Term, UnsupportedTermError, Zeta, cardinality, normalize)


def _is_square(i: int) -> bool:
    s = isqrt(i)
    return s * s == i


def _complement_spec(excluded: frozenset[int] | None) -> DenseSetSpec:
    if excluded is None:
        return non_squares()
    if not excluded:
        return all_naturals()
    return cofinite_complement(excluded)


def _copy_stream(t: Term, sub: EmbeddingDescriptor,
                 excluded: frozenset[int] | None) -> Iterator:
    """Re-enumeration of t: selected points on D positions, complement
    points on the excluded schedule."""
    own = sub.owned_stream()
    comp = (a for a in address_stream(t) if not sub.owns(a))
    for i in count():
        on_comp = _is_square(i) if excluded is None else i in excluded
        if on_comp:
            try:
                yield next(comp)
            except StopIteration:
                return
        else:
            yield next(own)


def generic_copy(t: Term, sub: EmbeddingDescriptor) -> tuple[Presentation, DenseSetSpec]:
    """A copy of t whose distinguished set D is computable, has density
    tending to one, and carries exactly the selected substructure.

    The complement of D mirrors the complement of the selection: empty,
    the same finite size, or the squares when it is infinite.
    """
    t = normalize(t)
    if cardinality(sub.target_type) is not INFINITE:
        raise PreconditionError("the selected substructure must be infinite")
    comp = sub.complement_card
    if comp is INFINITE:
        excluded = None
    elif comp == 0:
        excluded = frozenset()
    else:
        excluded = frozenset(s * s for s in range(comp))
    p = Presentation(t, stream=_copy_stream(t, sub, excluded))
    spec = _complement_spec(excluded)
    p.distinguished = spec
    return p, spec


def coarse_copy(t: Term, sub: EmbeddingDescriptor, cover: Term,
                cover_sub: EmbeddingDescriptor) -> tuple[Presentation, Presentation, DenseSetSpec]:
    """Paired enumerations of t and a cover through one shared selection.

    Both selections must have the same order type.  When their
    complements fall in different cardinality classes and one side is
    infinite, the other selection is thinned (every other stretch is
    dropped) so both complements come out infinite; two unequal finite
    complements are rejected.
    """
    t = normalize(t)
    cover = normalize(cover)
    tgt = normalize(sub.target_type)
    if tgt != normalize(cover_sub.target_type):
        raise PreconditionError("selections have different order types")
    ca, cb = sub.complement_card, cover_sub.complement_card
    if ca is INFINITE and cb is not INFINITE:
        cover_sub = _thin(cover, cover_sub)
        cb = INFINITE
    elif cb is INFINITE and ca is not INFINITE:
        sub = _thin(t, sub)
        ca = INFINITE
    if ca is INFINITE:
        excluded: frozenset[int] | None = None
    elif ca != cb:
        raise PreconditionError("complement sizes differ")
    elif ca == 0:
        excluded = frozenset()
    else:
        excluded = frozenset(s * s for s in range(ca))
    p1 = Presentation(t, stream=_copy_stream(t, sub, excluded))
    p2 = Presentation(cover, stream=_copy_stream(cover, cover_sub, excluded))
    spec = _complement_spec(excluded)
    p1.distinguished = spec
    p2.distinguished = spec
    return p1, p2, spec


def _thin(t: Term, sub: EmbeddingDescriptor) -> EmbeddingDescriptor:
    """Every other stretch of a selection: same order type, infinite
    complement."""
    tgt = normalize(sub.target_type)
    if isinstance(tgt, (Omega, OmegaStar, Zeta)):
        def embed2(k):
            return sub.embed(2 * k)

        def index_of(a):
            # owned points are cofinal images of the walk, so this stops
            ks = _target_walk_order(tgt)
            for k in ks:
                e = sub.embed(k)
                if e == a:
                    return k
                if isinstance(tgt, Omega) and less_at(t, a, e):
                    return None
                if isinstance(tgt, OmegaStar) and less_at(t, e, a):
                    return None

        def owns2(a):
            if not sub.owns(a):
                return False
            k = index_of(a)
            return k is not None and k % 2 == 0
    elif isinstance(tgt, Product):
        if not isinstance(tgt.right, (Omega, OmegaStar)):
            raise UnsupportedTermError("cannot thin this selection shape")

        def embed2(ta):
            x, j = ta
            return sub.embed((x, 2 * j))

        def owns2(a):
            if not sub.owns(a):
                return False
            for j in range(128):
                probe = sub.embed((0, j))
                if same_block(t, a, probe):
                    return j % 2 == 0
            return False
    else:
        raise UnsupportedTermError("cannot thin this selection shape")
    sels = sub.selectors + (Selector("every other stretch of the selection",
                                     "one-per-block"),)
    return EmbeddingDescriptor(
        source=sub.source, target_type=tgt, selectors=sels,
        complement_card=INFINITE, cert=("thinned",) + sub.cert,
        _owns=owns2, _embed=embed2)


def _target_walk_order(tgt: Term) -> Iterator[int]:
    if isinstance(tgt, Zeta):
        def zig():
            yield 0
            for k in count(1):
                yield k
                yield -k
        return zig()
    return count()


__all__ = ["coarse_copy", "generic_copy"]
