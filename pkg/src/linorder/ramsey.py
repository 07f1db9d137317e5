"""Monochromatic extraction for finite relational structures.

Tuples of a structure are colored by their quantifier-free type: the
full atomic diagram over the tuple, every relation evaluated on every
argument map.  A subset all of whose increasing k-tuples share one type
code is a substructure whose relations are computed from the code
alone, so it admits a presentation with a density-one distinguished
set (the leftover elements parked on an initial run of squares).

Extraction is constructive and deterministic:

  arity 1   bucket and take the majority type
  arity 2   pivot chain: repeatedly take the least live element and
            keep its largest color class, then the majority color
            among the pivots
  arity 3   pre-homogeneous refinement (each new element narrows the
            live set so all later triples through a fixed pair share
            one color), then the arity-2 extraction on the derived
            pair coloring of sequence indices

The pivot bound guarantees a size-t output only on universes of
roughly C^(C(t-1)) elements (C = number of type codes), which
overshoots small exact thresholds; on universes of at most 32 elements
a backtracking search runs when the chain falls short, so e.g. every
2-coloring of the 6-element complete graph yields its monochromatic
triple.  Outputs are homogeneous by construction regardless of whether
the size guarantee held; `guaranteed` reports which regime applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .presentations import DenseSetSpec, cofinite_complement, non_squares
from .terms import PreconditionError


@dataclass(frozen=True)
class RelationalSignature:
    """Finitely many named relations, arities 1 to 3."""

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.relations:
            raise PreconditionError("empty signature")
        names = [n for n, _ in self.relations]
        if len(set(names)) != len(names):
            raise PreconditionError("duplicate relation names")
        for name, ar in self.relations:
            if not 1 <= ar <= 3:
                raise PreconditionError(f"arity of {name} must be 1..3")

    @property
    def max_arity(self) -> int:
        return max(ar for _, ar in self.relations)

    def type_count(self) -> int:
        """Number of possible type codes at the maximum arity."""
        k = self.max_arity
        return 1 << sum(k ** ar for _, ar in self.relations)

    def to_json(self) -> dict:
        return {"relations": [{"name": n, "arity": a} for n, a in self.relations]}

    @classmethod
    def from_json(cls, obj: dict) -> "RelationalSignature":
        return cls(tuple((r["name"], int(r["arity"])) for r in obj["relations"]))


class FiniteRelStructure:
    """Universe 0..size-1 with total boolean tables per relation."""

    def __init__(self, sig: RelationalSignature, size: int,
                 tables: dict[str, frozenset] | None = None):
        self.sig = sig
        self.size = size
        self.tables = {name: frozenset() for name, _ in sig.relations}
        for name, tuples in (tables or {}).items():
            ar = self._arity(name)
            for t in tuples:
                if len(t) != ar or not all(0 <= x < size for x in t):
                    raise PreconditionError(f"bad tuple {t} for {name}")
            self.tables[name] = frozenset(tuple(t) for t in tuples)

    def _arity(self, name: str) -> int:
        for n, a in self.sig.relations:
            if n == name:
                return a
        raise PreconditionError(f"unknown relation {name}")

    def holds(self, name: str, t: tuple) -> bool:
        return tuple(t) in self.tables[name]

    def restrict(self, subset) -> "FiniteRelStructure":
        """Induced substructure, renumbered along the sorted subset."""
        elems = sorted(subset)
        pos = {e: i for i, e in enumerate(elems)}
        tables = {}
        for name, _ in self.sig.relations:
            tables[name] = frozenset(
                tuple(pos[x] for x in t) for t in self.tables[name]
                if all(x in pos for x in t))
        return FiniteRelStructure(self.sig, len(elems), tables)

    def to_json(self) -> dict:
        return {"size": self.size,
                "tables": {name: sorted(list(t) for t in tuples)
                           for name, tuples in self.tables.items()}}

    @classmethod
    def from_json(cls, sig: RelationalSignature, obj: dict) -> "FiniteRelStructure":
        return cls(sig, int(obj["size"]),
                   {name: frozenset(tuple(t) for t in tuples)
                    for name, tuples in obj.get("tables", {}).items()})


def qf_type(s: FiniteRelStructure, tpl: tuple) -> str:
    """Canonical type code of an increasing max-arity tuple.

    One bit per relation per argument map (all maps from argument
    positions into tuple positions, repeats included), so the code is
    the complete atomic diagram of the tuple.
    """
    k = s.sig.max_arity
    if len(tpl) != k:
        raise PreconditionError(f"need a {k}-tuple")
    if len(set(tpl)) != len(tpl):
        raise PreconditionError("repeated entries")
    if list(tpl) != sorted(tpl):
        raise PreconditionError("tuple must be increasing")
    parts = []
    for name, ar in s.sig.relations:
        bits = "".join(
            "1" if s.holds(name, tuple(tpl[i] for i in m)) else "0"
            for m in product(range(k), repeat=ar))
        parts.append(f"{name}:{bits}")
    return ";".join(parts)


def homogeneity_violations(s: FiniteRelStructure, subset) -> list:
    """Increasing k-tuples of the subset that disagree with the first
    tuple's type; empty list means homogeneous."""
    elems = sorted(subset)
    k = s.sig.max_arity
    tuples = list(combinations(elems, k))
    if not tuples:
        return []
    code = qf_type(s, tuples[0])
    return [t for t in tuples if qf_type(s, t) != code]


def required_size(num_colors: int, arity: int, target: int) -> int:
    """Universe size at which the constructive extraction guarantees a
    homogeneous subset of the target size.

    arity 1: pigeonhole, C(t-1)+1.
    arity 2: pivot chain needs m = C(t-1)+1 colored pivots; the live
             set must survive m halvings-by-C, g(j) = 2 + C(g(j-1)-1).
    arity 3: a pre-homogeneous sequence of length M = arity-2 bound,
             each new member costing a factor C per earlier member.

    Values are capped at 10^12: any bound past that exceeds every
    universe this module will ever see, and the uncapped numbers are
    astronomically long integers.
    """
    cap = 10 ** 12
    c, t = max(num_colors, 1), max(target, 1)
    if arity == 1:
        return min(c * (t - 1) + 1, cap)
    if c == 1:
        return min(t + 1, cap)
    m = c * (t - 1) + 1
    g = 0
    for _ in range(min(m, 64)):
        g = 2 + c * (g - 1) if g else 2
        if g >= cap:
            return cap
    if arity == 2:
        return min(g, cap)
    n = 1
    for i in range(g):
        n = n * (c ** i) + 1
        if n >= cap:
            return cap
    return min(n, cap)


@dataclass(frozen=True)
class ExtractionResult:
    subset: tuple
    type_code: str
    guaranteed: bool

    def to_json(self) -> dict:
        return {"subset": list(self.subset), "type": self.type_code,
                "guaranteed": self.guaranteed}


def _best(buckets: dict) -> tuple:
    # largest class, ties to the least code, keeps everything deterministic
    return sorted(buckets.items(), key=lambda kv: (-len(kv[1]), kv[0]))[0]


def _pivot_extract(color, universe: list, target: int):
    """Pivot/majority chain over an abstract pair coloring.

    color(a, b) for a < b in universe order; returns (subset, code).
    """
    pivots = []  # (element, code of its kept class)
    live = list(universe)
    while live:
        p, rest = live[0], live[1:]
        if not rest:
            pivots.append((p, None))
            break
        buckets: dict = {}
        for x in rest:
            buckets.setdefault(color(p, x), []).append(x)
        code, cls = _best(buckets)
        pivots.append((p, code))
        live = cls
    counts: dict = {}
    for _, code in pivots:
        if code is not None:
            counts[code] = counts.get(code, 0) + 1
    if not counts:
        return [universe[0]] if universe else [], None
    code = sorted(counts, key=lambda c: (-counts[c], c))[0]
    subset = [p for p, c in pivots if c == code]
    # the final, classless pivot sits inside every chosen pivot's kept class
    if pivots[-1][1] is None and subset:
        subset.append(pivots[-1][0])
    return subset[:target] if len(subset) > target else subset, code


def _exhaustive_k(color, universe: list, target: int, k: int):
    """Backtracking search for a target-size subset all of whose
    increasing k-tuples share one color; exact but meant for small
    universes only."""
    codes: dict = {}
    for t in combinations(universe, k):
        codes.setdefault(color(*t), []).append(t)
    codes.pop("?", None)
    for code in sorted(codes, key=lambda c: (-len(codes[c]), c)):
        ok = set(codes[code])

        def grow(partial, rest):
            if len(partial) == target:
                return partial
            for i, v in enumerate(rest):
                cand = partial + [v]
                if all(tuple(c) in ok
                       for c in combinations(cand, k) if v in c):
                    out = grow(cand, rest[i + 1:])
                    if out:
                        return out
            return None

        found = grow([], list(universe))
        if found:
            return found, code
    return None, None


def _prehomogeneous(tcolor, universe: list, lock: str | None):
    """Greedy pre-homogeneous chain: each new member refines the live
    set to the locked code's class (first refinement's winner if no
    lock given), so every triple through two chain members and any
    later member carries that one code.  The chain stops when the
    locked class dies; the fully-refined prefix is returned."""
    seq: list = []
    live = list(universe)
    locked = lock
    while live:
        a = live.pop(0)
        i_new = len(seq)
        seq.append(a)
        failed = False
        for j in range(i_new):
            buckets: dict = {}
            for x in live:
                buckets.setdefault(tcolor((seq[j], a, x)), []).append(x)
            if locked is None and buckets:
                locked = _best(buckets)[0]
            if locked not in buckets:
                failed = True
                break
            live = buckets[locked]
        if failed:
            # the member just added still joins: its own rows are never
            # consumed once the chain stops here
            break
    return seq, locked


def _extract_triple(s: FiniteRelStructure, universe: list, target: int):
    """Arity-3 driver: greedy pre-homogeneous chains, retried over the
    most frequent probe codes as refinement locks."""
    if len(universe) < 3:
        return list(universe[:target]), None
    memo: dict = {}

    def tcolor(t):
        v = memo.get(t)
        if v is None:
            v = memo[t] = qf_type(s, t)
        return v

    probe: dict = {}
    a, b = universe[0], universe[1]
    for x in universe[2:66]:
        c = tcolor((a, b, x))
        probe[c] = probe.get(c, 0) + 1
    locks = [None] + sorted(probe, key=lambda c: (-probe[c], c))[:3]
    best: list = []
    best_code = None
    for lock in locks:
        seq, code = _prehomogeneous(tcolor, universe, lock)
        if len(seq) > len(best):
            best, best_code = seq, code
        if len(best) >= target:
            break
    return best[:target] if len(best) > target else best, best_code


def extract_monochromatic(s: FiniteRelStructure, target: int) -> ExtractionResult:
    """A subset all of whose increasing max-arity tuples share one type.

    Attempts the constructive chain first; on universes of at most 32
    elements a falling-short chain triggers the exact backtracking
    search.  The output is homogeneous whenever it has at least k
    elements; `guaranteed` records whether the universe met the
    constructive bound for the requested target.
    """
    k = s.sig.max_arity
    if target < k:
        raise PreconditionError("target below the signature's arity")
    universe = list(range(s.size))
    subset: list = []
    code = None
    if k == 1:
        buckets: dict = {}
        for x in universe:
            buckets.setdefault(qf_type(s, (x,)), []).append(x)
        if buckets:
            code, cls = _best(buckets)
            subset = cls[:target]
    elif k == 2:
        subset, code = _pivot_extract(
            lambda a, b: qf_type(s, (a, b)), universe, target)
    else:
        subset, code = _extract_triple(s, universe, target)
    if len(subset) < target and s.size <= 32:
        found, fcode = _exhaustive_k(
            lambda *t: qf_type(s, t), universe, target, k)
        if found:
            subset, code = found, fcode
    if len(subset) >= k:
        code = qf_type(s, tuple(subset[:k]))
    return ExtractionResult(tuple(subset), code or "",
                            s.size >= required_size(s.sig.type_count(), k, target))


# --- emitted copies ----------------------------------------------------------


class _TypePattern:
    """Decoded type code: relation values as a function of the collapse
    pattern of the argument map, usable on any elements of a set every
    k-tuple of which carries the code."""

    def __init__(self, sig: RelationalSignature, code: str):
        self.sig = sig
        k = sig.max_arity
        self.bits: dict = {}
        parts = dict(p.split(":", 1) for p in code.split(";"))
        for name, ar in sig.relations:
            bits = parts[name]
            table = {}
            for pos, m in enumerate(product(range(k), repeat=ar)):
                table[m] = bits[pos] == "1"
            self.bits[name] = table
            # a value may only depend on the order/equality pattern of
            # the map, otherwise no homogeneous extension exists
            for m, v in table.items():
                ranks = sorted(set(m))
                canon = tuple(ranks.index(x) for x in m)
                if table[canon] != v:
                    raise PreconditionError(
                        "type code is not position-stable; extend the subset")

    def value(self, name: str, args: tuple) -> bool:
        ranks = sorted(set(args))
        return self.bits[name][tuple(ranks.index(x) for x in args)]


@dataclass
class RelationalPresentation:
    """A copy presented on an initial segment of the naturals with a
    distinguished density-one set carrying the homogeneous part."""

    sig: RelationalSignature
    variant: str  # "generic" or "coarse"
    subset: tuple
    type_code: str
    leftovers: tuple
    source: FiniteRelStructure
    distinguished: DenseSetSpec

    def build(self, stage: int) -> FiniteRelStructure:
        pat = _TypePattern(self.sig, self.type_code)
        m = len(self.leftovers)
        sq = {i * i: i for i in range(m)}
        elem: list = []  # per id: ("L", source element) or ("D", abstract index)
        d_seen = 0
        for i in range(stage):
            if self.variant == "generic" and i in sq:
                elem.append(("L", self.leftovers[sq[i]]))
            else:
                elem.append(("D", d_seen))
                d_seen += 1
        tables: dict = {}
        for name, ar in self.sig.relations:
            hold = set()
            for tpl in product(range(stage), repeat=ar):
                kinds = [elem[i] for i in tpl]
                if all(k == "D" for k, _ in kinds):
                    v = pat.value(name, tuple(x for _, x in kinds))
                else:
                    # concrete rows: fresh tail members stand in as the
                    # last extracted element
                    conc = []
                    for k, x in kinds:
                        if k == "L":
                            conc.append(x)
                        elif x < len(self.subset):
                            conc.append(self.subset[x])
                        else:
                            conc.append(self.subset[-1])
                    v = self.source.holds(name, tuple(conc))
                if v:
                    hold.add(tpl)
            tables[name] = frozenset(hold)
        return FiniteRelStructure(self.sig, stage, tables)

    def to_json(self, stage: int = 12) -> dict:
        return {"subset": list(self.subset), "type": self.type_code,
                "copy": self.build(stage).to_json(),
                "D": self.distinguished.to_json(stage)}


def emit_generic_copy(s: FiniteRelStructure, subset, type_code: str,
                      variant: str = "generic"):
    """Presentation pair for a homogeneous subset.

    generic: leftover elements of s park on the first squares, the
    density-one remainder carries the type-determined structure (the
    extracted elements first, then fresh tail members).
    coarse: the cover is the type-determined structure on the whole
    universe; any infinite subset of it is a copy of the homogeneous
    part, so the distinguished set is the square-complement.
    """
    elems = sorted(subset)
    k = s.sig.max_arity
    if len(elems) < k:
        raise PreconditionError("subset too small to witness a type")
    bad = homogeneity_violations(s, elems)
    if bad or qf_type(s, tuple(elems[:k])) != type_code:
        raise PreconditionError("subset is not homogeneous under this code")
    _TypePattern(s.sig, type_code)  # position-stability gate
    if variant == "generic":
        leftovers = tuple(x for x in range(s.size) if x not in set(elems))
        d = cofinite_complement(frozenset(i * i for i in range(len(leftovers))))
    elif variant == "coarse":
        leftovers = ()
        d = non_squares()
    else:
        raise PreconditionError(f"unknown variant {variant!r}")
    pres = RelationalPresentation(s.sig, variant, tuple(elems), type_code,
                                  leftovers, s, d)
    return pres, d


__all__ = ["ExtractionResult", "FiniteRelStructure", "RelationalPresentation",
           "RelationalSignature", "emit_generic_copy", "extract_monochromatic",
           "homogeneity_violations", "qf_type", "required_size"]
