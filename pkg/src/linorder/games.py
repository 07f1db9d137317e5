"""Three-valued deciding of lower <=_level upper claims.

The claim direction: every Sigma_level sentence true in the upper term
holds in the lower term.  Three engines cooperate:

* brute_ef_le plays the n-round back-and-forth game exhaustively on
  complete finite presentations;
* derive_le proves claims from a catalog of composition rules, each
  justified by a transfer argument, and reports a nested derivation;
* refute_le hunts for a separating sentence: one that is true in the
  upper term, false in the lower term, and of quantifier level at most
  the claim level.

Proofs and refutations are sound but deliberately incomplete; Unknown
is the honest fallback.  decide_le runs both engines and treats a
double fire as a catalog bug worth crashing on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .condense import block_view, bk_set
from .formulas import (
    Formula,
    bk_contains,
    card_at_least,
    exact_card,
    formula_text,
    library,
    qrank,
    succ_chain,
    translate_eta2eta,
    translate_zeta_power,
)
from .ordinals import ONE, ZERO, Ordinal, cnf_add, cnf_double, cnf_left_subtract, render_ordinal
from .render import render
from .terms import (
    INFINITE,
    Card,
    Eta,
    Finite,
    Omega,
    Product,
    Shuffle,
    Sum,
    Term,
    UnsupportedTermError,
    Zeta,
    ZetaPower,
    cardinality,
    has_greatest,
    has_least,
    is_empty,
    normalize,
    term_key,
)


class ContradictionError(Exception):
    """Prover and refuter both fired on one claim: a catalog bug."""


@dataclass(frozen=True)
class LeClaim:
    lower: Term
    upper: Term
    level: Ordinal

    def __post_init__(self):
        if isinstance(self.level, int):
            object.__setattr__(self, "level", Ordinal.from_int(self.level))
        if self.level < ONE:
            raise ValueError("claims start at level 1")
        object.__setattr__(self, "lower", normalize(self.lower))
        object.__setattr__(self, "upper", normalize(self.upper))

    def key(self):
        return (term_key(self.lower), term_key(self.upper), self.level)


@dataclass
class Derivation:
    conclusion: LeClaim
    verdict: str  # "proved" | "refuted" | "unknown"
    rule: str = ""
    premises: list = field(default_factory=list)
    witness: Formula | None = None
    witness_tag: tuple | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "claim": {
                "lower": render(self.conclusion.lower),
                "upper": render(self.conclusion.upper),
                "level": render_ordinal(self.conclusion.level),
            },
            "verdict": self.verdict,
            "rule": self.rule,
            "premises": [p.to_json() for p in self.premises],
            "witness": None if self.witness is None else formula_text(self.witness),
        }
        if self.note:
            out["note"] = self.note
        return out


def _card_ge(a: Card, b: Card) -> bool:
    if a is INFINITE:
        return True
    if b is INFINITE:
        return False
    return a >= b


def succ_sup(t: Term) -> Card | None:
    """Largest successive-run length the term realizes, None if uncertified."""
    v = block_view(t)
    if not v.exact:
        return None
    return v.census.sup_block


def _endpoint_free(t: Term) -> bool:
    return not has_least(t) and not has_greatest(t)


def _omega_power(t: Term) -> int | None:
    """n with t = omega^n, if the term is literally built that way."""
    if isinstance(t, Finite) and t.size == 1:
        return 0
    if isinstance(t, Omega):
        return 1
    if isinstance(t, Product):
        a = _omega_power(t.left)
        b = _omega_power(t.right)
        if a is not None and b is not None:
            return a + b
    return None


_E2E_LEFT = term_key(normalize(Sum((Eta(), Finite(2), Eta()))))


def _zp_split(t: Term) -> tuple[Ordinal, Term]:
    """Factor t as zeta^beta * rest with beta maximal at the outermost layer."""
    if isinstance(t, Product):
        if isinstance(t.left, ZetaPower):
            return t.left.exp, t.right
        if isinstance(t.left, Zeta):
            return ONE, t.right
    if isinstance(t, ZetaPower):
        return t.exp, Finite(1)
    if isinstance(t, Zeta):
        return ONE, Finite(1)
    return ZERO, t


def _e2e_split(t: Term) -> Term | None:
    if isinstance(t, Product) and term_key(t.left) == _E2E_LEFT:
        return t.right
    if term_key(t) == _E2E_LEFT:
        return Finite(1)
    return None


# --- the prover ---


class _Prover:
    def __init__(self, depth: int):
        self.depth = depth
        self.memo: dict = {}

    def derive(self, claim: LeClaim, depth: int) -> Derivation:
        key = claim.key()
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = Derivation(claim, "unknown", note="cycle guard")
        out = self._derive(claim, depth)
        self.memo[key] = out
        return out

    def _derive(self, claim: LeClaim, depth: int) -> Derivation:
        a, b, lvl = claim.lower, claim.upper, claim.level

        if term_key(a) == term_key(b):
            return Derivation(claim, "proved", "refl")

        if lvl == ONE:
            if cardinality(a) is INFINITE or _card_ge(cardinality(a), cardinality(b)):
                return Derivation(claim, "proved", "base1",
                                  note="lower is infinite or at least as large")
            return Derivation(claim, "unknown")

        pa, pb = _omega_power(a), _omega_power(b)
        if pa is not None and pb is not None and pa >= 1 and pb >= 1:
            if lvl <= Ordinal.from_int(2 * min(pa, pb)):
                return Derivation(claim, "proved", "ash-power",
                                  note=f"omega^{pa} and omega^{pb} agree to level {2 * min(pa, pb)}")

        d = self._zeta_shift(claim, depth)
        if d is not None:
            return d
        d = self._e2e_peel(claim, depth)
        if d is not None:
            return d

        if lvl <= Ordinal.from_int(2):
            sa, sb = succ_sup(a), succ_sup(b)
            if (sa is INFINITE and sb is INFINITE
                    and _endpoint_free(a) and _endpoint_free(b)):
                return Derivation(claim, "proved", "gr-equiv2",
                                  note="no endpoints and unbounded successive runs on both sides")
            if isinstance(a, Shuffle) and isinstance(b, Shuffle):
                if sa is not None and sb is not None and _card_ge(sa, sb):
                    return Derivation(claim, "proved", "shuffle-sup",
                                      note="every run length of the upper shuffle occurs in the lower one")

        if depth > 0:
            d = self._products(claim, depth)
            if d is not None:
                return d
            d = self._sums(claim, depth)
            if d is not None:
                return d

        return Derivation(claim, "unknown")

    def _zeta_shift(self, claim: LeClaim, depth: int) -> Derivation | None:
        ba, ra = _zp_split(claim.lower)
        bb, rb = _zp_split(claim.upper)
        if ba != bb or ba < ONE:
            return None
        if is_empty(ra) or is_empty(rb):
            return None
        shift = cnf_double(ba)
        rest_lvl = cnf_left_subtract(shift, claim.level)
        if rest_lvl is None or rest_lvl.is_zero:
            return Derivation(claim, "proved", "zeta-shift",
                              note=f"level at most {render_ordinal(shift)} needs no premise")
        if depth <= 0:
            return None
        premise = self.derive(LeClaim(ra, rb, rest_lvl), depth - 1)
        if premise.verdict == "proved":
            return Derivation(claim, "proved", "zeta-shift", [premise])
        return None

    def _e2e_peel(self, claim: LeClaim, depth: int) -> Derivation | None:
        ra, rb = _e2e_split(claim.lower), _e2e_split(claim.upper)
        if ra is None or rb is None or is_empty(ra) or is_empty(rb):
            return None
        rest_lvl = cnf_left_subtract(ONE, claim.level)
        if rest_lvl is None or rest_lvl.is_zero:
            return Derivation(claim, "proved", "e2e-peel", note="level 1 needs no premise")
        if depth <= 0:
            return None
        premise = self.derive(LeClaim(ra, rb, rest_lvl), depth - 1)
        if premise.verdict == "proved":
            return Derivation(claim, "proved", "e2e-peel", [premise])
        return None

    def _products(self, claim: LeClaim, depth: int) -> Derivation | None:
        a, b = claim.lower, claim.upper
        if not (isinstance(a, Product) and isinstance(b, Product)):
            return None
        if term_key(a.right) == term_key(b.right):
            premise = self.derive(LeClaim(a.left, b.left, claim.level), depth - 1)
            if premise.verdict == "proved":
                return Derivation(claim, "proved", "prod-copies", [premise],
                                  note="common index order, compose copy strategies")
        if term_key(a.left) == term_key(b.left):
            premise = self.derive(LeClaim(a.right, b.right, claim.level), depth - 1)
            if premise.verdict == "proved":
                return Derivation(claim, "proved", "prod-index", [premise],
                                  note="isomorphic play on the copy coordinate")
        return None

    def _sums(self, claim: LeClaim, depth: int) -> Derivation | None:
        a, b = claim.lower, claim.upper
        pa = list(a.parts) if isinstance(a, Sum) else [a]
        pb = list(b.parts) if isinstance(b, Sum) else [b]
        if len(pa) == len(pb) and len(pa) > 1:
            premises = []
            for x, y in zip(pa, pb):
                pr = self.derive(LeClaim(x, y, claim.level), depth - 1)
                if pr.verdict != "proved":
                    premises = None
                    break
                premises.append(pr)
            if premises is not None:
                return Derivation(claim, "proved", "sum-compose", premises)
        # group the longer side's parts into consecutive chunks, one per
        # part of the shorter side; every chunk must dominate its target
        if len(pa) > len(pb) >= 1 and len(pa) > 1:
            return self._grouped(claim, pa, pb, depth, lower_grouped=True)
        if len(pb) > len(pa) >= 1 and len(pb) > 1:
            return self._grouped(claim, pb, pa, depth, lower_grouped=False)
        return None

    def _grouped(self, claim: LeClaim, long: list, short: list,
                 depth: int, lower_grouped: bool) -> Derivation | None:
        from itertools import combinations

        m, n = len(long), len(short)
        budget = 50 * max(1, depth)
        tried = 0
        for cuts in combinations(range(1, m), n - 1):
            if tried >= budget:
                break
            tried += 1
            bounds = (0,) + cuts + (m,)
            groups = [normalize(Sum(tuple(long[bounds[i]:bounds[i + 1]])))
                      for i in range(n)]
            premises = []
            for g, s in zip(groups, short):
                lo, up = (g, s) if lower_grouped else (s, g)
                pr = self.derive(LeClaim(lo, up, claim.level), depth - 1)
                if pr.verdict != "proved":
                    premises = None
                    break
                premises.append(pr)
            if premises is not None:
                return Derivation(claim, "proved", "partition", premises,
                                  note="cut the longer sum at matching part boundaries")
        return None


def derive_le(claim: LeClaim, depth: int = 3) -> Derivation:
    return _Prover(depth).derive(claim, depth)


# --- the refuter ---


def _refuted(claim: LeClaim, rule: str, witness: Formula, tag: tuple,
             premises: list | None = None) -> Derivation:
    level, _ = qrank(witness)
    if not level <= claim.level:
        raise ContradictionError(
            f"witness for {rule} exceeds level {render_ordinal(claim.level)}")
    return Derivation(claim, "refuted", rule, premises or [], witness, tag)


def refute_le(claim: LeClaim) -> Derivation:
    a, b, lvl = claim.lower, claim.upper, claim.level
    two, three = Ordinal.from_int(2), Ordinal.from_int(3)
    ca, cb = cardinality(a), cardinality(b)

    if ca is not INFINITE and not _card_ge(ca, cb):
        return _refuted(claim, "card-atleast", card_at_least(ca + 1), ("card_ge", ca + 1))
    if lvl >= two and cb is not INFINITE and ca != cb:
        return _refuted(claim, "exact-card", exact_card(cb), ("card_eq", cb))
    if lvl >= two and has_greatest(b) and not has_greatest(a):
        return _refuted(claim, "has-greatest", library("hasgreatest"), ("has_greatest",))
    if lvl >= two and has_least(b) and not has_least(a):
        return _refuted(claim, "has-least", library("hasleast"), ("has_least",))

    if lvl >= two:
        sa, sb = succ_sup(a), succ_sup(b)
        if sa is not None and sb is not None and sa is not INFINITE and not _card_ge(sa, sb):
            n = sa + 1
            return _refuted(claim, "succ-run", succ_chain(n), ("succ", n))

    if lvl >= three:
        try:
            ka, kb = bk_set(a), bk_set(b)
        except UnsupportedTermError:
            ka = kb = None
        if ka is not None:
            for n in kb.members_upto(64):
                if not ka.contains(n):
                    return _refuted(claim, "bk-member", bk_contains(n), ("bk", n))

    ra, rb = _e2e_split(a), _e2e_split(b)
    if ra is not None and rb is not None:
        rest_lvl = cnf_left_subtract(ONE, lvl)
        if rest_lvl is not None and rest_lvl >= ONE:
            inner = refute_le(LeClaim(ra, rb, rest_lvl))
            if inner.verdict == "refuted":
                return _refuted(claim, "e2e-transfer",
                                translate_eta2eta(inner.witness),
                                ("e2e_translate", inner.witness_tag), [inner])

    ba, ra = _zp_split(a)
    bb, rb = _zp_split(b)
    if ba == bb and ba >= ONE:
        rest_lvl = cnf_left_subtract(cnf_double(ba), lvl)
        if rest_lvl is not None and rest_lvl >= ONE:
            inner = refute_le(LeClaim(ra, rb, rest_lvl))
            if inner.verdict == "refuted":
                return _refuted(claim, "zeta-power-transfer",
                                translate_zeta_power(inner.witness, ba),
                                ("zp_translate", ba, inner.witness_tag), [inner])

    return Derivation(claim, "unknown")


def check_witness(tag: tuple, t: Term) -> bool:
    """Symbolic truth of a tagged separating sentence in a term."""
    t = normalize(t)
    kind = tag[0]
    if kind == "has_least":
        return has_least(t)
    if kind == "has_greatest":
        return has_greatest(t)
    if kind == "card_ge":
        return _card_ge(cardinality(t), tag[1])
    if kind == "card_eq":
        return cardinality(t) == tag[1]
    if kind == "succ":
        s = succ_sup(t)
        if s is None:
            raise UnsupportedTermError("run lengths not certified here")
        return _card_ge(s, tag[1])
    if kind == "bk":
        return bk_set(t).contains(tag[1])
    if kind == "zp_translate":
        beta, rest = _zp_split(t)
        if beta != tag[1]:
            raise UnsupportedTermError("term is not a matching zeta-power product")
        return check_witness(tag[2], rest)
    if kind == "e2e_translate":
        rest = _e2e_split(t)
        if rest is None:
            raise UnsupportedTermError("term has no dense-pair left factor")
        return check_witness(tag[1], rest)
    raise ValueError(f"unknown witness tag {tag!r}")


def decide_le(claim: LeClaim, depth: int = 3) -> Derivation:
    refutation = refute_le(claim)
    proof = derive_le(claim, depth)
    if refutation.verdict == "refuted" and proof.verdict == "proved":
        raise ContradictionError(
            f"both engines fired on {render(claim.lower)} <=_{render_ordinal(claim.level)} "
            f"{render(claim.upper)}: proof rule {proof.rule}, refutation rule {refutation.rule}")
    if refutation.verdict == "refuted":
        return refutation
    if proof.verdict == "proved":
        return proof
    return Derivation(claim, "unknown")


# --- the brute-force game ---


def brute_ef_le(a, b, n: int, cap: int = 8) -> bool:
    """Exact n-round game value on complete finite presentations.

    Answers whether every Sigma_n sentence true in b holds in a.  The
    adversary plays whole remaining structures each round, which is
    optimal on finite orders.
    """
    if n < 0 or n > 4:
        raise ValueError("game depth must be between 0 and 4")
    for p in (a, b):
        if not p._exhausted:
            raise ValueError("presentations must be complete")
        if p.size > cap:
            raise ValueError(f"size cap {cap} exceeded")

    ra = {i: r for i, r in enumerate(a.rank_array())}
    rb = {i: r for i, r in enumerate(b.rank_array())}
    memo: dict = {}

    def play(low_ranks, up_ranks, low_all, up_all, rounds) -> bool:
        # alignment: tuples of equal length, position i of low matched to i of up
        for i in range(len(low_ranks)):
            for j in range(i + 1, len(low_ranks)):
                da = (low_ranks[i] > low_ranks[j]) - (low_ranks[i] < low_ranks[j])
                db = (up_ranks[i] > up_ranks[j]) - (up_ranks[i] < up_ranks[j])
                if da != db:
                    return False
        if rounds == 0:
            return True
        key = (rounds, tuple(sorted(zip(low_ranks, up_ranks))), low_all, up_all)
        if key in memo:
            return memo[key]
        fresh = sorted(set(range(up_all)) - set(up_ranks))
        if not fresh:
            out = play(up_ranks, low_ranks, up_all, low_all, rounds - 1)
            memo[key] = out
            return out
        pool = sorted(set(range(low_all)) - set(low_ranks))
        out = False
        for answer in _embeddings(fresh, pool, list(zip(up_ranks, low_ranks))):
            nxt_up = up_ranks + tuple(fresh)
            nxt_low = low_ranks + tuple(answer)
            if play(nxt_up, nxt_low, up_all, low_all, rounds - 1):
                out = True
                break
        memo[key] = out
        return out

    return play((), (), a.size, b.size, n)


def _embeddings(fresh: list, pool: list, aligned: list):
    """Order-embeddings of `fresh` into `pool` consistent with aligned pairs."""
    from itertools import combinations

    if len(fresh) > len(pool):
        return
    for combo in combinations(pool, len(fresh)):
        ok = True
        for f, c in zip(fresh, combo):
            for src, dst in aligned:
                if (f < src) != (c < dst) or (f > src) != (c > dst):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield combo


__all__ = [
    "ContradictionError",
    "LeClaim",
    "Derivation",
    "derive_le",
    "refute_le",
    "decide_le",
    "check_witness",
    "brute_ef_le",
    "succ_sup",
]
