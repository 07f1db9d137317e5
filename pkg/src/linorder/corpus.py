"""Curated term corpora and randomized case generators.

The fixed lists back the property suites: every entry is supported by
the finder it is aimed at, and the suites assert that wholesale.  The
randomized generators stay inside the fragment the symbolic catalogs
cover, so an exception during a sweep is a finding, not noise.
"""

from __future__ import annotations

import hashlib
import random
from typing import Iterator

from .condense import bk_set
from .elementarity import (NotApplicableError, check_sigma1,
                           descriptor_dense_set, find_sigma1_sub,
                           find_sigma2_sub, sample_check_elementarity)
from .formulas import (And, Eq, Exists, Forall, Less, Not, Or, Formula,
                       qrank, translate_eta2eta, translate_zeta_power)
from .games import ContradictionError, LeClaim, decide_le
from .intervals import pred_of, succ_of
from .ordinals import Ordinal, cnf_add, cnf_double
from .parser import parse
from .presentations import Presentation, density_of
from .ramsey import (FiniteRelStructure, RelationalSignature,
                     extract_monochromatic, homogeneity_violations, qf_type)
from .render import render
from .terms import (ExplicitSet, EtaRep, Finite, PreconditionError, Product,
                    Shuffle, Sum, Term, UnsupportedTermError, ZetaRep,
                    normalize)

# --- fixed corpora -----------------------------------------------------------

# 50 terms, every one accepted by the level-1 finder, targets spread over
# the whole catalog {zeta, omega, omega*, omega.omega*, omega*.omega, eta}
SIGMA1_SOURCES: tuple[str, ...] = (
    "zeta", "zeta.omega", "1 + zeta", "zeta + 3", "omega* + omega",
    "omega*.3 + omega", "zeta^2", "zetarep[1,2]", "zetarep[2:3]",
    "zeta + eta", "zeta.eta", "omega + zeta + omega*",
    "omega", "2 + omega", "omega + omega*", "omega + 3", "omega + omega",
    "omega.3", "omega + eta", "omega + shuffle{2}", "omega + eta + omega*",
    "omega*", "3 + omega*", "eta + omega*", "shuffle{1} + omega*",
    "omega.omega* + omega*",
    "omega.omega*", "omega.omega* + 3", "omega.omega* + omega*.omega",
    "3 + omega.omega*", "(omega.omega*).2", "eta + omega.omega*",
    "omega*.omega", "2 + omega*.omega", "omega*.omega + 3",
    "omega*.omega + omega",
    "eta", "1 + eta", "2 + eta", "eta + 2 + eta", "shuffle{1}",
    "shuffle{2}", "shuffle{3}", "shuffle{1,2}", "shuffle{1,2,3}",
    "2 + shuffle{1}", "etarep[1,2]", "etarep[2,3]", "etarep[1,2,3]",
    "etarep[1:1]",
)

# 30 scattered terms, every one accepted by the level-2 finder
SIGMA2_SOURCES: tuple[str, ...] = (
    "omega", "omega*", "zeta", "omega + omega*", "omega + omega",
    "omega + 3", "3 + omega*", "2 + zeta + 3", "omega.omega* + 3",
    "2 + omega*.omega", "omega.omega*", "omega*.omega", "zeta.omega",
    "omega + zeta", "zeta + 3", "1 + zeta", "zeta + omega*",
    "omega + zeta + omega*", "omega.3", "omega*.2",
    "omega.omega* + omega*.omega", "zeta^2", "zeta.3", "2 + omega.omega*",
    "omega*.omega + 4", "3 + zeta + omega", "omega + 2 + omega*",
    "zeta + omega", "4 + omega.omega*", "omega*.omega + omega",
)

# pairs with matching finder targets, accepted by coarse_copy
COARSE_PAIR_SOURCES: tuple[tuple[str, str], ...] = (
    ("shuffle{3}", "shuffle{1,3}"),
    ("shuffle{2}", "shuffle{1,2}"),
    ("omega + 2", "omega + 2"),
    ("omega", "2 + omega"),
    ("omega*", "omega*"),
    ("omega* + omega", "omega* + omega"),
    ("omega.omega*", "(omega.omega*).2"),
    ("omega.omega* + 3", "omega.omega* + 3"),
    ("zeta.omega", "zeta.3"),
    ("etarep[1:1]", "shuffle{1,2}"),
)

# 20 explicit finite block-size sets for the set-built families
BLOCK_SETS: tuple[tuple[int, ...], ...] = (
    (1,), (2,), (3,), (4,), (5,), (6,),
    (1, 2), (1, 3), (2, 3), (2, 4), (3, 5), (1, 4),
    (1, 2, 3), (2, 3, 5), (1, 3, 5), (1, 6), (2, 6), (3, 6),
    (1, 2, 4), (2, 5),
)


def sigma1_corpus() -> list[Term]:
    return [normalize(parse(s)) for s in SIGMA1_SOURCES]


def sigma2_corpus() -> list[Term]:
    return [normalize(parse(s)) for s in SIGMA2_SOURCES]


def coarse_pair_corpus() -> list[tuple[Term, Term]]:
    return [(normalize(parse(a)), normalize(parse(b)))
            for a, b in COARSE_PAIR_SOURCES]


def stability_corpus() -> list[Term]:
    """Union of the two finder corpora, deduplicated, order preserved."""
    seen: dict[str, Term] = {}
    for t in sigma1_corpus() + sigma2_corpus():
        seen.setdefault(render(t), t)
    return list(seen.values())


def block_set_corpus() -> list[ExplicitSet]:
    return [ExplicitSet(vs) for vs in BLOCK_SETS]


def set_built_terms(spec: ExplicitSet) -> list[tuple[str, Term, set[int]]]:
    """(family, term, defining block-size set) for one explicit set.

    The dense filler of the eta-interleaved family contributes singleton
    blocks, so its defining set picks up 1.
    """
    a = set(spec.values)
    return [
        ("shuffle", normalize(Shuffle(tuple(Finite(v) for v in sorted(a)))), a),
        ("etarep", normalize(EtaRep(spec)), a | {1}),
        ("zetarep", normalize(ZetaRep(spec)), a),
    ]


# --- randomized generators ---------------------------------------------------

_GAME_ATOMS: tuple[str, ...] = (
    "1", "2", "3", "omega", "omega*", "zeta", "eta",
    "shuffle{1}", "shuffle{1,2}", "shuffle{2,3}", "etarep[1,2]",
    "omega.omega*", "omega*.omega", "zeta^2",
)
_GAME_FACTORS: tuple[str, ...] = ("2", "3", "omega", "omega*")


def random_term(rng: random.Random, depth: int = 2) -> Term:
    """Random term inside the fragment the symbolic game catalog covers."""
    if depth == 0 or rng.random() < 0.4:
        return normalize(parse(rng.choice(_GAME_ATOMS)))
    r = rng.random()
    if r < 0.55:
        parts = tuple(random_term(rng, depth - 1)
                      for _ in range(rng.choice((2, 3))))
        return normalize(Sum(parts))
    if r < 0.8:
        left = random_term(rng, depth - 1)
        return normalize(Product(left, normalize(parse(rng.choice(_GAME_FACTORS)))))
    return normalize(parse(rng.choice(_GAME_ATOMS)))


def random_pairs(count: int = 1000, seed: int = 0) -> list[tuple[Term, Term]]:
    rng = random.Random(seed)
    return [(random_term(rng), random_term(rng)) for _ in range(count)]


def random_formula(rng: random.Random, depth: int = 3,
                   vars_: tuple[str, ...] = ("x", "y")) -> Formula:
    """Random formula with at least one quantifier."""
    f = _rand_formula(rng, depth, list(vars_))
    while not _has_quantifier(f):
        f = _rand_formula(rng, depth, list(vars_))
    return f


def _rand_formula(rng: random.Random, depth: int, vars_: list) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        a, b = rng.choice(vars_), rng.choice(vars_)
        return Less(a, b) if rng.random() < 0.7 else Eq(a, b)
    r = rng.random()
    if r < 0.2:
        return Not(_rand_formula(rng, depth - 1, vars_))
    if r < 0.4:
        return And(tuple(_rand_formula(rng, depth - 1, vars_) for _ in range(2)))
    if r < 0.6:
        return Or(tuple(_rand_formula(rng, depth - 1, vars_) for _ in range(2)))
    v = rng.choice(("x", "y", "z", "u"))
    body = _rand_formula(rng, depth - 1, vars_ + [v])
    return Exists(v, body) if r < 0.8 else Forall(v, body)


def _has_quantifier(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return True
    if isinstance(f, Not):
        return _has_quantifier(f.body)
    if isinstance(f, (And, Or)):
        return any(_has_quantifier(p) for p in f.parts)
    return False


def formula_corpus(count: int = 200, seed: int = 7) -> list[Formula]:
    rng = random.Random(seed)
    return [random_formula(rng, rng.randrange(1, 5)) for _ in range(count)]


TRIPLE_SIG = RelationalSignature((("R", 3),))


class HashedTripleSystem(FiniteRelStructure):
    """Symmetric irreflexive random 3-relation on a large universe.

    Membership is decided per sorted triple by a keyed hash, so nothing
    near size^3 is ever materialized and two instances with the same
    seed agree everywhere.
    """

    def __init__(self, size: int, seed: int):
        self.sig = TRIPLE_SIG
        self.size = size
        self.seed = seed
        self.tables = {"R": frozenset()}

    def holds(self, name: str, t: tuple) -> bool:
        if name != "R":
            raise KeyError(name)
        if len(set(t)) != len(t):
            return False
        key = f"{self.seed}:{sorted(t)}".encode()
        return hashlib.md5(key).digest()[0] & 1 == 1


def random_triple_system(size: int = 2000, seed: int = 0) -> HashedTripleSystem:
    return HashedTripleSystem(size, seed)


# --- empirical block measurement ---------------------------------------------

def sampled_block_sizes(t: Term, stage: int, walk_cap: int = 32) -> set[int]:
    """Sizes of the finite blocks realized among the first ``stage``
    enumerated elements, measured by bounded successor walks on
    addresses.  Blocks wider than ``walk_cap`` are treated as infinite
    and skipped."""
    p = Presentation.build(t, stage)
    sizes: set[int] = set()
    visited: set[str] = set()
    for i in range(p.size):
        cur = p.addr(i)
        steps = 0
        overran = False
        while True:
            prev = pred_of(t, cur)
            if prev is None:
                break
            cur = prev
            steps += 1
            if steps > walk_cap:
                overran = True
                break
        if overran:
            continue
        key = repr(cur)
        if key in visited:
            continue
        visited.add(key)
        size = 1
        while True:
            nxt = succ_of(t, cur)
            if nxt is None:
                break
            cur = nxt
            size += 1
            if size > walk_cap:
                overran = True
                break
        if not overran:
            sizes.add(size)
    return sizes


# --- invariant suite runner --------------------------------------------------

def _suite_terms(rng: random.Random, n: int) -> tuple[int, list[str]]:
    bad = []
    for i in range(n):
        t = random_term(rng)
        if normalize(t) != t:
            bad.append(f"normalize not idempotent: {render(t)}")
        back = normalize(parse(render(t)))
        if back != t:
            bad.append(f"render/parse round trip: {render(t)}")
    return n, bad


def _suite_blocks(stage: int) -> tuple[int, list[str]]:
    bad = []
    cases = 0
    for spec in block_set_corpus()[:6]:
        for family, t, defining in set_built_terms(spec):
            cases += 1
            got = set(bk_set(t).members_upto(64))
            if got != defining:
                bad.append(f"bk {family}{spec!r}: {sorted(got)} != {sorted(defining)}")
            seen = sampled_block_sizes(t, stage)
            if not seen <= defining:
                bad.append(f"census {family}{spec!r}: stray sizes {sorted(seen - defining)}")
    return cases, bad


def _suite_games(rng: random.Random, n: int) -> tuple[int, list[str]]:
    bad = []
    for i in range(n):
        a, b = random_term(rng), random_term(rng)
        for level in (1, 2):
            try:
                decide_le(LeClaim(a, b, level))
            except ContradictionError as e:
                bad.append(f"contradiction {render(a)} <={level} {render(b)}: {e}")
            except (UnsupportedTermError, PreconditionError):
                pass
    return n, bad


def _suite_sigma1() -> tuple[int, list[str]]:
    bad = []
    targets = {"zeta", "omega", "omega*", "omega.omega*", "omega*.omega", "eta"}
    for t in sigma1_corpus():
        try:
            d = find_sigma1_sub(t)
        except (NotApplicableError, UnsupportedTermError) as e:
            bad.append(f"finder failed on {render(t)}: {e}")
            continue
        if render(d.target_type) not in targets:
            bad.append(f"target off catalog for {render(t)}: {render(d.target_type)}")
        if not check_sigma1(t, d):
            bad.append(f"certification failed on {render(t)}")
    return len(SIGMA1_SOURCES), bad


def _suite_sigma2() -> tuple[int, list[str]]:
    bad = []
    for t in sigma2_corpus():
        try:
            d = find_sigma2_sub(t)
        except (NotApplicableError, UnsupportedTermError) as e:
            bad.append(f"finder failed on {render(t)}: {e}")
            continue
        if not check_sigma1(t, d):
            bad.append(f"certification failed on {render(t)}")
    try:
        find_sigma2_sub(normalize(parse("shuffle{1,2}")))
        bad.append("shuffle{1,2} was not rejected")
    except NotApplicableError:
        pass
    return len(SIGMA2_SOURCES) + 1, bad


def _suite_stability(sources: list[Term], first: int,
                     checkpoints: tuple[int, ...]) -> tuple[int, list[str]]:
    bad = []
    for t in sources:
        p = Presentation.build(t, checkpoints[0])
        m = min(first, p.size)
        base = [[p.less(i, j) for j in range(i + 1, m)] for i in range(m)]
        for s in checkpoints[1:]:
            p.extend(s)
            again = [[p.less(i, j) for j in range(i + 1, m)] for i in range(m)]
            if again != base:
                bad.append(f"comparison flip in {render(t)} at stage {s}")
    return len(sources), bad


def _suite_density() -> tuple[int, list[str]]:
    from fractions import Fraction
    from .density import Enumeration, interval_density
    bad = []
    rb = Enumeration.reverse_binary()
    rep = interval_density(rb, Fraction(1, 4), Fraction(3, 8), 1 << 12)
    if abs(rep.value - Fraction(1, 8)) > Fraction(1, 50):
        bad.append(f"reverse-binary density off: {rep.value}")
    ll = Enumeration.length_then_lex()
    firsts = [ll.item(k) for k in range(7)]
    if firsts != [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4),
                  Fraction(1, 8), Fraction(3, 8), Fraction(5, 8),
                  Fraction(7, 8)]:
        bad.append(f"length-then-lex prefix off: {firsts}")
    vals = {rb.item(k) for k in range(512)}
    if len(vals) != 512:
        bad.append("reverse-binary enumeration is not injective on 512")
    return 3, bad


def _suite_ramsey(rng: random.Random, masks: int) -> tuple[int, list[str]]:
    import itertools
    bad = []
    sig = RelationalSignature((("E", 2),))
    pairs = list(itertools.combinations(range(6), 2))
    for _ in range(masks):
        mask = rng.randrange(1 << 15)
        table = frozenset((a, b) for k, (a, b) in enumerate(pairs)
                          if (mask >> k) & 1) | \
                frozenset((b, a) for k, (a, b) in enumerate(pairs)
                          if (mask >> k) & 1)
        s = FiniteRelStructure(sig, 6, {"E": table})
        res = extract_monochromatic(s, 3)
        if len(res.subset) < 3 or homogeneity_violations(s, res.subset):
            bad.append(f"K6 mask {mask}: no monochromatic triple certified")
    s3 = random_triple_system(300, seed=rng.randrange(10**6))
    res = extract_monochromatic(s3, 4)
    if len(res.subset) < 4 or homogeneity_violations(s3, res.subset):
        bad.append("triple-system extraction failed at size 300")
    return masks + 1, bad


def _suite_copies() -> tuple[int, list[str]]:
    from fractions import Fraction
    from .copies import coarse_copy, generic_copy
    bad = []
    t = normalize(parse("shuffle{3}"))
    sub = find_sigma1_sub(t)
    p, spec = generic_copy(t, sub)
    p.extend(2000)
    if density_of(spec, 2000) < Fraction(95, 100):
        bad.append("generic copy density below 0.95 at 2000")
    if not all(spec.membership(i) == sub.owns(p.addr(i)) for i in range(400)):
        bad.append("generic copy membership mismatch on prefix")
    a, b = coarse_pair_corpus()[0]
    p1, p2, dspec = coarse_copy(a, find_sigma1_sub(a), b, find_sigma1_sub(b))
    p1.extend(150)
    p2.extend(150)
    dids = [i for i in range(150) if dspec.membership(i)]
    if not all(p1.less(i, j) == p2.less(i, j)
               for i in dids for j in dids if i != j):
        bad.append("coarse pair disagrees on an enumerated pair")
    return 2, bad


def _suite_formulas(rng: random.Random, n: int) -> tuple[int, list[str]]:
    bad = []
    for _ in range(n):
        f = random_formula(rng, rng.randrange(1, 5))
        lvl, kind = qrank(f)
        for b in (1, 2):
            beta = Ordinal.from_int(b)
            lv2, kd2 = qrank(translate_zeta_power(f, beta))
            if lv2 != cnf_add(cnf_double(beta), lvl) or kd2 != kind:
                bad.append("zeta-power rank law broken")
        lv3, kd3 = qrank(translate_eta2eta(f))
        if lv3 != cnf_add(Ordinal.from_int(1), lvl) or kd3 != kind:
            bad.append("eta rank law broken")
    return n, bad


def run_suite(seed: int = 0, scale: float = 1.0) -> dict:
    """Execute the module invariant suites; the payload lists every
    violation found.  ``scale`` stretches or shrinks the randomized
    case counts."""
    rng = random.Random(seed)
    k = lambda n: max(1, int(n * scale))
    stability_terms = sigma1_corpus()[:k(6)]
    suites = [
        ("terms", lambda: _suite_terms(rng, k(60))),
        ("blocks", lambda: _suite_blocks(k(1200))),
        ("games", lambda: _suite_games(rng, k(150))),
        ("sigma1", _suite_sigma1),
        ("sigma2", _suite_sigma2),
        ("stability", lambda: _suite_stability(
            stability_terms, k(120), (k(120), k(360)))),
        ("density", _suite_density),
        ("ramsey", lambda: _suite_ramsey(rng, k(400))),
        ("copies", _suite_copies),
        ("formulas", lambda: _suite_formulas(rng, k(40))),
    ]
    out: dict = {"seed": seed, "suites": [], "ok": True}
    for name, fn in suites:
        cases, bad = fn()
        out["suites"].append(
            {"name": name, "cases": cases, "violations": bad})
        if bad:
            out["ok"] = False
    return out


__all__ = [
    "BLOCK_SETS", "COARSE_PAIR_SOURCES", "HashedTripleSystem",
    "SIGMA1_SOURCES", "SIGMA2_SOURCES", "TRIPLE_SIG", "block_set_corpus",
    "coarse_pair_corpus", "formula_corpus", "random_formula", "random_pairs",
    "random_term", "random_triple_system", "run_suite",
    "sampled_block_sizes", "set_built_terms", "sigma1_corpus",
    "sigma2_corpus", "stability_corpus",
]
