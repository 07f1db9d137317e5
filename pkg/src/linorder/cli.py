"""Command-line front end.

Every command is a thin wrapper over a library call and emits one JSON
document on stdout.  ``present`` and ``le`` default to a small
human-readable view and switch to the full payload with --json; all
other commands always emit JSON.

Exit codes: 0 success, 1 parse error, 2 unsupported fragment,
3 precondition violation, 4 internal contradiction.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .condense import bk_set, condense_one
from .copies import coarse_copy, generic_copy
from .corpus import run_suite
from .density import Enumeration, interval_density
from .elementarity import (descriptor_dense_set, every_other_eta,
                           find_sigma1_sub, find_sigma2_sub,
                           sample_check_elementarity)
from .formulas import (formula_text, parse_formula, rank_text,
                       translate_eta2eta, translate_zeta_power)
from .games import ContradictionError, LeClaim, brute_ef_le, decide_le
from .ordinals import Ordinal, OrdinalSyntaxError, parse_ordinal
from .parser import ParseError, parse
from .presentations import (DenseSetSpec, Presentation, all_naturals,
                            cofinite_complement, density_of, non_squares)
from .ramsey import (FiniteRelStructure, RelationalSignature,
                     emit_generic_copy, extract_monochromatic, required_size)
from .render import render
from .terms import (ArithmeticSet, ETA, ExplicitSet, EtaRep, Finite, OMEGA,
                    PreconditionError, Product, Sum, Term,
                    UnsupportedTermError, ZetaPower, normalize, shuffle_of,
                    to_json as term_json)

# --- named constructions -----------------------------------------------------

def _parse_setspec(text: str):
    text = text.strip().strip("{}")
    if ":" in text:
        start, step = text.split(":", 1)
        return ArithmeticSet(int(start), int(step))
    return ExplicitSet(tuple(sorted({int(v) for v in text.split(",")})))


def build_named(name: str, set_spec, order: Term, gamma: int) -> Term:
    """One-line builders for the hardness gadgets.

    gen_gadget: zeta^b . (Sh(A)+omega) . L   for gamma = 2b+2,
    with an (eta+2+eta) factor spliced before the core when gamma = 2b+3.
    coa_gadget replaces Sh(A) by the eta-interleaved block order of A.
    """
    if name == "limit_gadget":
        raise UnsupportedTermError("limit-level gadgets are out of scope")
    if name not in ("gen_gadget", "coa_gadget"):
        raise PreconditionError(f"unknown construction {name!r}")
    if gamma < 2:
        raise PreconditionError("gamma starts at 2")
    beta, odd = divmod(gamma - 2, 2)
    if name == "gen_gadget":
        if not isinstance(set_spec, ExplicitSet):
            raise UnsupportedTermError(
                "shuffles of infinite size sets are outside the term fragment")
        core = Sum((shuffle_of(tuple(Finite(v) for v in set_spec.values)),
                    OMEGA))
    else:
        core = Sum((EtaRep(set_spec), OMEGA))
    chain: list[Term] = []
    if beta:
        chain.append(ZetaPower(Ordinal.from_int(beta)))
    if odd:
        chain.append(Sum((ETA, Finite(2), ETA)))
    chain.append(core)
    chain.append(order)
    t = chain[0]
    for nxt in chain[1:]:
        t = Product(t, nxt)
    return normalize(t)


# --- payload builders --------------------------------------------------------

def _term(args_expr: str) -> Term:
    return normalize(parse(args_expr))


def _cmd_parse(a) -> dict:
    t = _term(a.expr)
    return {"term": render(t), "tree": term_json(t)}


def _cmd_normalize(a) -> dict:
    t = _term(a.expr)
    return {"term": render(t)}


def _cmd_blocks(a) -> dict:
    co = condense_one(_term(a.expr))
    return {"blocks": co["census"], "quotient": co["quotient"],
            "bk": co["bk"], "first_block": co["first_block"],
            "last_block": co["last_block"], "n_blocks": co["n_blocks"]}


def _cmd_bk(a) -> dict:
    return {"bk": bk_set(_term(a.expr)).to_json()}


def _cmd_present(a):
    p = Presentation.build(_term(a.expr), a.stage)
    if not a.json:
        lines = [f"n={p.size}"]
        ids = p.sorted_ids()
        lines.append("order: " + " < ".join(str(i) for i in ids))
        return "\n".join(lines)
    return p.to_json()


def _cmd_le(a):
    d = decide_le(LeClaim(_term(a.lower), _term(a.upper), a.level),
                  depth=a.depth)
    if not a.json:
        out = [f"{render(d.conclusion.lower)} <=_{a.level} "
               f"{render(d.conclusion.upper)}: {d.verdict}"]
        if d.rule:
            out.append(f"rule: {d.rule}")
        if d.witness is not None:
            out.append(f"witness: {formula_text(d.witness)}")
        return "\n".join(out)
    return d.to_json()


def _cmd_ef(a) -> dict:
    pa = Presentation.build(_term(a.lower), a.cap + 2)
    pb = Presentation.build(_term(a.upper), a.cap + 2)
    verdict = brute_ef_le(pa, pb, a.level, cap=a.cap)
    return {"lower": render(pa.term), "upper": render(pb.term),
            "level": a.level, "le": verdict}


def _cmd_sigma1(a) -> dict:
    return find_sigma1_sub(_term(a.expr)).to_json()


def _cmd_sigma2(a) -> dict:
    return find_sigma2_sub(_term(a.expr)).to_json()


def _cmd_check_sub(a) -> dict:
    t = _term(a.expr)
    if a.selector == "sigma1":
        d = find_sigma1_sub(t)
    elif a.selector == "sigma2":
        d = find_sigma2_sub(t)
    else:
        d = every_other_eta()
        if render(t) != "eta":
            raise PreconditionError(
                "the every-other selector is defined on eta only")
    p = Presentation.build(t, a.stage)
    spec = descriptor_dense_set(p, d)
    rep = sample_check_elementarity(p, spec, level=a.level, stage=a.stage,
                                    samples=a.samples, seed=a.seed)
    return {"term": render(t), "selector": a.selector,
            "target": render(d.target_type), "report": rep}


def _copy_payload(p: Presentation, spec: DenseSetSpec, n: int) -> dict:
    out = p.to_json()
    out["D"] = [i for i in range(p.size) if spec.membership(i)]
    marks = [max(1, n // 4), max(1, n // 2), max(1, (3 * n) // 4), max(1, n)]
    out["rho"] = [str(density_of(spec, m)) for m in dict.fromkeys(marks)]
    return out


def _cmd_gen_copy(a) -> dict:
    t = _term(a.expr)
    sub = find_sigma1_sub(t)
    p, spec = generic_copy(t, sub)
    p.extend(a.stage)
    out = _copy_payload(p, spec, a.stage)
    out["target"] = render(sub.target_type)
    return out


def _cmd_coarse_copy(a) -> dict:
    t1, t2 = _term(a.first), _term(a.second)
    p1, p2, spec = coarse_copy(t1, find_sigma1_sub(t1), t2, find_sigma1_sub(t2))
    p1.extend(a.stage)
    p2.extend(a.stage)
    dids = [i for i in range(min(p1.size, p2.size)) if spec.membership(i)]
    agree = all(p1.less(i, j) == p2.less(i, j)
                for i in dids for j in dids if i != j)
    out = {"n": a.stage, "first": p1.to_json(), "second": p2.to_json()}
    out["D"] = dids
    marks = [max(1, a.stage // 2), max(1, a.stage)]
    out["rho"] = [str(density_of(spec, m)) for m in dict.fromkeys(marks)]
    out["agree_on_D"] = agree
    return out


def _cmd_density(a) -> dict:
    e = (Enumeration.reverse_binary() if a.enum == "revbin"
         else Enumeration.length_then_lex())
    lo, hi = Fraction(a.interval[0]), Fraction(a.interval[1])
    window = tuple(a.window) if a.window else (1, a.n)
    return interval_density(e, lo, hi, a.n, window=window).to_json()


def _set_spec(text: str) -> DenseSetSpec:
    if text == "non-squares":
        return non_squares()
    if text == "all":
        return all_naturals()
    if text.startswith("cofinite:"):
        excluded = frozenset(int(v) for v in text[len("cofinite:"):].split(","))
        return cofinite_complement(excluded)
    raise PreconditionError(f"unknown set spec {text!r}")


def _cmd_rho(a) -> dict:
    spec = _set_spec(a.set)
    return {"set": spec.name, "n": a.n, "rho": str(density_of(spec, a.n))}


def _cmd_ramsey(a) -> dict:
    with open(a.signature) as fh:
        sig = RelationalSignature.from_json(json.load(fh))
    with open(a.input) as fh:
        s = FiniteRelStructure.from_json(sig, json.load(fh))
    res = extract_monochromatic(s, a.target)
    pres, _ = emit_generic_copy(s, res.subset, res.type_code,
                                variant=a.variant)
    out = pres.to_json(stage=a.stage)
    out["guaranteed"] = s.size >= required_size(
        sig.type_count(), sig.max_arity, a.target)
    return out


def _cmd_translate(a) -> dict:
    f = parse_formula(a.formula)
    if a.zeta_power is not None:
        beta = parse_ordinal(a.zeta_power)
        g = translate_zeta_power(f, beta)
    elif a.eta2eta:
        g = translate_eta2eta(f)
    else:
        raise PreconditionError("pick --zeta-power <ord> or --eta2eta")
    return {"input": formula_text(f), "input_rank": rank_text(f),
            "output": formula_text(g), "output_rank": rank_text(g)}


def _cmd_gadget(a) -> dict:
    t = build_named(a.name, _parse_setspec(a.set), _term(a.order), a.gamma)
    return {"term": render(t), "tree": term_json(t)}


def _cmd_corpus(a):
    rep = run_suite(seed=a.seed, scale=a.scale)
    return rep


# --- parser ------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="linorder",
        description="symbolic toolkit for countable linear orders")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        return p

    p = add("parse", _cmd_parse, help="parse a term and show its tree")
    p.add_argument("expr")
    p = add("normalize", _cmd_normalize, help="normalized rendering")
    p.add_argument("expr")
    p = add("blocks", _cmd_blocks, help="block decomposition")
    p.add_argument("expr")
    p = add("bk", _cmd_bk, help="finite block-size set")
    p.add_argument("expr")

    p = add("present", _cmd_present, help="enumerate a presentation stage")
    p.add_argument("expr")
    p.add_argument("--stage", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = add("le", _cmd_le, help="decide a level-n comparison claim")
    p.add_argument("lower")
    p.add_argument("upper")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--json", action="store_true")

    p = add("ef", _cmd_ef, help="brute game value on small finite terms")
    p.add_argument("lower")
    p.add_argument("upper")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--cap", type=int, default=8)

    p = add("sigma1-sub", _cmd_sigma1, help="one-quantifier-level substructure")
    p.add_argument("expr")
    p = add("sigma2-sub", _cmd_sigma2, help="two-quantifier-level substructure")
    p.add_argument("expr")

    p = add("check-sub", _cmd_check_sub, help="audit a selection by sampling")
    p.add_argument("expr")
    p.add_argument("--selector", default="sigma1",
                   choices=("sigma1", "sigma2", "every-other-eta"))
    p.add_argument("--level", type=int, default=1, choices=(1, 2))
    p.add_argument("--stage", type=int, default=2000)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)

    p = add("gen-copy", _cmd_gen_copy,
            help="enumeration-dense copy from the level-1 selection")
    p.add_argument("expr")
    p.add_argument("--stage", type=int, required=True)

    p = add("coarse-copy", _cmd_coarse_copy,
            help="two copies agreeing on a shared dense set")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--stage", type=int, required=True)

    p = add("density", _cmd_density, help="interval density of an enumeration")
    p.add_argument("--enum", required=True, choices=("revbin", "lenlex"))
    p.add_argument("--interval", nargs=2, required=True, metavar=("A", "B"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"))

    p = add("rho", _cmd_rho, help="density of a subset of ids")
    p.add_argument("--set", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("ramsey", _cmd_ramsey, help="monochromatic extraction and copy")
    p.add_argument("--signature", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--variant", default="generic",
                   choices=("generic", "coarse"))
    p.add_argument("--stage", type=int, default=12)

    p = add("translate", _cmd_translate, help="formula translators")
    p.add_argument("formula")
    p.add_argument("--zeta-power", dest="zeta_power", metavar="ORD")
    p.add_argument("--eta2eta", action="store_true")

    p = add("gadget", _cmd_gadget, help="named hardness constructions")
    p.add_argument("name")
    p.add_argument("--set", required=True)
    p.add_argument("--order", required=True)
    p.add_argument("--gamma", type=int, required=True)

    p = add("corpus", _cmd_corpus, help="run the module invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0)

    return ap


def _emit(payload) -> None:
    if isinstance(payload, str):
        print(payload)
    else:
        print(json.dumps(payload, indent=2, ensure_ascii=False))


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        payload = args.fn(args)
    except (ParseError, OrdinalSyntaxError, json.JSONDecodeError) as e:
        _emit({"error": type(e).__name__, "detail": str(e)})
        return 1
    except UnsupportedTermError as e:
        _emit({"error": type(e).__name__, "detail": str(e)})
        return 2
    except ContradictionError as e:
        _emit({"error": type(e).__name__, "detail": str(e)})
        return 4
    except (PreconditionError, ValueError, OSError) as e:
        _emit({"error": type(e).__name__, "detail": str(e)})
        return 3
    if args.command == "corpus" and not payload["ok"]:
        _emit(payload)
        return 4
    _emit(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
