"""Concrete syntax for terms, inverse to the parser."""

from __future__ import annotations

from .ordinals import Ordinal, render_ordinal
from .terms import (EtaRep, Eta, Finite, Omega, OmegaStar, Product, Rev,
                    Shuffle, Sum, Term, Zeta, ZetaPower, ZetaRep)

_SUM, _PROD, _ATOM = 0, 1, 2


def render(t: Term) -> str:
    return _render(t, _SUM)


def _render(t: Term, prec: int) -> str:
    if isinstance(t, Finite):
        return str(t.size)
    if isinstance(t, Omega):
        return "omega"
    if isinstance(t, OmegaStar):
        return "omega*"
    if isinstance(t, Zeta):
        return "zeta"
    if isinstance(t, Eta):
        return "eta"
    if isinstance(t, ZetaPower):
        return f"zeta^{_render_exp(t.exp)}"
    if isinstance(t, Sum):
        s = " + ".join(_render(p, _PROD) for p in t.parts)
        return f"({s})" if prec > _SUM else s
    if isinstance(t, Product):
        s = f"{_render(t.left, _PROD)}.{_render(t.right, _ATOM)}"
        return f"({s})" if prec > _PROD else s
    if isinstance(t, Shuffle):
        return "shuffle{" + ", ".join(_render(m, _SUM) for m in t.members) + "}"
    if isinstance(t, EtaRep):
        return f"etarep[{_render_set(t)}]"
    if isinstance(t, ZetaRep):
        return f"zetarep[{_render_set(t)}]"
    if isinstance(t, Rev):
        return f"rev({_render(t.inner, _SUM)})"
    raise TypeError(f"not a term: {t!r}")


def _render_exp(o: Ordinal) -> str:
    # single plain CNF chunk stays bare; anything composite is parenthesized
    # so that the rendering never collides with a surrounding sum
    text = render_ordinal(o)
    simple = len(o.terms) == 1 or o.is_finite
    return text if simple and "+" not in text else f"({text})"


def _render_set(t: EtaRep | ZetaRep) -> str:
    spec = t.spec
    if hasattr(spec, "values"):
        return ",".join(str(v) for v in spec.values)
    return f"{spec.start}:{spec.step}"
