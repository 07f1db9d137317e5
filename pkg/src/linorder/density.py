"""Densities of sets of dyadic rationals relative to a fixed enumeration.

A computable enumeration of the dyadics in (0,1) turns "density of an
interval" into a limit of exact rational counts.  Two worked
enumerations ship:

  ReverseBinary   item k is the value of the reversed binary word of
                  k+1, so the interval (1/4, 3/8) collects exactly the
                  indices congruent to 2 modulo 8 and has density 1/8

  LengthThenLex   the reduced dyadics level by level (denominator 2,
                  then 4, then 8, ...), each level in increasing order;
                  interval densities oscillate between level boundaries
                  and mid-level dips, so reports carry a windowed
                  running minimum and maximum instead of a limit claim

All counts are exact integers and all reported values exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .presentations import DenseSetSpec, density_of
from .terms import PreconditionError

_REGISTRY: dict[str, Callable[[int], Fraction]] = {}


def register_enumeration(rule_id: str, item: Callable[[int], Fraction]) -> None:
    """Plug-in seam for custom enumerations, addressed by rule id."""
    _REGISTRY[rule_id] = item


def _revbin_item(k: int) -> Fraction:
    # value of the reversed binary word of k+1: bit i of k+1 contributes
    # 2^-(i+1)
    m = k + 1
    num = 0
    bits = 0
    while m:
        num = (num << 1) | (m & 1)
        m >>= 1
        bits += 1
    return Fraction(num, 1 << bits)


def _lenlex_item(k: int) -> Fraction:
    # level ell holds the 2^(ell-1) reduced fractions odd/2^ell, ascending
    ell = 1
    size = 1
    while k >= size:
        k -= size
        ell += 1
        size = 1 << (ell - 1)
    return Fraction(2 * k + 1, 1 << ell)


@dataclass(frozen=True)
class Enumeration:
    """An injective listing of the dyadic rationals in (0,1)."""

    kind: str
    item: Callable[[int], Fraction]

    @classmethod
    def reverse_binary(cls) -> "Enumeration":
        return cls("ReverseBinary", _revbin_item)

    @classmethod
    def length_then_lex(cls) -> "Enumeration":
        return cls("LengthThenLex", _lenlex_item)

    @classmethod
    def custom(cls, rule_id: str) -> "Enumeration":
        if rule_id not in _REGISTRY:
            raise PreconditionError("no enumeration registered as %r" % rule_id)
        return cls("Custom(%s)" % rule_id, _REGISTRY[rule_id])


@dataclass(frozen=True)
class DensityReport:
    n: int
    value: Fraction
    running_min: Fraction | None = None
    running_max: Fraction | None = None

    def to_json(self) -> dict:
        out = {"n": self.n, "value": str(self.value)}
        if self.running_min is not None:
            out["min"] = str(self.running_min)
        if self.running_max is not None:
            out["max"] = str(self.running_max)
        return out


def interval_density(e: Enumeration, a: Fraction, b: Fraction, n: int,
                     window: tuple[int, int] | None = None) -> DensityReport:
    """Exact share of the first n enumerated points lying in (a, b).

    With a window (lo, hi), also the minimum and maximum of the running
    share over all prefix lengths in the window.
    """
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise PreconditionError("empty interval")
    hi = n if window is None else max(n, window[1])
    lo = 0 if window is None else window[0]
    count = 0
    value = None
    rmin = rmax = None
    for m in range(1, hi + 1):
        if a < e.item(m - 1) < b:
            count += 1
        if m == n:
            value = Fraction(count, n)
        if window is not None and lo <= m <= window[1]:
            rho = Fraction(count, m)
            rmin = rho if rmin is None or rho < rmin else rmin
            rmax = rho if rmax is None or rho > rmax else rmax
    if value is None:
        value = Fraction(count, hi) if hi else Fraction(0)
    return DensityReport(n=n, value=value, running_min=rmin, running_max=rmax)


def is_positive_notion(e: Enumeration, probes: list[tuple[Fraction, Fraction]],
                       n: int, threshold: Fraction = Fraction(1, 100)) -> dict:
    """Empirical positivity audit: per probe interval, the running
    minimum of the density over prefix lengths in [n/4, n], flagging
    intervals whose minimum falls below the threshold."""
    report = {"n": n, "threshold": str(threshold), "intervals": []}
    lo = max(1, n // 4)
    for a, b in probes:
        r = interval_density(e, a, b, n, window=(lo, n))
        report["intervals"].append({
            "interval": [str(Fraction(a)), str(Fraction(b))],
            "value": str(r.value),
            "min": str(r.running_min),
            "flagged": r.running_min < threshold,
        })
    report["positive"] = not any(x["flagged"] for x in report["intervals"])
    return report


def subset_density_profile(d: DenseSetSpec, n_values: list[int]) -> list[DensityReport]:
    """Exact ρ_n of a distinguished set at each requested n, with the
    running extremes across the requested sequence."""
    out: list[DensityReport] = []
    rmin = rmax = None
    for n in n_values:
        rho = density_of(d, n)
        rmin = rho if rmin is None or rho < rmin else rmin
        rmax = rho if rmax is None or rho > rmax else rmax
        out.append(DensityReport(n=n, value=rho, running_min=rmin, running_max=rmax))
    return out


__all__ = ["DensityReport", "Enumeration", "interval_density",
           "is_positive_notion", "register_enumeration",
           "subset_density_profile"]
