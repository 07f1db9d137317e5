"""Ordinal notations in Cantor normal form below omega^omega.

A notation is a finite sum  w^e1*c1 + ... + w^ek*ck  with strictly
decreasing natural exponents and positive natural coefficients.  This is
enough to index back-and-forth levels and zeta-power exponents, where the
arithmetic that matters is addition, doubling, left subtraction and the
total order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """CNF notation: tuple of (exponent, coefficient), exponents strictly decreasing."""

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        exps = [e for e, _ in self.terms]
        if exps != sorted(exps, reverse=True) or len(set(exps)) != len(exps):
            raise ValueError(f"exponents must be strictly decreasing: {self.terms}")
        if any(e < 0 or c < 1 for e, c in self.terms):
            raise ValueError(f"exponents must be >= 0 and coefficients >= 1: {self.terms}")

    @staticmethod
    def from_int(n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinal notations are non-negative")
        return Ordinal(((0, n),)) if n else Ordinal()

    @staticmethod
    def omega(exp: int = 1, coeff: int = 1) -> "Ordinal":
        return Ordinal(((exp, coeff),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return all(e == 0 for e, _ in self.terms)

    @property
    def finite_value(self) -> int:
        """The integer value; only meaningful when is_finite."""
        if not self.is_finite:
            raise ValueError(f"not a finite ordinal: {self}")
        return self.terms[0][1] if self.terms else 0

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] == 0

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] != 0

    def predecessor(self) -> "Ordinal":
        """b with b + 1 = self; only for successor notations."""
        if not self.is_successor:
            raise ValueError(f"not a successor: {self}")
        e, c = self.terms[-1]
        rest = self.terms[:-1]
        return Ordinal(rest if c == 1 else rest + ((0, c - 1),))

    def __lt__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Ordinal.from_int(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return cnf_compare(self, other) < 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Ordinal.from_int(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(("Ordinal", self.terms))

    def __repr__(self) -> str:
        return f"Ordinal[{render_ordinal(self)}]"


ZERO = Ordinal()
ONE = Ordinal.from_int(1)
OMEGA_ORD = Ordinal.omega()


def cnf_compare(a: Ordinal, b: Ordinal) -> int:
    """-1, 0 or 1; lexicographic on the (exponent, coefficient) lists."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        if ea != eb:
            return 1 if ea > eb else -1
        if ca != cb:
            return 1 if ca > cb else -1
    if len(a.terms) != len(b.terms):
        return 1 if len(a.terms) > len(b.terms) else -1
    return 0


def cnf_add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal sum a + b: terms of a below b's leading exponent are absorbed."""
    if b.is_zero:
        return a
    if a.is_zero:
        return b
    eb, cb = b.terms[0]
    kept = tuple((e, c) for e, c in a.terms if e > eb)
    merged_cb = cb + sum(c for e, c in a.terms if e == eb)
    return Ordinal(kept + ((eb, merged_cb),) + b.terms[1:])


def cnf_double(b: Ordinal) -> Ordinal:
    """2*b: infinite CNF terms are unchanged, a finite tail doubles."""
    return Ordinal(tuple((e, c if e > 0 else 2 * c) for e, c in b.terms))


def cnf_left_subtract(prefix: Ordinal, total: Ordinal) -> Ordinal | None:
    """The unique x with prefix + x = total, or None when total < prefix."""
    a, b = list(prefix.terms), list(total.terms)
    while a and b:
        (ea, ca), (eb, cb) = a[0], b[0]
        if ea < eb:
            return Ordinal(tuple(b))
        if ea > eb:
            return None
        if ca < cb:
            return Ordinal(((eb, cb - ca),) + tuple(b[1:]))
        if ca > cb:
            # prefix + x starts with at least w^ea*ca unless x restarts the
            # column, which would need x's lead exponent > ea and fail eb.
            return None
        a, b = a[1:], b[1:]
    if a:
        return None
    return Ordinal(tuple(b))


def render_ordinal(o: Ordinal) -> str:
    if o.is_zero:
        return "0"
    chunks = []
    for e, c in o.terms:
        if e == 0:
            chunks.append(str(c))
        elif e == 1:
            chunks.append("w" if c == 1 else f"w*{c}")
        else:
            chunks.append(f"w^{e}" if c == 1 else f"w^{e}*{c}")
    return "+".join(chunks)


class OrdinalSyntaxError(ValueError):
    pass


def parse_ordinal(text: str) -> Ordinal:
    """Parse 'w^2*3+w+4' style notations (whitespace allowed)."""
    s = text.replace(" ", "")
    if not s:
        raise OrdinalSyntaxError("empty ordinal")
    if s == "0":
        return ZERO
    total = ZERO
    for chunk in s.split("+"):
        if not chunk:
            raise OrdinalSyntaxError(f"empty summand in {text!r}")
        if chunk[0] == "w":
            rest = chunk[1:]
            exp, coeff = 1, 1
            if rest.startswith("^"):
                rest = rest[1:]
                digits = _lead_digits(rest)
                if not digits:
                    raise OrdinalSyntaxError(f"missing exponent in {chunk!r}")
                exp, rest = int(digits), rest[len(digits):]
            if rest.startswith("*"):
                digits = _lead_digits(rest[1:])
                if not digits or digits != rest[1:]:
                    raise OrdinalSyntaxError(f"bad coefficient in {chunk!r}")
                coeff = int(digits)
            elif rest:
                raise OrdinalSyntaxError(f"trailing junk in {chunk!r}")
            if coeff < 1:
                raise OrdinalSyntaxError(f"zero coefficient in {chunk!r}")
            total = cnf_add(total, Ordinal.omega(exp, coeff))
        else:
            if not chunk.isdigit():
                raise OrdinalSyntaxError(f"bad summand {chunk!r} in {text!r}")
            total = cnf_add(total, Ordinal.from_int(int(chunk)))
    return total


def _lead_digits(s: str) -> str:
    i = 0
    while i < len(s) and s[i].isdigit():
        i += 1
    return s[:i]
