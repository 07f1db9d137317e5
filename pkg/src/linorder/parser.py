"""Recursive-descent parser for the order-term DSL.

Grammar:

    term    := sum
    sum     := prod { "+" prod }
    prod    := atom { "." atom }                 (left associative)
    atom    := nat | "omega" | "omega*" | "zeta" | "eta"
             | "zeta^" ord | "zeta^(" ord ")"
             | "shuffle{" term { "," term } "}"
             | "etarep[" setspec "]" | "zetarep[" setspec "]"
             | "rev(" term ")" | "(" term ")"
    setspec := nat { "," nat } | nat ":" nat     (start:step progression)
    ord     := CNF chunks in "w" notation, e.g. "w^2*3+w+4"

A bare exponent after "zeta^" consumes "+" greedily while the next chunk
still looks like an ordinal, so "zeta^w+1" is the power with exponent
w+1; write "1 + zeta^w" or parenthesize the exponent to get the sum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ordinals import Ordinal, cnf_add
from .terms import (ArithmeticSet, EtaRep, ETA, ExplicitSet, Finite, OMEGA,
                    OMEGA_STAR, Product, Rev, Sum, Term, UnsupportedTermError,
                    ZETA, ZetaPower, ZetaRep, normalize, shuffle_member_ok,
                    shuffle_of)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass
class _Tok:
    kind: str  # NAT IDENT PUNCT EOF
    text: str
    line: int
    col: int


_PUNCT = set("+.(){}[],:^*")


def _lex(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            toks.append(_Tok("NAT", src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            if word == "omega" and j < len(src) and src[j] == "*":
                word = "omega*"
                j += 1
            toks.append(_Tok("IDENT", word, line, start_col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            toks.append(_Tok("PUNCT", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    # term := sum
    def term(self) -> Term:
        parts = [self.prod()]
        while self.peek().text == "+":
            self.next()
            parts.append(self.prod())
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))

    def prod(self) -> Term:
        t = self.atom()
        while self.peek().text == ".":
            self.next()
            t = Product(t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "NAT":
            self.next()
            return Finite(int(tok.text))
        if tok.text == "(":
            self.next()
            inner = self.term()
            self.expect(")")
            return inner
        if tok.kind != "IDENT":
            self.fail(f"expected a term, found {tok.text or 'end of input'!r}")
        word = tok.text
        if word == "omega":
            self.next()
            return OMEGA
        if word == "omega*":
            self.next()
            return OMEGA_STAR
        if word == "eta":
            self.next()
            return ETA
        if word == "zeta":
            self.next()
            if self.peek().text == "^":
                self.next()
                return ZetaPower(self.ordinal())
            return ZETA
        if word == "rev":
            self.next()
            self.expect("(")
            inner = self.term()
            self.expect(")")
            return Rev(inner)
        if word == "shuffle":
            self.next()
            self.expect("{")
            members = [self.term()]
            while self.peek().text == ",":
                self.next()
                members.append(self.term())
            self.expect("}")
            return shuffle_of(members)
        if word in ("etarep", "zetarep"):
            self.next()
            self.expect("[")
            spec = self.setspec()
            self.expect("]")
            return EtaRep(spec) if word == "etarep" else ZetaRep(spec)
        self.fail(f"unknown name {word!r}")

    def setspec(self):
        tok = self.peek()
        if tok.kind != "NAT":
            self.fail("expected a natural number")
        first = int(self.next().text)
        if self.peek().text == ":":
            self.next()
            step_tok = self.peek()
            if step_tok.kind != "NAT":
                self.fail("expected a step")
            step = int(self.next().text)
            try:
                return ArithmeticSet(first, step)
            except ValueError as e:
                raise ParseError(str(e), tok.line, tok.col) from None
        values = [first]
        while self.peek().text == ",":
            self.next()
            vtok = self.peek()
            if vtok.kind != "NAT":
                self.fail("expected a natural number")
            values.append(int(self.next().text))
        try:
            return ExplicitSet(tuple(values))
        except ValueError as e:
            raise ParseError(str(e), tok.line, tok.col) from None

    def ordinal(self) -> Ordinal:
        if self.peek().text == "(":
            self.next()
            o = self._ordinal_chunks()
            self.expect(")")
            return o
        return self._ordinal_chunks()

    def _ordinal_chunks(self) -> Ordinal:
        total = self._ordinal_chunk()
        while self.peek().text == "+" and self._next_is_ordinal_chunk():
            self.next()
            total = cnf_add(total, self._ordinal_chunk())
        return total

    def _next_is_ordinal_chunk(self) -> bool:
        nxt = self.toks[self.pos + 1]
        return nxt.kind == "NAT" or nxt.text == "w"

    def _ordinal_chunk(self) -> Ordinal:
        tok = self.peek()
        if tok.kind == "NAT":
            self.next()
            return Ordinal.from_int(int(tok.text))
        if tok.text == "w":
            self.next()
            exp, coeff = 1, 1
            if self.peek().text == "^":
                self.next()
                etok = self.peek()
                if etok.kind != "NAT":
                    self.fail("expected an exponent after ^")
                exp = int(self.next().text)
            if self.peek().text == "*":
                self.next()
                ctok = self.peek()
                if ctok.kind != "NAT":
                    self.fail("expected a coefficient after *")
                coeff = int(self.next().text)
                if coeff < 1:
                    raise ParseError("coefficient must be positive", ctok.line, ctok.col)
            return Ordinal.omega(exp, coeff) if exp > 0 else Ordinal.from_int(coeff)
        self.fail("expected an ordinal in w notation")

    def done(self):
        t = self.peek()
        if t.kind != "EOF":
            raise ParseError(f"trailing input {t.text!r}", t.line, t.col)


def parse(src: str, validate: bool = True) -> Term:
    """Parse a term; with validate, reject constructs outside the fragment."""
    p = _Parser(_lex(src))
    t = p.term()
    p.done()
    if validate:
        validate_fragment(t)
    return t


def validate_fragment(t: Term) -> None:
    """Shuffle members must normalize to nonempty finite orders or base orders."""
    from .terms import Shuffle as _Shuffle

    def walk(u: Term) -> None:
        if isinstance(u, _Shuffle):
            for m in u.members:
                nm = normalize(m)
                if not shuffle_member_ok(nm):
                    raise UnsupportedTermError(
                        f"shuffle member {m!r} falls outside the decidable member fragment")
        for child in _children(u):
            walk(child)

    walk(t)


def _children(t: Term) -> tuple[Term, ...]:
    from .terms import Product as _Product, Rev as _Rev, Shuffle as _Shuffle, Sum as _Sum

    if isinstance(t, _Sum):
        return t.parts
    if isinstance(t, _Product):
        return (t.left, t.right)
    if isinstance(t, _Shuffle):
        return t.members
    if isinstance(t, _Rev):
        return (t.inner,)
    return ()
