"""Polynomial literal syntax shared by the CLI and report witnesses.

Grammar (whitespace is insignificant)::

    poly     := term (("+" | "-") term)*
    term     := ["-" | "+"] (coeff ["*" monomial] | monomial)
    coeff    := INT ["/" INT]
    monomial := factor ("*" factor)*
    factor   := "x" INT ["^" INT]

Variables are 0-based: ``x0`` is the first coordinate.  Examples:
``0``, ``-x0``, ``3/2*x0^2*x1 - x2 + 1``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .ratpoly import Poly

__all__ = ["LiteralSyntaxError", "format_poly", "parse_poly", "format_rational", "parse_rational"]


class LiteralSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at column {pos + 1} in {text!r}")
        self.text = text
        self.column = pos + 1


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>x\d+)|(?P<op>[-+*/^]))")


def _tokens(text: str):
    pos = 0
    out = []
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = _TOKEN.match(text, pos)
        if not m:
            raise LiteralSyntaxError(text, pos, "unexpected character")
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_rational(text: str) -> Fraction:
    m = re.fullmatch(r"\s*([-+]?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if not m:
        raise LiteralSyntaxError(text, 0, "malformed rational")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise LiteralSyntaxError(text, m.start(2), "zero denominator")
    return Fraction(num, den)


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_poly(text: str, nvars: int) -> Poly:
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        tok = toks[i]
        if kind and tok[0] != kind or value and tok[1] != value:
            want = value or kind
            raise LiteralSyntaxError(text, tok[2], f"expected {want!r}, got {tok[1] or 'end'!r}")
        i += 1
        return tok

    def factor(exps):
        _, name, pos = take("var")
        k = int(name[1:])
        if k >= nvars:
            raise LiteralSyntaxError(text, pos, f"variable {name} outside x0..x{nvars - 1}")
        power = 1
        if peek()[1] == "^":
            take("op", "^")
            power = int(take("int")[1])
        exps[k] += power

    terms: dict = {}
    first = True
    while True:
        sign = 1
        kind, val, pos = peek()
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        elif not first:
            raise LiteralSyntaxError(text, pos, "expected '+' or '-'")
        first = False
        coeff = Fraction(1)
        exps = [0] * nvars
        kind, val, pos = peek()
        if kind == "int":
            take()
            num = int(val)
            den = 1
            if peek()[1] == "/":
                take()
                _, dval, dpos = take("int")
                den = int(dval)
                if den == 0:
                    raise LiteralSyntaxError(text, dpos, "zero denominator")
            coeff = Fraction(num, den)
            if peek()[1] == "*":
                take()
                factor(exps)
        elif kind == "var":
            factor(exps)
        else:
            raise LiteralSyntaxError(text, pos, "expected a coefficient or variable")
        while peek()[1] == "*":
            take()
            factor(exps)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + sign * coeff
        if peek()[0] == "end":
            break
    return Poly(nvars, terms)


def _format_monomial(exps) -> str:
    parts = []
    for k, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{k}")
        elif e:
            parts.append(f"x{k}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    out = []
    for idx, (exps, c) in enumerate(p.sorted_terms()):
        mono = _format_monomial(exps)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)
