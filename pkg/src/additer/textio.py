"""Text formats for fields, elements and polynomials.

Field:      ``p=<int> r=<int> [mod=c0,c1,...,1]``
Element:    polynomial in the generator ``a``, e.g. ``a^2+2a``
Polynomial: expression in ``x`` with coefficients in ``a``, e.g. ``x^8 + a*x``
Additive:   also the sparse form ``{(0,'a'),(3,'1')}`` (index i means X^(p^i))
"""

from __future__ import annotations

import re

from .errors import ParseError
from .field import FieldCtx, make_field

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z]\w*)|(.))")


def parse_field(text: str) -> FieldCtx:
    parts = {}
    for item in text.split():
        key, sep, value = item.partition("=")
        if not sep or key not in ("p", "r", "mod") or key in parts:
            raise ParseError(f"bad field spec item {item!r}")
        parts[key] = value
    if "p" not in parts:
        raise ParseError("field spec needs p=<prime>")
    try:
        p = int(parts["p"])
        r = int(parts.get("r", "1"))
        mod = [int(c) for c in parts["mod"].split(",")] if "mod" in parts else None
    except ValueError as exc:
        raise ParseError(f"bad integer in field spec: {exc}") from None
    return make_field(p, r, mod)


# -- expression parser -------------------------------------------------------
#
# Values are sparse polynomials in x over F_q: dict exponent -> element code.


class _Parser:
    def __init__(self, ctx: FieldCtx, text: str, allow_x: bool):
        self.ctx = ctx
        self.allow_x = allow_x
        self.toks = []
        for num, name, other in _TOKEN.findall(text):
            if num:
                self.toks.append(("num", int(num)))
            elif name:
                self.toks.append(("name", name))
            elif other.strip():
                self.toks.append(("op", other))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        if self.take() != ("op", op):
            raise ParseError(f"expected {op!r}")

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        value = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"unexpected token {self.peek()[1]!r}")
        return value

    # arithmetic on sparse values
    def add(self, u, v):
        out = dict(u)
        for e, c in v.items():
            out[e] = self.ctx.add(out.get(e, 0), c)
        return {e: c for e, c in out.items() if c}

    def neg(self, u):
        return {e: self.ctx.neg(c) for e, c in u.items()}

    def mul(self, u, v):
        out = {}
        for e1, c1 in u.items():
            for e2, c2 in v.items():
                e = e1 + e2
                out[e] = self.ctx.add(out.get(e, 0), self.ctx.mul(c1, c2))
        return {e: c for e, c in out.items() if c}

    def power(self, u, n):
        if len(u) == 1:
            (e, c), = u.items()
            return {e * n: self.ctx.pow(c, n)} if self.ctx.pow(c, n) else {}
        result = {0: 1}
        for _ in range(n):
            result = self.mul(result, u)
        return result

    def expr(self):
        sign = False
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = self.take()[1] == "-"
        value = self.term()
        if sign:
            value = self.neg(value)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = self.add(value, self.neg(rhs) if op == "-" else rhs)
        return value

    def term(self):
        value = self.factor()
        while True:
            kind, tok = self.peek()
            if (kind, tok) == ("op", "*"):
                self.take()
                value = self.mul(value, self.factor())
            elif kind in ("num", "name") or (kind, tok) == ("op", "("):
                value = self.mul(value, self.factor())
            else:
                return value

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, n = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            base = self.power(base, n)
        return base

    def atom(self):
        kind, tok = self.take()
        if kind == "num":
            c = self.ctx.from_int(tok)
            return {0: c} if c else {}
        if kind == "name":
            if tok == "a":
                return {0: self.ctx.gen}
            if tok in ("x", "X") and self.allow_x:
                return {1: 1}
            raise ParseError(f"unknown symbol {tok!r}")
        if (kind, tok) == ("op", "("):
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {tok!r}")


def parse_element(ctx: FieldCtx, text: str) -> int:
    value = _Parser(ctx, text, allow_x=False).parse()
    return value.get(0, 0)


def parse_terms(ctx: FieldCtx, text: str) -> dict[int, int]:
    """Parse a polynomial in x into a sparse map exponent -> element code."""
    return _Parser(ctx, text, allow_x=True).parse()


def parse_poly(ctx: FieldCtx, text: str):
    from .poly import DensePoly

    return DensePoly.from_terms(ctx, parse_terms(ctx, text))


_SPARSE_ITEM = re.compile(r"\(\s*(\d+)\s*,\s*'([^']*)'\s*\)")


def parse_affine(ctx: FieldCtx, text: str):
    """Parse an additive or affine polynomial, dense or sparse form."""
    from .additive import AdditivePoly, AffinePoly

    text = text.strip()
    if text.startswith("{"):
        if not text.endswith("}"):
            raise ParseError("unterminated sparse form")
        body = text[1:-1]
        items = _SPARSE_ITEM.findall(body)
        if _SPARSE_ITEM.sub("", body).replace(",", "").strip():
            raise ParseError(f"bad sparse additive form {text!r}")
        acoeffs = {}
        for idx, elem in items:
            acoeffs[int(idx)] = ctx.add(acoeffs.get(int(idx), 0), parse_element(ctx, elem))
        return AffinePoly(AdditivePoly.from_terms(ctx, acoeffs), 0)
    terms = parse_terms(ctx, text)
    b = terms.pop(0, 0)
    return AffinePoly(_additive_from_terms(ctx, terms), b)


def _additive_from_terms(ctx, terms):
    from .additive import AdditivePoly
    from .errors import NotAdditive

    acoeffs = {}
    for e, c in terms.items():
        i, pw = 0, 1
        while pw < e:
            pw *= ctx.p
            i += 1
        if pw != e:
            raise NotAdditive(f"exponent {e} is not a power of {ctx.p}")
        acoeffs[i] = c
    return AdditivePoly.from_terms(ctx, acoeffs)


# -- formatting ----------------------------------------------------------------


def format_element(ctx: FieldCtx, a: int) -> str:
    if ctx.R == 1:
        return str(a)
    parts = []
    for i, c in reversed(list(enumerate(ctx.coords(a)))):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = "a" if i == 1 else f"a^{i}"
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts) if parts else "0"


def _coeff_times(ctx, c: int, mono: str) -> str:
    if c == 1:
        return mono
    text = format_element(ctx, c)
    if "+" in text:
        text = f"({text})"
    return f"{text}*{mono}"


def format_terms(ctx: FieldCtx, terms: dict[int, int]) -> str:
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        if not c:
            continue
        if e == 0:
            parts.append(format_element(ctx, c))
        else:
            parts.append(_coeff_times(ctx, c, "x" if e == 1 else f"x^{e}"))
    return " + ".join(parts) if parts else "0"


def format_poly(f) -> str:
    return format_terms(f.ctx, f.terms())


def format_additive(A) -> str:
    """Dense-exponent text of an additive polynomial (exponents p^i written out)."""
    p = A.ctx.p
    return format_terms(A.ctx, {p**i: c for i, c in A.terms().items()})


def format_affine(F) -> str:
    terms = {F.ctx.p**i: c for i, c in F.A.terms().items()}
    if F.b:
        terms[0] = F.b
    return format_terms(F.ctx, terms)


def format_sparse(A) -> str:
    items = ",".join(f"({i},'{format_element(A.ctx, c)}')" for i, c in sorted(A.terms().items()))
    return "{" + items + "}"
