"""Text grammar for field and skew-polynomial elements.

Polynomials: `c0 + c1*T + c2*T^2`; F_q coefficients as bare integers (the
prime-field embedding) or `[i0,i1,...]` coordinate lists; rational
functions as `num / den`; extension elements as coordinate lists over the
power basis; skew polynomials use `t` for tau.  One recursive-descent
parser covers all of these with position-annotated errors.
"""
from __future__ import annotations

from .errors import ParseError
from .skew import SkewPoly

_TOKENS = ("+", "-", "*", "/", "^", "(", ")", "[", "]", ",")


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def next_token(self):
        c = self.peek()
        if c is None:
            return None, self.pos
        start = self.pos
        if c in _TOKENS:
            self.pos += 1
            return c, start
        if c.isdigit():
            end = self.pos
            while end < len(self.text) and self.text[end].isdigit():
                end += 1
            tok = self.text[self.pos:end]
            self.pos = end
            return int(tok), start
        if c.isalpha():
            self.pos += 1
            return c, start
        raise ParseError(f"unexpected character {c!r}", start)


class _Parser:
    """Parses an expression into a SkewPoly over the declared field."""

    def __init__(self, text, field):
        self.lex = _Lexer(text)
        self.field = field
        self.cur = None
        self.cur_pos = 0
        self._in_coords = False
        self._advance()

    def _advance(self):
        self.cur, self.cur_pos = self.lex.next_token()

    def _expect(self, tok):
        if self.cur != tok:
            raise ParseError(f"expected {tok!r}, found {self.cur!r}", self.cur_pos)
        self._advance()

    def parse(self):
        out = self._expr()
        if self.cur is not None:
            raise ParseError(f"trailing input {self.cur!r}", self.cur_pos)
        return out

    def _expr(self):
        if self.cur == "-":
            self._advance()
            out = -self._term()
        else:
            out = self._term()
        while self.cur in ("+", "-"):
            op = self.cur
            self._advance()
            rhs = self._term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def _term(self):
        out = self._factor()
        while True:
            if self.cur == "*":
                self._advance()
                out = out * self._factor()
            elif self.cur == "/":
                self._advance()
                rhs = self._factor()
                out = self._divide(out, rhs)
            else:
                return out

    def _divide(self, a, b):
        if b.is_zero():
            raise ParseError("division by zero", self.cur_pos)
        if b.deg != 0:
            raise ParseError("division by a tau polynomial", self.cur_pos)
        inv = b.constant().inverse()
        return SkewPoly(a.field, [c * inv for c in a.coeffs])

    def _factor(self):
        base = self._atom()
        while self.cur == "^":
            self._advance()
            if not isinstance(self.cur, int):
                raise ParseError("exponent must be an integer", self.cur_pos)
            e = self.cur
            self._advance()
            base = base ** e
        return base

    def _atom(self):
        field = self.field
        tok, pos = self.cur, self.cur_pos
        if tok == "(":
            self._advance()
            out = self._expr()
            self._expect(")")
            return out
        if tok == "[":
            return self._bracket()
        if isinstance(tok, int):
            self._advance()
            return SkewPoly.from_scalar(
                field.from_poly(field.fq.poly([tok]))
            )
        if tok == "T":
            self._advance()
            return SkewPoly.from_scalar(field.T())
        if tok == "t":
            self._advance()
            return SkewPoly.tau(field)
        raise ParseError(f"unexpected token {tok!r}", pos)

    def _bracket(self):
        """Coordinate list: extension coordinates when the field is a proper
        extension (entries are scalar expressions, with nested brackets
        meaning F_q coordinates), otherwise F_q coordinates of integers."""
        fq_mode = self.field.e == 1 or self._in_coords
        self._expect("[")
        parts = []
        while True:
            start = self.cur_pos
            if not fq_mode:
                outer = self._in_coords
                self._in_coords = True
                expr = self._expr()
                self._in_coords = outer
            else:
                expr = self._expr()
            if expr.deg > 0:
                raise ParseError("tau inside a coordinate list", start)
            parts.append((expr, start))
            if self.cur == ",":
                self._advance()
                continue
            break
        self._expect("]")
        field = self.field
        fq = field.fq
        scalars = [p.constant() if not p.is_zero() else field.zero
                   for p, _ in parts]
        if fq_mode:
            # F_q coordinate list over the power basis of the modulus
            vals = []
            for s, (_, start) in zip(scalars, parts):
                if not s.in_base() or not s.coords[0].is_constant():
                    raise ParseError("F_q coordinates must be integers", start)
                r = s.coords[0]
                vals.append(0 if r.is_zero() else int(r.num.array[0]))
            if len(vals) > fq.d:
                raise ParseError("too many F_q coordinates", parts[0][1])
            elem = fq.elem(vals)
            return SkewPoly.from_scalar(field.from_poly(fq.poly([elem])))
        if len(parts) > field.e:
            raise ParseError("too many extension coordinates", parts[0][1])
        coords = []
        for s, (_, start) in zip(scalars, parts):
            if not s.in_base():
                raise ParseError("nested extension coordinates", start)
            coords.append(s.coords[0])
        return SkewPoly.from_scalar(field.elem(coords))


def parse_skew(text, field):
    """Parse the `c0 + c1*t + ...` grammar into a SkewPoly over the field."""
    return _Parser(text, field).parse()


def parse_ext(text, field):
    out = parse_skew(text, field)
    if out.deg > 0:
        raise ParseError("tau in a scalar context")
    return out.constant() if not out.is_zero() else field.zero


def parse_rat(text, fq):
    from .extfield import ExtField

    tmp = ExtField(fq)
    return parse_ext(text, tmp).coords[0]


def parse_poly(text, fq):
    r = parse_rat(text, fq)
    if not r.den.is_one():
        raise ParseError("denominator in a polynomial context")
    return r.num


# -- serialization -------------------------------------------------------------

def fq_to_text(c):
    if c.field.d == 1:
        return str(c.val)
    return "[" + ",".join(str(x) for x in c.coords) + "]"


def rat_to_text(r):
    if r.den.is_one():
        return poly_text(r.num)
    return f"({poly_text(r.num)}) / ({poly_text(r.den)})"


def poly_text(p):
    if p.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        cs = fq_to_text(c)
        if i == 0:
            parts.append(cs)
        elif cs == "1":
            parts.append("T" if i == 1 else f"T^{i}")
        else:
            parts.append(f"{cs}*T" if i == 1 else f"{cs}*T^{i}")
    return " + ".join(parts)


def ext_to_text(a):
    if a.field.e == 1:
        return rat_to_text(a.coords[0])
    return [rat_to_text(c) for c in a.coords]


def _scalar_inline(a):
    """Scalar coefficient rendered for use inside a skew term."""
    if a.field.e == 1:
        r = a.coords[0]
        if r.den.is_one() and r.num.is_constant():
            return fq_to_text(r.num.coeffs[0]) if not r.num.is_zero() else "0"
        return f"({rat_to_text(r)})"
    return "[" + ", ".join(
        f"({rat_to_text(c)})" if not (c.den.is_one() and c.num.is_constant())
        else (fq_to_text(c.num.coeffs[0]) if not c.num.is_zero() else "0")
        for c in a.coords
    ) + "]"


def skew_to_text(a):
    if a.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(a.coeffs):
        if c.is_zero():
            continue
        cs = _scalar_inline(c)
        if i == 0:
            parts.append(cs)
        elif cs == "1":
            parts.append("t" if i == 1 else f"t^{i}")
        else:
            parts.append(f"{cs}*t" if i == 1 else f"{cs}*t^{i}")
    return " + ".join(parts)


def ideal_to_text(n):
    return f"({poly_text(n.gen)})"


def parse_ideal(text, fq):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    from .ideals import IdealA

    return IdealA(parse_poly(text, fq))
