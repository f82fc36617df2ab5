"""Text form of scalars and elements.

Grammar (whitespace-insensitive)::

    element := ['-'] term (('+' | '-') term)*
    term    := [scalar '*'] basis | scalar          (a bare scalar must be 0)
    basis   := ('L' | 'H') '[' gamma ',' nat ']'
    gamma   := int | '(' int (',' int)* ')'
    scalar  := products/quotients of rationals, 'theta', 'theta^n' and
               parenthesised sums of those

Printing is canonical: L before H, alpha lexicographic, degree ascending,
rationals as ``p/q``, non-rational scalars as parenthesised theta-polynomials.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import HV, Basis, Element
from .exactnum import FieldElement, FieldSpec, format_rational, format_scalar


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|(theta)|([LH])(?=\s*\[)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, theta, kind, other = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            toks.append(("int", num, start))
        elif theta is not None:
            toks.append(("theta", theta, start))
        elif kind is not None:
            toks.append(("kind", kind, start))
        elif other.isspace():
            pass
        elif other in "+-*/^()[],":
            toks.append((other, other, start))
        else:
            raise ParseError(f"unexpected character {other!r}", start)
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, field: FieldSpec, rank: int | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field
        self.rank = rank

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self, kind: str):
        t = self.tok
        if t[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {want}, got {got}", t[2])
        self.i += 1
        return t

    def accept(self, kind: str) -> bool:
        if self.tok[0] == kind:
            self.i += 1
            return True
        return False

    # scalars ------------------------------------------------------------------

    def scalar_sum(self):
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        val = sign * self.scalar_product()
        while self.tok[0] in ("+", "-"):
            op = self.take(self.tok[0])[0]
            rhs = self.scalar_product()
            val = val + rhs if op == "+" else val - rhs
        return val

    def scalar_product(self):
        val = self.scalar_factor()
        while self.tok[0] in ("*", "/"):
            # stop before '*' that introduces a basis vector
            if self.tok[0] == "*" and self.toks[self.i + 1][0] == "kind":
                break
            op = self.take(self.tok[0])[0]
            rhs = self.scalar_factor()
            if op == "*":
                val = val * rhs
            else:
                if rhs == 0:
                    raise ParseError("division by zero", self.toks[self.i - 1][2])
                val = val / rhs
        return val

    def scalar_factor(self):
        t = self.tok
        if t[0] == "int":
            self.i += 1
            val = Fraction(int(t[1]))
        elif t[0] == "theta":
            self.i += 1
            if self.field.is_rational:
                raise ParseError("theta used over Q", t[2])
            val = self.field.theta()
        elif t[0] == "(":
            self.i += 1
            val = self.scalar_sum()
            self.take(")")
        elif t[0] == "-":
            self.i += 1
            return -self.scalar_factor()
        else:
            raise ParseError(f"expected a scalar, got {t[1]!r}" if t[0] != "end"
                             else "expected a scalar, got end of input", t[2])
        if self.accept("^"):
            e = self.take("int")
            val = val ** int(e[1])
        return val

    # elements -----------------------------------------------------------------

    def gamma(self):
        if self.accept("("):
            coords = [self.signed_int()]
            while self.accept(","):
                coords.append(self.signed_int())
            self.take(")")
        else:
            coords = [self.signed_int()]
        return tuple(coords)

    def signed_int(self) -> int:
        neg = self.accept("-")
        if not neg:
            self.accept("+")
        t = self.take("int")
        return -int(t[1]) if neg else int(t[1])

    def basis(self) -> Basis:
        kind = self.take("kind")
        self.take("[")
        pos = self.tok[2]
        alpha = self.gamma()
        if self.rank is not None and len(alpha) != self.rank:
            raise ParseError(f"Gamma has rank {self.rank}, got {len(alpha)} coordinates", pos)
        self.take(",")
        t = self.tok
        if t[0] == "-":
            raise ParseError("negative degree", t[2])
        deg = int(self.take("int")[1])
        self.take("]")
        return Basis(kind[1], alpha, deg)

    def term(self, sign: int, out: dict):
        if self.tok[0] == "kind":
            b = self.basis()
            coeff = Fraction(sign)
        else:
            pos = self.tok[2]
            coeff = sign * self.scalar_product()
            if self.accept("*"):
                b = self.basis()
            else:
                if coeff != 0:
                    raise ParseError("bare nonzero scalar is not an element", pos)
                return
        prev = out.get(b)
        val = coeff if prev is None else prev + coeff
        if val:
            out[b] = val
        else:
            out.pop(b, None)

    def element(self) -> dict:
        out: dict = {}
        sign = -1 if self.accept("-") else 1
        self.term(sign, out)
        while self.tok[0] in ("+", "-"):
            sign = 1 if self.take(self.tok[0])[0] == "+" else -1
            self.term(sign, out)
        self.take("end")
        return out


def _coerce(field: FieldSpec, x):
    if field.is_rational:
        return Fraction(x)
    return field.coerce(x)


def parse_scalar(text: str, field: FieldSpec):
    p = _Parser(text, field, None)
    val = p.scalar_sum()
    p.take("end")
    return _coerce(field, val)


def parse_element(text: str, hv: HV) -> Element:
    p = _Parser(text, hv.field, hv.rank)
    terms = p.element()
    return Element(hv, {b: _coerce(hv.field, c) for b, c in terms.items()})


def parse_basis(text: str, hv: HV) -> Basis:
    x = parse_element(text, hv)
    if len(x.terms) != 1 or next(iter(x.terms.values())) != 1:
        raise ParseError("expected a single basis vector", 0)
    return next(iter(x.terms))


def _negative(c) -> bool:
    if isinstance(c, FieldElement):
        lead = next((x for x in c.coords if x), 0)
        return lead < 0
    return c < 0


def _scalar_factor_text(c) -> str:
    if isinstance(c, FieldElement) and not c.is_rational():
        return f"({format_scalar(c)})"
    if isinstance(c, FieldElement):
        return format_rational(c.coords[0])
    return format_rational(c)


def format_element(x: Element) -> str:
    parts = []
    for b, c in x.items():
        neg = _negative(c)
        mag = -c if neg else c
        body = str(b) if mag == 1 else f"{_scalar_factor_text(mag)}*{b}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts) if parts else "0"


print_element = format_element
