"""Exact scalars: the rationals and simple extensions Q(theta).

Elements of Q are plain :class:`fractions.Fraction` values (their canonical
form, reduced with positive denominator, is exactly what we need).  Elements
of a proper extension are :class:`FieldElement` instances holding rational
coordinates in the power basis ``1, theta, ..., theta^(d-1)``.  Both kinds mix
freely with ``int`` and ``Fraction`` under the usual arithmetic operators, so
the rest of the package never has to care which field it runs over.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class FieldError(ValueError):
    """Structural problem with a field spec or an element's coordinates."""


# -- polynomial helpers over Q (coefficient lists, low degree first) ---------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return _trim(out)


def _poly_divmod(p: Sequence, q: Sequence) -> tuple[list, list]:
    p = _trim([Fraction(c) for c in p])
    q = _trim([Fraction(c) for c in q])
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(p) >= len(q):
        shift = len(p) - len(q)
        f = p[-1] / lead
        quot[shift] = f
        for i, c in enumerate(q):
            p[i + shift] -= f * c
        _trim(p)
    return _trim(quot), p


def _poly_sub(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


def _poly_eval(p: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [0]
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _integral_monic(coeffs: Sequence[Fraction]) -> list[int]:
    """Rescale x -> x/k so a monic rational polynomial becomes monic integral."""
    d = len(coeffs)
    k = reduce(lambda a, c: a * c.denominator // math.gcd(a, c.denominator), coeffs, 1)
    # coefficient of x^i picks up k^(d-i)
    return [int(c * k ** (d - i)) for i, c in enumerate(coeffs)] + [1]


def _has_rational_root(g: Sequence[int]) -> bool:
    # g monic integral, so any rational root is an integer dividing g[0]
    if g[0] == 0:
        return True
    for r in _divisors(g[0]):
        for cand in (r, -r):
            if _poly_eval(g, Fraction(cand)) == 0:
                return True
    return False


def _has_quadratic_factor(g: Sequence[int]) -> bool:
    # g = x^4 + a x^3 + b x^2 + c x + d0 monic integral; by Gauss's lemma any
    # factorisation over Q is into monic integral quadratics (x^2+px+q)(x^2+rx+s)
    d0, c, b, a = g[0], g[1], g[2], g[3]
    for q in _divisors(d0):
        for q in (q, -q):
            if q == 0 or d0 % q:
                continue
            s = d0 // q
            if q != s:
                num = c - q * a
                if num % (s - q):
                    continue
                p = num // (s - q)
                r = a - p
                if q + s + p * r == b:
                    return True
            else:
                if q * a != c:
                    continue
                disc = a * a - 4 * (b - 2 * q)
                if disc >= 0 and math.isqrt(disc) ** 2 == disc:
                    return True
    return False


def is_irreducible(minpoly: Sequence[Rational]) -> bool:
    """Irreducibility over Q of ``x^d + minpoly[d-1] x^(d-1) + ... + minpoly[0]``.

    Only degrees up to 4 are supported.
    """
    d = len(minpoly)
    if d == 1:
        return True
    if d > 4:
        raise FieldError("irreducibility check supports degree <= 4 only")
    g = _integral_monic([Fraction(c) for c in minpoly])
    if _has_rational_root(g):
        return False
    if d == 4 and _has_quadratic_factor(g):
        return False
    return True


class FieldSpec:
    """The scalar field: Q when ``degree == 1``, else Q[x]/(minpoly).

    ``minpoly`` lists the non-leading coefficients, constant term first, so
    ``FieldSpec(2, [-2, 0])`` is Q(sqrt 2).
    """

    __slots__ = ("degree", "minpoly", "_reduction")

    def __init__(self, degree: int = 1, minpoly: Sequence[Rational] = ()):
        if degree < 1:
            raise FieldError("degree must be positive")
        if degree > 4:
            raise FieldError("extensions of degree > 4 are not supported")
        if degree == 1:
            minpoly = ()
        else:
            if len(minpoly) != degree:
                raise FieldError(
                    f"minpoly needs {degree} coefficients, got {len(minpoly)}")
            minpoly = tuple(Fraction(c) for c in minpoly)
            if not is_irreducible(minpoly):
                raise FieldError(f"minimal polynomial {minpoly} is reducible over Q")
        self.degree = degree
        self.minpoly = tuple(minpoly)
        self._reduction = self._reduction_table() if degree > 1 else None

    def _reduction_table(self) -> list[tuple[Fraction, ...]]:
        # theta^(d+k) in the power basis, k = 0 .. d-2
        d = self.degree
        cur = [-c for c in self.minpoly]
        table = [tuple(cur)]
        for _ in range(d - 2):
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [cur[i] - top * self.minpoly[i] for i in range(d)]
            table.append(tuple(cur))
        return table

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.degree == other.degree
                and self.minpoly == other.minpoly)

    def __hash__(self):
        return hash((self.degree, self.minpoly))

    def __repr__(self):
        if self.is_rational:
            return "FieldSpec(Q)"
        return f"FieldSpec({self.degree}, {list(map(str, self.minpoly))})"

    # -- element construction ----------------------------------------------

    def zero(self):
        return Fraction(0) if self.is_rational else FieldElement(self, (0,) * self.degree)

    def one(self):
        return self.embed_rational(1)

    def theta(self):
        if self.is_rational:
            raise FieldError("Q has no generator theta")
        return FieldElement(self, (0, 1) + (0,) * (self.degree - 2))

    def element(self, coords: Sequence[Rational]):
        """Build an element from power-basis coordinates (the ``normalize`` op)."""
        coords = tuple(coords)
        if len(coords) != self.degree:
            raise FieldError(
                f"expected {self.degree} coordinates, got {len(coords)}")
        if self.is_rational:
            return Fraction(coords[0])
        return FieldElement(self, coords)

    normalize = element

    def embed_rational(self, q: Rational):
        if self.is_rational:
            return Fraction(q)
        return FieldElement(self, (q,) + (0,) * (self.degree - 1))

    def coerce(self, x):
        """Map an int, Fraction or FieldElement of this field into the field."""
        if isinstance(x, FieldElement):
            if x.spec != self:
                raise FieldError("element belongs to a different field")
            return x
        if isinstance(x, (int, Fraction)):
            return self.embed_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def coords(self, x) -> tuple[Fraction, ...]:
        x = self.coerce(x)
        if self.is_rational:
            return (x,)
        return x.coords

    def invert(self, x):
        x = self.coerce(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def poly_reduce(self, poly: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Reduce a polynomial in theta to power-basis coordinates."""
        d = self.degree
        out = list(poly[:d]) + [Fraction(0)] * max(0, d - len(poly))
        for k, c in enumerate(poly[d:]):
            if c:
                row = self._reduction[k] if k < len(self._reduction) else None
                if row is None:
                    # degree beyond 2d-2: fall back to long division
                    _, r = _poly_divmod(poly, list(self.minpoly) + [1])
                    return tuple(r) + (Fraction(0),) * (d - len(r))
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(Fraction(c) for c in out)


class FieldElement:
    """Element of Q(theta); immutable, canonical coordinates."""

    __slots__ = ("spec", "coords", "_hash")

    def __init__(self, spec: FieldSpec, coords: Iterable[Rational]):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != spec.degree:
            raise FieldError(
                f"expected {spec.degree} coordinates, got {len(coords)}")
        self.spec = spec
        self.coords = coords
        self._hash = None

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldError("mixing elements of different fields")
            return other.coords
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) + (Fraction(0),) * (self.spec.degree - 1)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.spec, (a + b for a, b in zip(self.coords, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.spec, (a - b for a, b in zip(self.coords, o)))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.spec, (b - a for a, b in zip(self.coords, o)))

    def __neg__(self):
        return FieldElement(self.spec, (-a for a in self.coords))

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.spec, (a * other for a in self.coords))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.spec, self.spec.poly_reduce(_poly_mul(self.coords, o)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """Extended Euclid against the minimal polynomial."""
        if self == 0:
            raise ZeroDivisionError("inverse of zero in Q(theta)")
        m = list(self.spec.minpoly) + [Fraction(1)]
        r0, r1 = m, _trim(list(self.coords))
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r0 is a nonzero constant since minpoly is irreducible
        inv = [c / r0[0] for c in s0]
        return FieldElement(self.spec, self.spec.poly_reduce(inv))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.spec, (a / other for a in self.coords))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * FieldElement(self.spec, o).inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.spec, o) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = self.spec.one()
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coords == tuple(o)

    def __bool__(self):
        return any(self.coords)

    def __hash__(self):
        if self._hash is None:
            # rational elements hash like the corresponding Fraction
            if not any(self.coords[1:]):
                self._hash = hash(self.coords[0])
            else:
                self._hash = hash(self.coords)
        return self._hash

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self):
        return f"FieldElement({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


def format_rational(q: Rational) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Render a scalar as ``p/q`` or as a theta-polynomial, low degree first."""
    if not isinstance(x, FieldElement):
        return format_rational(x)
    parts = []
    for k, c in enumerate(x.coords):
        if c == 0:
            continue
        mono = "" if k == 0 else ("theta" if k == 1 else f"theta^{k}")
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def is_zero(x) -> bool:
    return not x


def exact_div(a, b):
    """a / b without ever producing a float from two ints."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b
