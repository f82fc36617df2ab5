"""Automorphisms exp(ad h) o phi_{tau,c,e} of HV, with h a pure H-element."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .algebra import HV, Basis, Element
from .deriv import base_preimage
from .gamma import Character, ScalingUnit


class AutomorphismError(ValueError):
    pass


@dataclass
class HomomorphismReport:
    ok: bool
    checked: int = 0
    counterexample: tuple | None = None     # (x, y, sigma([x,y]) - [sigma x, sigma y])


class AutomorphismSpec:
    """sigma(L[a,i]) = tau(a) c^(i-1) (L[ca,i] + [h, L[ca,i]]),
    sigma(H[a,j]) = tau(a) e c^j H[ca,j]."""

    def __init__(self, hv: HV, tau: Character, c: ScalingUnit, e, h: Element | None = None):
        self.hv = hv
        self.tau = tau
        self.c = c
        self.e = hv.field.coerce(e)
        if self.e == 0:
            raise AutomorphismError("e must be nonzero")
        self.h = h if h is not None else hv.zero()
        if any(b.kind != "H" for b in self.h.terms):
            raise AutomorphismError("the inner part h must be a combination of H-vectors")

    @classmethod
    def identity(cls, hv: HV) -> "AutomorphismSpec":
        g = hv.gamma
        return cls(hv, Character.trivial(g), ScalingUnit.identity(g), g.field.one())

    # -- action ------------------------------------------------------------------

    def linear_image(self, b: Basis) -> Element:
        """phi_{tau,c,e}(b), the part without exp(ad h)."""
        cv = self.c.value
        ca = self.c.act(b.alpha)
        t = self.tau(b.alpha)
        if b.kind == "L":
            coeff = t * cv ** (b.degree - 1)
        else:
            coeff = t * self.e * cv ** b.degree
        return Element(self.hv, {Basis(b.kind, ca, b.degree): coeff})

    def image(self, b: Basis) -> Element:
        y = self.linear_image(b)
        if b.kind == "L" and self.h:
            y = y + self.hv.bracket(self.h, y)
        return y

    def apply(self, x: Element) -> Element:
        out = self.hv.zero()
        for b, c in x.terms.items():
            out = out + c * self.image(b)
        return out

    __call__ = apply

    def linear_apply(self, x: Element) -> Element:
        out = self.hv.zero()
        for b, c in x.terms.items():
            out = out + c * self.linear_image(b)
        return out

    # -- group law ---------------------------------------------------------------

    def compose(self, other: "AutomorphismSpec") -> "AutomorphismSpec":
        """self o other: exp(ad h1) phi1 exp(ad h2) phi2 = exp(ad(h1 + phi1 h2)) phi1 phi2."""
        g = self.hv.gamma
        tau = Character(g, tuple(self.tau(other.c.act(gen)) * other.tau(gen)
                                 for gen in _generators(g.rank)))
        c = self.c.compose(other.c)
        h = self.h + self.linear_apply(other.h)
        return AutomorphismSpec(self.hv, tau, c, self.e * other.e, h)

    def inverse(self) -> "AutomorphismSpec":
        g = self.hv.gamma
        cinv = self.c.inverse()
        one = g.field.one()
        tau = Character(g, tuple(one / self.tau(cinv.act(gen)) for gen in _generators(g.rank)))
        lin = AutomorphismSpec(self.hv, tau, cinv, one / self.e)
        return AutomorphismSpec(self.hv, tau, cinv, lin.e, -lin.linear_apply(self.h))

    def canonical(self) -> tuple:
        return (tuple(self.tau.generator_images), self.c.value, self.c.matrix, self.e,
                tuple(self.h.items()))

    def __eq__(self, other):
        if not isinstance(other, AutomorphismSpec):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        from .exactnum import format_scalar
        tau = ",".join(format_scalar(t) for t in self.tau.generator_images)
        return (f"tau={tau};c={format_scalar(self.c.value)};"
                f"e={format_scalar(self.e)};h={self.h}")


def _generators(k: int):
    return [tuple(int(i == j) for i in range(k)) for j in range(k)]


def verify_homomorphism(sigma: AutomorphismSpec,
                        pairs: Iterable[tuple[Element, Element]]) -> HomomorphismReport:
    hv = sigma.hv
    rep = HomomorphismReport(ok=True)
    for x, y in pairs:
        lhs = sigma(hv.bracket(x, y))
        rhs = hv.bracket(sigma(x), sigma(y))
        rep.checked += 1
        if lhs != rhs:
            rep.ok = False
            rep.counterexample = (x, y, lhs - rhs)
            return rep
    return rep


def operators_equal(s1, s2, basis: Iterable[Basis]):
    """First basis vector where the two maps differ, or None."""
    for b in basis:
        v = s1.hv.vector(b)
        if s1(v) != s2(v):
            return b
    return None


def inner_from_base_image(target: Element) -> tuple[Element, object]:
    """(h, c) with exp(ad h)(c^-1 L[0,0]) = target for target = c^-1 L[0,0] + (H-terms)."""
    hv = target.hv
    l00 = Basis("L", hv.gamma.zero(), 0)
    others = [b for b in target.terms if b.kind == "L" and b != l00]
    if others:
        raise AutomorphismError(f"target has L-terms besides L[0,0]: {others[0]}")
    a = target.coeff(l00)
    if not a:
        raise AutomorphismError("target has no L[0,0] term")
    c = hv.field.one() / a
    h = base_preimage(hv, target.h_part(), scale=c)
    if hv.bracket(h, hv.vector(l00)) * a != target.h_part():
        raise AutomorphismError("inner part does not reproduce the target")
    return h, c
