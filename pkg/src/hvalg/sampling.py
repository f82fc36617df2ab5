"""Seeded random objects for suites and property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import HV, Basis, Box, Element
from .exactnum import FieldSpec
from .gamma import Character, GammaHom, GammaSpec, NotAUnitError, ScalingUnit


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def scalar(r: random.Random, field: FieldSpec, nonzero: bool = False, bound: int = 5):
    while True:
        coords = [Fraction(r.randint(-bound, bound), r.randint(1, 3)) for _ in range(field.degree)]
        x = field.element(coords)
        if not nonzero or x != 0:
            return x


def basis_vector(r: random.Random, box: Box, kind: str | None = None) -> Basis:
    k = kind or r.choice("LH")
    return Basis(k, r.choice(box.sorted_support()), r.randint(0, box.degree_cap))


def element(r: random.Random, hv: HV, box: Box, max_terms: int = 4) -> Element:
    terms = {}
    for _ in range(r.randint(0, max_terms)):
        terms[basis_vector(r, box)] = scalar(r, hv.field, nonzero=True)
    return Element(hv, terms)


def h_element(r: random.Random, hv: HV, box: Box, max_terms: int = 3) -> Element:
    terms = {}
    for _ in range(r.randint(0, max_terms)):
        terms[basis_vector(r, box, "H")] = scalar(r, hv.field, nonzero=True)
    return Element(hv, terms)


def locally_finite_element(r: random.Random, hv: HV, box: Box, max_terms: int = 3) -> Element:
    """a L[0,0] + (H-terms from the box)."""
    x = h_element(r, hv, box, max_terms)
    return x + scalar(r, hv.field) * hv.L(hv.gamma.zero(), 0)


def gamma_hom(r: random.Random, gamma: GammaSpec) -> GammaHom:
    return GammaHom(gamma, tuple(scalar(r, gamma.field) for _ in range(gamma.rank)))


def character(r: random.Random, gamma: GammaSpec) -> Character:
    return Character(gamma, tuple(scalar(r, gamma.field, nonzero=True)
                                  for _ in range(gamma.rank)))


def units(gamma: GammaSpec) -> list[ScalingUnit]:
    """Scaling units among a few small candidates (always including +-1)."""
    f = gamma.field
    cands = [f.one(), -f.one()]
    if not f.is_rational:
        t = f.theta()
        for u in (1 + t, t - 1, t, 1 - t, -1 - t, -t):
            cands.append(u)
    out = []
    for c in cands:
        try:
            out.append(gamma.scaling_unit(c))
        except NotAUnitError:
            pass
    return out


def automorphism(r: random.Random, hv: HV, box: Box):
    from .autos import AutomorphismSpec

    g = hv.gamma
    return AutomorphismSpec(hv, character(r, g), r.choice(units(g)),
                            scalar(r, hv.field, nonzero=True), h_element(r, hv, box))
