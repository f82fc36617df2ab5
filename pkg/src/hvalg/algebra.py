"""The generalized Heisenberg-Virasoro algebra HV(Gamma).

Basis vectors ``L[alpha, i]`` and ``H[alpha, i]`` (alpha in Gamma, i >= 0) with

    [L[a,i], L[b,j]] = (b - a) L[a+b, i+j] + (j - i) L[a+b, i+j-1]
    [L[a,i], H[b,j]] = b H[a+b, i+j] + j H[a+b, i+j-1]
    [H[a,i], H[b,j]] = 0

Brackets are exact and never truncated; truncation windows (:class:`Box`)
only matter to the solvers built on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Sequence

from .gamma import GammaElement, GammaSpec, add as gadd, neg as gneg
from .linsolve import Echelon, Indexer, Subspace, axpy


class AlgebraError(ValueError):
    pass


class Basis(NamedTuple):
    kind: str          # "L" or "H"
    alpha: GammaElement
    degree: int

    def sort_key(self):
        return (self.kind != "L", self.alpha, self.degree)

    def __str__(self):
        a = str(self.alpha[0]) if len(self.alpha) == 1 else "(" + ",".join(map(str, self.alpha)) + ")"
        return f"{self.kind}[{a},{self.degree}]"


def basis_key(b: Basis):
    return (b.kind != "L", b.alpha, b.degree)


class Element:
    """Finite linear combination of basis vectors; treat as immutable."""

    __slots__ = ("hv", "terms", "_hash")

    def __init__(self, hv: "HV", terms: Mapping[Basis, object] | None = None):
        self.hv = hv
        self.terms = {b: c for b, c in (terms or {}).items() if c}
        self._hash = None

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Element"):
        if other.hv is not self.hv:
            raise AlgebraError("elements of different algebras")

    def __add__(self, other):
        if not isinstance(other, Element):
            if other == 0:
                return self
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        axpy(out, 1, other.terms)
        return Element(self.hv, out)

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        axpy(out, -1, other.terms)
        return Element(self.hv, out)

    def __neg__(self):
        return Element(self.hv, {b: -c for b, c in self.terms.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, Element):
            return NotImplemented
        if not scalar:
            return Element(self.hv)
        return Element(self.hv, {b: c * scalar for b, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.hv is other.hv and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """Terms in canonical order: L before H, then alpha, then degree."""
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def coeff(self, b: Basis):
        return self.terms.get(b, 0)

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        from .syntax import format_element
        return format_element(self)

    # -- queries ------------------------------------------------------------

    def support(self) -> set:
        return {b.alpha for b in self.terms}

    def grade_component(self, alpha: GammaElement) -> "Element":
        alpha = self.hv.gamma_element(alpha)
        return Element(self.hv, {b: c for b, c in self.terms.items() if b.alpha == alpha})

    def filtration_level(self) -> int:
        if not self.terms:
            raise AlgebraError("the zero element has no filtration level")
        return max(b.degree for b in self.terms)

    def l_part(self) -> "Element":
        return Element(self.hv, {b: c for b, c in self.terms.items() if b.kind == "L"})

    def h_part(self) -> "Element":
        return Element(self.hv, {b: c for b, c in self.terms.items() if b.kind == "H"})


class HV:
    """HV(Gamma) over the field of ``gamma``."""

    def __init__(self, gamma: GammaSpec):
        self.gamma = gamma
        self.field = gamma.field
        self._cache: dict = {}

    @property
    def rank(self) -> int:
        return self.gamma.rank

    def gamma_element(self, alpha) -> GammaElement:
        if isinstance(alpha, int):
            alpha = (alpha,)
        alpha = tuple(alpha)
        if len(alpha) != self.rank:
            raise AlgebraError(f"Gamma has rank {self.rank}, got coordinates {alpha}")
        return alpha

    def basis(self, kind: str, alpha, degree: int) -> Basis:
        if kind not in ("L", "H"):
            raise AlgebraError(f"unknown basis kind {kind!r}")
        if degree < 0:
            raise AlgebraError("degree must be nonnegative")
        return Basis(kind, self.gamma_element(alpha), degree)

    def L(self, alpha, i: int) -> Element:
        return Element(self, {self.basis("L", alpha, i): 1})

    def H(self, alpha, i: int) -> Element:
        return Element(self, {self.basis("H", alpha, i): 1})

    def element(self, terms: Mapping[Basis, object] | Iterable = ()) -> Element:
        if not isinstance(terms, Mapping):
            out: dict = {}
            for b, c in terms:
                axpy(out, 1, {b: c})
            terms = out
        return Element(self, terms)

    def vector(self, b: Basis) -> Element:
        return Element(self, {b: 1})

    def zero(self) -> Element:
        return Element(self)

    def value(self, alpha: GammaElement):
        return self.gamma.value(alpha)

    # -- the bracket ----------------------------------------------------------

    def bracket_basis(self, v: Basis, w: Basis) -> tuple:
        """[v, w] as a tuple of (basis, coefficient) pairs; cached."""
        key = (v, w)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = self._bracket_basis(v, w)
        self._cache[key] = out
        return out

    def _bracket_basis(self, v: Basis, w: Basis) -> tuple:
        if v.kind == "H" and w.kind == "H":
            return ()
        if v.kind == "H":
            return tuple((b, -c) for b, c in self.bracket_basis(w, v))
        a, i = v.alpha, v.degree
        b, j = w.alpha, w.degree
        s = gadd(a, b)
        val = self.gamma.value
        if w.kind == "L":
            top = val(b) - val(a)
            low = j - i
            kind = "L"
        else:
            top = val(b)
            low = j
            kind = "H"
        out = []
        if low:
            # the structure constants vanish exactly where i+j-1 would be -1
            assert i + j >= 1
            out.append((Basis(kind, s, i + j - 1), low))
        if top:
            out.append((Basis(kind, s, i + j), top))
        return tuple(out)

    def bracket(self, x: Element, y: Element) -> Element:
        if x.hv is not self or y.hv is not self:
            raise AlgebraError("bracket of elements from a different algebra")
        out: dict = {}
        for v, cv in x.terms.items():
            for w, cw in y.terms.items():
                cc = cv * cw
                for b, c in self.bracket_basis(v, w):
                    t = out.get(b, 0) + cc * c
                    if t:
                        out[b] = t
                    else:
                        del out[b]
        return Element(self, out)

    def ad(self, x: Element):
        return lambda y: self.bracket(x, y)

    # -- structural queries -----------------------------------------------------

    def in_locally_finite_set(self, x: Element) -> bool:
        """x = a L[0,0] + (finite sum of H's)?"""
        zero = self.gamma.zero()
        return all(b.kind == "H" or (b.alpha == zero and b.degree == 0) for b in x.terms)

    def ad_orbit_dim(self, x: Element, probe: Element, cap: int) -> tuple[int, bool]:
        """Dimension of span{ad_x^k(probe) : k <= cap} and whether it stabilised.

        Stabilised means some iterate ad_x^k(probe) with k <= cap already lay
        in the span of the earlier ones, so the span is ad_x-invariant.
        """
        if cap < 1:
            raise AlgebraError("iteration cap must be at least 1")
        idx = Indexer()
        ech = Echelon(integral=self.field.is_rational)
        y = probe
        for _ in range(cap + 1):
            vec = {idx(b): c for b, c in y.terms.items()}
            if ech.add(vec) is None:
                return ech.rank, True
            y = self.bracket(x, y)
        return ech.rank, False

    def ideal_closure(self, generators: Sequence[Element], box: "Box") -> list[Element]:
        """Truncated ideal generated by ``generators``, reported on the inner box.

        Works in the outer box: brackets with inner-box basis vectors are
        projected onto the outer box until the span stops growing.
        """
        outer = box.outer()
        outer_basis = outer.basis()
        inner = set(box.basis())
        # outer-only columns first, so rows pivoting on inner columns span the
        # intersection with the inner box
        order = sorted(outer_basis, key=lambda b: (b in inner, b.sort_key()))
        idx = Indexer(order)
        n_outer_only = len(order) - len(inner)
        in_outer = outer.contains
        ech = Echelon(integral=self.field.is_rational)

        def project(el_terms):
            return {idx.index[b]: c for b, c in el_terms.items() if in_outer(b)}

        queue = []
        for g in generators:
            vec = project(g.terms)
            if vec and ech.add(vec) is not None:
                queue.append(vec)
        probes = [self.vector(b) for b in box.basis()]
        while queue:
            vec = queue.pop(0)
            x = Element(self, {idx.keys[c]: v for c, v in vec.items()})
            for p in probes:
                y = self.bracket(p, x)
                nv = project(y.terms)
                if nv and ech.add(nv) is not None:
                    queue.append(nv)
        out = []
        for piv in sorted(ech.rows):
            if piv >= n_outer_only:
                row = ech.normalized_row(piv)
                out.append(Element(self, {idx.keys[c]: v for c, v in row.items()}))
        return sorted(out, key=lambda e: e.items()[0][0].sort_key())


@dataclass(frozen=True)
class Box:
    """Truncation window: Gamma-support ``support`` and degrees ``<= degree_cap``.

    ``outer()`` widens to support S+S and cap N+margin; ``core()`` shrinks the
    support by ``core_radius`` generator steps and the cap by one.
    """

    support: frozenset
    degree_cap: int
    margin: int = 2
    core_radius: int = 2

    def __post_init__(self):
        s = frozenset(tuple(a) for a in self.support)
        object.__setattr__(self, "support", s)
        if not s:
            raise AlgebraError("empty box support")
        if self.degree_cap < 0 or self.margin < 0:
            raise AlgebraError("degree cap and margin must be nonnegative")
        rank = len(next(iter(s)))
        if (0,) * rank not in s:
            raise AlgebraError("box support must contain 0")
        if any(gneg(a) not in s for a in s):
            raise AlgebraError("box support must be closed under negation")

    @classmethod
    def ball(cls, gamma: GammaSpec, radius: int, degree_cap: int, margin: int = 2,
             core_radius: int | None = None, norm: str = "l1") -> "Box":
        if core_radius is None:
            # keep at least one ring of the support outside the core
            core_radius = max(min(2, radius - 1), 1)
        return cls(frozenset(gamma.ball(radius, norm)), degree_cap, margin, core_radius)

    @property
    def rank(self) -> int:
        return len(next(iter(self.support)))

    def sorted_support(self) -> list:
        return sorted(self.support)

    def basis(self) -> list[Basis]:
        out = [Basis(k, a, i) for k in ("L", "H") for a in self.sorted_support()
               for i in range(self.degree_cap + 1)]
        return out

    def contains(self, b: Basis) -> bool:
        return b.alpha in self.support and b.degree <= self.degree_cap

    __contains__ = contains

    def contains_element(self, x: Element) -> bool:
        return all(self.contains(b) for b in x.terms)

    def outer(self) -> "Box":
        s = frozenset(gadd(a, b) for a in self.support for b in self.support)
        return Box(s, self.degree_cap + self.margin, 0, 0)

    def core(self) -> "Box":
        rank = self.rank
        steps = [d for d in product(range(-self.core_radius, self.core_radius + 1), repeat=rank)
                 if sum(map(abs, d)) <= self.core_radius]
        s = frozenset(a for a in self.support if all(gadd(a, d) in self.support for d in steps))
        if not s:
            s = frozenset([(0,) * rank])
        return Box(s, max(self.degree_cap - 1, 0), 0, 0)

    def scaled(self, delta: int) -> "Box":
        """Grow (delta > 0) or shrink the support radius and degree cap."""
        rank = self.rank
        radius = max(sum(map(abs, a)) for a in self.support) + delta
        steps = [d for d in product(range(-max(radius, 0), max(radius, 0) + 1), repeat=rank)
                 if sum(map(abs, d)) <= radius]
        return Box(frozenset(steps or [(0,) * rank]), max(self.degree_cap + delta, 0),
                   self.margin, self.core_radius)


def default_box(gamma: GammaSpec) -> Box:
    """S = {-4..4}, N = 3, m = 2 for rank one; radius-2 ball, N = 2 otherwise."""
    if gamma.rank == 1:
        return Box.ball(gamma, 4, 3, 2)
    return Box.ball(gamma, 2, 2, 2)
