"""Scalar 2-cocycles on HV: evaluation, checks, normalization and truncated H^2."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .algebra import HV, Basis, Box, Element
from .exactnum import exact_div
from .gamma import add as gadd
from .linsolve import Echelon, Indexer, SparseMatrix, Subspace, nullspace


class CocycleDomainError(KeyError):
    """A pair outside the stored domain of a cocycle was evaluated."""


class InsufficientMarginError(ValueError):
    """A recursion needed a cocycle value on a pair outside the box."""

    def __init__(self, pair):
        super().__init__(f"missing value on pair ({pair[0]}, {pair[1]})")
        self.pair = pair


class ReductionFailure(AssertionError):
    def __init__(self, pair, value):
        super().__init__(f"reduced cocycle is {value} on ({pair[0]}, {pair[1]})")
        self.pair = pair
        self.value = value


def _ordered(v: Basis, w: Basis) -> tuple[tuple[Basis, Basis], int]:
    if v.sort_key() < w.sort_key():
        return (v, w), 1
    return (w, v), -1


class Cocycle:
    """Alternating bilinear form stored on ordered basis pairs v < w of ``box``.

    Pairs in ``missing`` are inside the box but have no value.
    """

    def __init__(self, hv: HV, box: Box, values: Mapping | None = None,
                 missing: Iterable = ()):
        self.hv = hv
        self.box = box
        self.values = {k: v for k, v in (values or {}).items() if v}
        self.missing = frozenset(missing)

    def defined(self, v: Basis, w: Basis) -> bool:
        if v == w:
            return self.box.contains(v)
        return (self.box.contains(v) and self.box.contains(w)
                and _ordered(v, w)[0] not in self.missing)

    def value(self, v: Basis, w: Basis):
        if v == w:
            if not self.box.contains(v):
                raise CocycleDomainError((v, w))
            return 0
        if not self.defined(v, w):
            raise CocycleDomainError((v, w))
        key, sign = _ordered(v, w)
        c = self.values.get(key, 0)
        return c if sign > 0 else -c

    def eval(self, x: Element, y: Element):
        out = 0
        for v, a in x.terms.items():
            for w, b in y.terms.items():
                c = self.value(v, w)
                if c:
                    out = out + a * b * c
        return out

    __call__ = eval

    def __sub__(self, other: "Cocycle") -> "Cocycle":
        keys = set(self.values) | set(other.values)
        vals = {k: self.values.get(k, 0) - other.values.get(k, 0) for k in keys}
        return Cocycle(self.hv, self.box, vals, self.missing | other.missing)

    def __add__(self, other: "Cocycle") -> "Cocycle":
        keys = set(self.values) | set(other.values)
        vals = {k: self.values.get(k, 0) + other.values.get(k, 0) for k in keys}
        return Cocycle(self.hv, self.box, vals, self.missing | other.missing)

    def __rmul__(self, scalar) -> "Cocycle":
        return Cocycle(self.hv, self.box, {k: scalar * v for k, v in self.values.items()},
                       self.missing)

    def with_value(self, v: Basis, w: Basis, c) -> "Cocycle":
        key, sign = _ordered(v, w)
        vals = dict(self.values)
        vals[key] = c if sign > 0 else -c
        return Cocycle(self.hv, self.box, vals, self.missing)

    def records(self) -> list[tuple[Basis, Basis, object]]:
        return [(v, w, c) for (v, w), c in sorted(
            self.values.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))]


class Functional:
    """Linear map HV -> F given on basis vectors; ``domain`` is the set where it is known."""

    def __init__(self, hv: HV, values: Mapping[Basis, object], domain=None):
        self.hv = hv
        self.values = {b: c for b, c in values.items()}
        self.domain = domain    # Box, a set of Basis, or None for "everywhere"

    def defined(self, b: Basis) -> bool:
        if self.domain is None:
            return True
        if isinstance(self.domain, Box):
            return self.domain.contains(b)
        return b in self.domain

    def __call__(self, x: Element):
        out = 0
        for b, c in x.terms.items():
            if not self.defined(b):
                raise KeyError(b)
            v = self.values.get(b, 0)
            if v:
                out = out + c * v
        return out

    def is_zero(self) -> bool:
        return not any(self.values.values())


# -- identity checks --------------------------------------------------------------

def box_triples(hv: HV, box: Box, within: Box | None = None):
    """Basis triples u < v < w of ``box`` whose pairwise brackets lie in ``within``."""
    within = within or box
    basis = box.basis()
    br = hv.bracket_basis
    inside = within.contains

    def ok(a, b):
        return all(inside(t) for t, _ in br(a, b))

    n = len(basis)
    for a in range(n):
        u = basis[a]
        for b in range(a + 1, n):
            v = basis[b]
            if not ok(u, v):
                continue
            for c in range(b + 1, n):
                w = basis[c]
                if ok(v, w) and ok(u, w):
                    yield u, v, w


def cocycle_residual(psi: Cocycle, x: Basis, y: Basis, z: Basis):
    hv = psi.hv
    out = 0
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        for t, k in hv.bracket_basis(b, c):
            out = out + k * psi.value(a, t)
    return out


@dataclass
class CocycleReport:
    ok: bool
    checked: int = 0
    skipped: int = 0
    counterexample: tuple | None = None     # (x, y, z, residual)


def cocycle_check(psi: Cocycle, box: Box | None = None) -> CocycleReport:
    """Cocycle identity on all triples of ``box`` (default ``psi.box``)."""
    rep = CocycleReport(ok=True)
    for x, y, z in box_triples(psi.hv, box or psi.box, psi.box):
        try:
            r = cocycle_residual(psi, x, y, z)
        except CocycleDomainError:
            rep.skipped += 1
            continue
        rep.checked += 1
        if r:
            rep.ok = False
            rep.counterexample = (x, y, z, r)
            return rep
    return rep


def coboundary_of(f: Functional, box: Box) -> Cocycle:
    """psi_f(v, w) = f([v, w]) on pairs of ``box``; pairs where f is unknown go to ``missing``."""
    hv = f.hv
    basis = box.basis()
    values = {}
    missing = []
    for a, v in enumerate(basis):
        for w in basis[a + 1:]:
            terms = hv.bracket_basis(v, w)
            if not all(f.defined(t) for t, _ in terms):
                missing.append((v, w))
                continue
            s = 0
            for t, c in terms:
                x = f.values.get(t, 0)
                if x:
                    s = s + c * x
            if s:
                values[(v, w)] = s
    return Cocycle(hv, box, values, missing)


# -- normalization ------------------------------------------------------------------

def normalization_functional(psi: Cocycle, vectors: Iterable[Basis] | None = None,
                             overrides: Mapping[Basis, object] | None = None) -> Functional:
    """The functional f whose coboundary absorbs psi's (L[0,0], .) and (L[0,1], H[0,.]) values.

    f(L[0,i]) = psi(L[0,0], L[0,i+1]) / (i+1)
    f(H[0,0]) = psi(L[0,0], H[0,1]),  f(H[0,i]) = psi(L[0,1], H[0,i]) / i
    f(X[a,i]) = (psi(L[0,0], X[a,i]) - i f(X[a,i-1])) / a   for a != 0
    ``overrides`` pins chosen values before the recursion runs.
    """
    hv = psi.hv
    zero = hv.gamma.zero()
    l00 = Basis("L", zero, 0)
    l01 = Basis("L", zero, 1)
    memo: dict = dict(overrides or {})

    def probe(v, w):
        try:
            return psi.value(v, w)
        except CocycleDomainError:
            raise InsufficientMarginError((v, w)) from None

    def f(b: Basis):
        hit = memo.get(b)
        if hit is not None or b in memo:
            return hit
        i = b.degree
        if b.alpha == zero:
            if b.kind == "L":
                val = exact_div(probe(l00, Basis("L", zero, i + 1)), i + 1)
            elif i == 0:
                val = probe(l00, Basis("H", zero, 1))
            else:
                val = exact_div(probe(l01, b), i)
        else:
            prev = f(Basis(b.kind, b.alpha, i - 1)) if i else 0
            val = exact_div(probe(l00, b) - i * prev, hv.value(b.alpha))
        memo[b] = val
        return val

    targets = psi.box.basis() if vectors is None else list(vectors)
    for b in targets:
        f(b)
    domain = set(memo)
    return Functional(hv, {b: v for b, v in memo.items() if v}, domain)


@dataclass
class Reduction:
    phi: Cocycle
    f: Functional
    checked: int = 0
    unverifiable: list = field(default_factory=list)   # core pairs where phi is unknown


def reduce(psi: Cocycle, core: Box | None = None,
           overrides: Mapping[Basis, object] | None = None, strict: bool = True) -> Reduction:
    """phi = psi - psi_f for the normalization functional f.

    f is computed on every box vector whose probes exist.  phi is then checked
    to vanish on all (L, H) and (H, H) pairs of ``core``; pairs whose bracket
    leaves f's domain are listed as unverifiable.
    """
    hv = psi.hv
    core = core or psi.box.core()
    vectors = []
    for b in psi.box.basis():
        try:
            normalization_functional(psi, [b], overrides)
        except InsufficientMarginError:
            continue
        vectors.append(b)
    f = normalization_functional(psi, vectors, overrides)
    phi = psi - coboundary_of(f, psi.box)
    red = Reduction(phi, f)
    basis = core.basis()
    for a, v in enumerate(basis):
        for w in basis[a + 1:]:
            if v.kind == "L" and w.kind == "L":
                continue
            if not phi.defined(v, w):
                red.unverifiable.append((v, w))
                continue
            red.checked += 1
            c = phi.value(v, w)
            if c and strict:
                raise ReductionFailure((v, w), c)
    return red


@dataclass
class QuadraticFit:
    profile: dict          # alpha -> c(alpha)
    b: object              # fitted coefficient
    fits: bool


def quadratic_profile(phi: Cocycle, support=None) -> dict:
    """c(alpha) = phi(L[alpha,0], H[-alpha,0]) over ``support`` (default: core support)."""
    hv = phi.hv
    support = sorted(support if support is not None else phi.box.core().support)
    out = {}
    for a in support:
        neg = tuple(-x for x in a)
        out[a] = phi.value(Basis("L", a, 0), Basis("H", neg, 0))
    return out


def fit_quadratic(hv: HV, profile: Mapping) -> QuadraticFit:
    """Fit c(alpha) = b (alpha^2 - alpha), preferring the point 2 * (first generator)."""
    one = hv.gamma.distinguished_one()
    two = tuple(2 * x for x in one)
    order = sorted(profile, key=lambda a: (a != two, a))
    b = 0
    for a in order:
        v = hv.value(a)
        q = v * v - v
        if q:
            b = exact_div(profile[a], q)
            break
    fits = all(profile[a] == b * (hv.value(a) * hv.value(a) - hv.value(a)) for a in profile)
    return QuadraticFit(dict(profile), b, fits)


# -- truncated cocycle space ------------------------------------------------------------

@dataclass
class CocycleSpace:
    hv: HV
    box: Box
    columns: Indexer          # ordered pair -> column
    space: Subspace
    n_constraints: int

    @property
    def dim(self) -> int:
        return self.space.dim

    def cocycle(self, vec: Mapping[int, object]) -> Cocycle:
        return Cocycle(self.hv, self.box, {self.columns.keys[c]: x for c, x in vec.items()})

    def cocycles(self) -> list[Cocycle]:
        return [self.cocycle(v) for v in self.space.basis]


def solve_cocycle_space(hv: HV, box: Box) -> CocycleSpace:
    """All alternating forms on box pairs satisfying the identity on in-box triples."""
    basis = box.basis()
    pairs = [(v, w) for a, v in enumerate(basis) for w in basis[a + 1:]]
    # block by total degree: columns sorted by (alpha(v)+alpha(w), pair)
    pairs.sort(key=lambda p: (gadd(p[0].alpha, p[1].alpha), p[0].sort_key(), p[1].sort_key()))
    cols = Indexer(pairs)
    rows = []
    br = hv.bracket_basis
    for x, y, z in box_triples(hv, box):
        row: dict = {}
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            for t, k in br(b, c):
                if t == a:
                    continue
                key, sign = _ordered(a, t)
                col = cols.index[key]
                v = row.get(col, 0) + sign * k
                if v:
                    row[col] = v
                else:
                    row.pop(col, None)
        if row:
            rows.append(row)
    mat = SparseMatrix(len(rows), len(cols), rows)
    return CocycleSpace(hv, box, cols, nullspace(mat), len(rows))


@dataclass
class H2Report:
    cocycle_dim: int
    coboundary_dim_restricted: int
    cocycle_dim_restricted: int
    quotient_on_core: int | None      # None when the box gives no verdict
    n_constraints: int
    solve_degree_cap: int
    degenerate: bool


def restricted_coboundaries(hv: HV, core: Box, idx: Indexer) -> list[dict]:
    """Spanning set of {psi_f restricted to core pairs}: one vector per target basis vector."""
    by_target: dict = defaultdict(dict)
    basis = core.basis()
    for a, v in enumerate(basis):
        for w in basis[a + 1:]:
            for t, c in hv.bracket_basis(v, w):
                by_target[t][idx((v, w))] = c
    return [by_target[t] for t in sorted(by_target, key=Basis.sort_key)]


def solve_box_for_h2(box: Box) -> Box:
    """The box's support with the degree cap raised by the margin."""
    return Box(box.support, box.degree_cap + box.margin, 0, box.core_radius)


def h2_report(hv: HV, box: Box, space: CocycleSpace | None = None) -> H2Report:
    """dim of truncated cocycles modulo coboundaries, both restricted to the core.

    Cocycles are solved on ``solve_box_for_h2(box)`` so that the top degree
    layer of the core is constrained; the verdict is taken on ``box.core()``.
    """
    core = box.core()
    degenerate = next(box_triples(hv, box), None) is None
    if space is None:
        space = solve_cocycle_space(hv, solve_box_for_h2(box))
    core_set = set(core.basis())
    idx = Indexer()
    rational = hv.field.is_rational

    cob = Echelon(integral=rational)
    for vec in restricted_coboundaries(hv, core, idx):
        cob.add(vec)

    coc = Echelon(integral=rational)
    for vec in space.space.basis:
        r = {}
        for c, x in vec.items():
            v, w = space.columns.keys[c]
            if v in core_set and w in core_set:
                r[idx((v, w))] = x
        coc.add(r)

    # coboundaries are cocycles, so their restrictions lie in the restricted space
    for p in list(cob.rows):
        if not coc.contains(cob.rows[p]):
            raise AssertionError("restricted coboundary outside the restricted cocycle space")

    quotient = None if degenerate else coc.rank - cob.rank
    return H2Report(space.dim, cob.rank, coc.rank, quotient, space.n_constraints,
                    space.box.degree_cap, degenerate)
