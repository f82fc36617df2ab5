"""Derivations of HV: built-in families, Leibniz checks and truncated solvers."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .algebra import HV, Basis, Box, Element
from .exactnum import exact_div
from .gamma import GammaElement, GammaHom, add as gadd, sub as gsub
from .linsolve import Echelon, Indexer, SparseMatrix, Subspace, nullspace


class OutOfBoxError(KeyError):
    """A table derivation was asked for an image it does not store."""


class Derivation:
    """Linear map HV -> HV given by its images on basis vectors."""

    kind = "abstract"

    def __init__(self, hv: HV):
        self.hv = hv

    def image(self, b: Basis) -> Element:
        raise NotImplementedError

    def apply(self, x: Element) -> Element:
        out: dict = {}
        for b, c in x.terms.items():
            img = self.image(b)
            for t, d in img.terms.items():
                v = out.get(t, 0) + c * d
                if v:
                    out[t] = v
                else:
                    out.pop(t, None)
        return Element(self.hv, out)

    __call__ = apply

    def describe(self) -> str:
        return self.kind


class Inner(Derivation):
    """ad_u : x -> [u, x]."""

    kind = "inner"

    def __init__(self, u: Element):
        super().__init__(u.hv)
        self.u = u

    def image(self, b: Basis) -> Element:
        return self.hv.bracket(self.u, self.hv.vector(b))

    def describe(self):
        return f"inner({self.u})"


class HomDerivation(Derivation):
    """D_phi : L[a,i] -> phi(a) L[a,i], H[a,i] -> phi(a) H[a,i]."""

    kind = "hom"

    def __init__(self, hv: HV, phi: GammaHom):
        super().__init__(hv)
        self.phi = phi

    def image(self, b: Basis) -> Element:
        return Element(self.hv, {b: self.phi(b.alpha)})

    def describe(self):
        from .exactnum import format_scalar
        return "hom(" + ",".join(format_scalar(t) for t in self.phi.generator_images) + ")"


def d0(hv: HV) -> HomDerivation:
    """D_0 = D_phi0 with phi0 : alpha -> alpha."""
    d = HomDerivation(hv, GammaHom.identity_embedding(hv.gamma))
    d.kind = "D0"
    return d


class D1(Derivation):
    """L[a,i] -> a H[a,i] + i H[a,i-1];  H -> 0."""

    kind = "D1"

    def image(self, b: Basis) -> Element:
        if b.kind == "H":
            return Element(self.hv)
        terms = {Basis("H", b.alpha, b.degree): self.hv.value(b.alpha)}
        if b.degree:
            terms[Basis("H", b.alpha, b.degree - 1)] = b.degree
        return Element(self.hv, terms)


class D2(Derivation):
    """H -> H;  L -> 0."""

    kind = "D2"

    def image(self, b: Basis) -> Element:
        if b.kind == "L":
            return Element(self.hv)
        return Element(self.hv, {b: 1})


class TableDerivation(Derivation):
    """Images stored explicitly on every basis vector of a box."""

    kind = "table"

    def __init__(self, hv: HV, box: Box, table: Mapping[Basis, Element]):
        super().__init__(hv)
        self.box = box
        self.table = dict(table)

    def image(self, b: Basis) -> Element:
        try:
            return self.table[b]
        except KeyError:
            raise OutOfBoxError(b) from None

    def _combine(self, other: "TableDerivation", sign) -> "TableDerivation":
        keys = set(self.table) | set(other.table)
        z = Element(self.hv)
        return TableDerivation(self.hv, self.box, {
            k: self.table.get(k, z) + sign * other.table.get(k, z) for k in keys})

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rmul__(self, scalar):
        return TableDerivation(self.hv, self.box, {k: scalar * v for k, v in self.table.items()})

    def override(self, updates: Mapping[Basis, Element]) -> "TableDerivation":
        t = dict(self.table)
        t.update(updates)
        return TableDerivation(self.hv, self.box, t)

    def __eq__(self, other):
        if not isinstance(other, TableDerivation):
            return NotImplemented
        keys = set(self.table) | set(other.table)
        z = Element(self.hv)
        return all(self.table.get(k, z) == other.table.get(k, z) for k in keys)


def tabulate(d: Derivation, box: Box) -> TableDerivation:
    return TableDerivation(d.hv, box, {b: d.image(b) for b in box.basis()})


# -- Leibniz ------------------------------------------------------------------

@dataclass
class LeibnizReport:
    ok: bool
    checked: int = 0
    unverifiable: list = field(default_factory=list)
    counterexample: tuple | None = None     # (x, y, residual)


def leibniz_residual(d: Derivation, x: Element, y: Element) -> Element:
    hv = d.hv
    return d(hv.bracket(x, y)) - hv.bracket(d(x), y) - hv.bracket(x, d(y))


def leibniz_check(d: Derivation, pairs: Iterable[tuple[Element, Element]]) -> LeibnizReport:
    rep = LeibnizReport(ok=True)
    for x, y in pairs:
        try:
            res = leibniz_residual(d, x, y)
        except OutOfBoxError:
            rep.unverifiable.append((x, y))
            continue
        rep.checked += 1
        if res:
            rep.ok = False
            rep.counterexample = (x, y, res)
            return rep
    return rep


def box_pairs(hv: HV, box: Box, in_box_only: bool = True):
    """Ordered basis pairs of ``box`` (as elements), optionally only those
    whose bracket stays in the box."""
    basis = box.basis()
    for i, v in enumerate(basis):
        for w in basis[i + 1:]:
            if in_box_only and not all(box.contains(t) for t, _ in hv.bracket_basis(v, w)):
                continue
            yield hv.vector(v), hv.vector(w)


# -- degree decomposition -----------------------------------------------------------

def decompose_by_degree(d: TableDerivation) -> dict[GammaElement, TableDerivation]:
    """Split a table derivation into its homogeneous parts D_gamma."""
    hv = d.hv
    parts: dict = defaultdict(dict)
    for v, img in d.table.items():
        for t, c in img.terms.items():
            parts[gsub(t.alpha, v.alpha)].setdefault(v, {})[t] = c
    out = {}
    for g in sorted(parts):
        table = {v: Element(hv, parts[g].get(v, {})) for v in d.table}
        out[g] = TableDerivation(hv, d.box, table)
    return out


# -- inner normalisation at L[0,0] ----------------------------------------------------

@dataclass
class NormalizationReport:
    u: Element
    residual: Element

    @property
    def ok(self) -> bool:
        return not self.residual


def base_preimage(hv: HV, target: Element, scale=1) -> Element:
    """u with [u, L[0,0]] = scale * target, for target of any shape.

    Coefficientwise [u, L00] = sum_{a,j} (-a b_{a,j} - (j+1) b_{a,j+1}) X[a,j]
    for u = sum b_{a,j} X[a,j] (X = L or H).  For a = 0 this is solved upward,
    b_{0,j+1} = -t_{0,j}/(j+1) with b_{0,0} = 0; for a != 0 downward,
    b_{a,j} = -(t_{a,j} + (j+1) b_{a,j+1})/a, which keeps u finite.
    """
    zero = hv.gamma.zero()
    groups: dict = defaultdict(dict)
    for b, c in target.terms.items():
        groups[(b.kind, b.alpha)][b.degree] = c * scale
    u: dict = {}
    for (kind, alpha), coeffs in sorted(groups.items()):
        top = max(coeffs)
        if alpha == zero:
            for j in range(top + 1):
                t = coeffs.get(j, 0)
                if t:
                    u[Basis(kind, alpha, j + 1)] = -exact_div(t, j + 1)
        else:
            a = hv.value(alpha)
            nxt = 0
            for j in range(top, -1, -1):
                b = -exact_div(coeffs.get(j, 0) + (j + 1) * nxt, a)
                if b:
                    u[Basis(kind, alpha, j)] = b
                nxt = b
    return Element(hv, u)


def normalize_at_base(d: Derivation, box: Box | None = None) -> NormalizationReport:
    """Find u with (D - ad_u)(L[0,0]) = 0."""
    hv = d.hv
    l00 = hv.L(hv.gamma.zero(), 0)
    image = d(l00)
    u = base_preimage(hv, image)
    residual = image - hv.bracket(u, l00)
    return NormalizationReport(u, residual)


# -- truncated solver ---------------------------------------------------------------

class DegenerateBoxError(ValueError):
    pass


@dataclass
class DerivationSpace:
    """Solutions of the truncated Leibniz system for degree-gamma derivations."""

    hv: HV
    shift: GammaElement
    box: Box
    columns: Indexer            # (source basis, target basis) -> column
    space: Subspace
    n_constraints: int
    degenerate: bool

    @property
    def dim(self) -> int:
        return self.space.dim

    def rule(self, vec: Mapping[int, object]) -> TableDerivation:
        table: dict = {v: {} for v in self.box.basis()}
        for c, x in vec.items():
            src, tgt = self.columns.keys[c]
            table[src][tgt] = x
        return TableDerivation(self.hv, self.box,
                               {v: Element(self.hv, t) for v, t in table.items()})

    def rules(self) -> list[TableDerivation]:
        return [self.rule(v) for v in self.space.basis]

    def vector(self, d: Derivation) -> dict | None:
        """Coordinates of ``d`` restricted to the box, or None if not representable."""
        out = {}
        for v in self.box.basis():
            for t, c in d.image(v).terms.items():
                col = self.columns.get((v, t))
                if col is None:
                    return None
                out[col] = c
        return out


def solve_derivation_space(hv: HV, shift, box: Box) -> DerivationSpace:
    shift = hv.gamma_element(shift)
    inner = box.basis()
    outer = box.outer()
    cap = outer.degree_cap
    cols = Indexer()
    unknowns: dict = {}
    for v in inner:
        tgt = gadd(v.alpha, shift)
        if tgt not in outer.support:
            unknowns[v] = ()
            continue
        unknowns[v] = tuple(Basis(k, tgt, i) for k in ("L", "H") for i in range(cap + 1))
        for b in unknowns[v]:
            cols((v, b))

    rows = []
    in_inner = box.contains
    br = hv.bracket_basis
    for a, v in enumerate(inner):
        for w in inner[a + 1:]:
            vw = br(v, w)
            if not all(in_inner(t) for t, _ in vw):
                continue
            eqs: dict = defaultdict(dict)
            for b in unknowns[v]:
                col = cols.index[(v, b)]
                for t, c in br(b, w):
                    _acc(eqs[t], col, c)
            for b in unknowns[w]:
                col = cols.index[(w, b)]
                for t, c in br(v, b):
                    _acc(eqs[t], col, c)
            for t0, c0 in vw:
                for b in unknowns[t0]:
                    _acc(eqs[b], cols.index[(t0, b)], -c0)
            for t in sorted(eqs, key=Basis.sort_key):
                if eqs[t]:
                    rows.append(eqs[t])
    if not inner:
        raise DegenerateBoxError("empty box")
    mat = SparseMatrix(len(rows), len(cols), rows)
    space = nullspace(mat)
    return DerivationSpace(hv, shift, box, cols, space, len(rows), degenerate=not rows)


def _acc(row: dict, col: int, c):
    v = row.get(col, 0) + c
    if v:
        row[col] = v
    else:
        row.pop(col, None)


# -- classification modulo inner derivations ------------------------------------------

@dataclass
class ClassifyReport:
    shift: GammaElement
    solution_dim: int            # dimension of the truncated solution space
    outer_dim: int               # dimension after restriction to the core
    inner_dim: int               # restricted inner derivations ad_u, u in HV_shift
    remainder_dim: int           # solutions not explained by inner derivations
    remainder_basis: list        # TableDerivations on the core, spanning the remainder
    outer_generators: dict       # name -> TableDerivation on the core (shift 0 only)
    outer_remainder_dim: int     # after also quotienting by the outer generators
    generators_match: bool       # span(inner + remainder) == span(inner + generators)
    degenerate: bool = False

    def components(self) -> dict:
        out: dict = defaultdict(int)
        for name in self.outer_generators:
            out[name.split(":")[0]] += 1
        return dict(out)


def _restrict(hv: HV, d_images: Mapping[Basis, Element], core_basis, idx: Indexer) -> dict:
    vec = {}
    for v in core_basis:
        for t, c in d_images[v].terms.items():
            vec[idx((v, t))] = c
    return vec


def outer_generators(hv: HV) -> dict[str, Derivation]:
    gens: dict[str, Derivation] = {}
    for j, phi in enumerate(GammaHom.basis(hv.gamma)):
        gens[f"hom:{j}"] = HomDerivation(hv, phi)
    gens["D1"] = D1(hv)
    gens["D2"] = D2(hv)
    return gens


def classify_modulo_inner(hv: HV, shift, box: Box,
                          space: DerivationSpace | None = None) -> ClassifyReport:
    """Compare truncated derivations of degree ``shift`` with ad HV (+ outer ones at 0)."""
    shift = hv.gamma_element(shift)
    if space is None:
        space = solve_derivation_space(hv, shift, box)
    core = box.core()
    core_basis = core.basis()
    idx = Indexer()
    rational = hv.field.is_rational

    sols = []
    for vec in space.space.basis:
        images: dict = {v: {} for v in core_basis}
        for c, x in vec.items():
            src, tgt = space.columns.keys[c]
            if src in images:
                images[src][tgt] = x
        sols.append({idx((v, t)): x for v in core_basis for t, x in images[v].items()})

    # u over the graded piece of degree ``shift`` up to the outer cap
    ucap = box.outer().degree_cap
    ref = []
    for k in ("L", "H"):
        for i in range(ucap + 1):
            u = hv.vector(Basis(k, shift, i))
            ad = Inner(u)
            ref.append(_restrict(hv, {v: ad.image(v) for v in core_basis}, core_basis, idx))

    inner_ech = Echelon(integral=rational)
    for r in ref:
        inner_ech.add(r)
    inner_dim = inner_ech.rank

    sol_ech = Echelon(integral=rational)
    for s in sols:
        sol_ech.add(s)
    outer_dim = sol_ech.rank

    # remainder: solutions independent modulo the inner span
    rem_ech = Echelon(integral=rational)
    for r in ref:
        rem_ech.add(r)
    remainder = []
    for s in sols:
        if rem_ech.add(s) is not None:
            remainder.append(s)

    gens: dict = {}
    gen_vecs = []
    if not any(shift):
        for name, d in outer_generators(hv).items():
            vec = _restrict(hv, {v: d.image(v) for v in core_basis}, core_basis, idx)
            gens[name] = _core_table(hv, core, vec, idx)
            gen_vecs.append(vec)

    # everything spanned by inner + generators; what is left over?
    full_ech = Echelon(integral=rational)
    for r in ref + gen_vecs:
        full_ech.add(r)
    outer_remainder = sum(1 for s in sols if full_ech.add(s) is not None)

    # span(inner + remainder) == span(inner + generators)?
    lhs = Echelon(integral=rational)
    for r in ref + remainder:
        lhs.add(r)
    rhs = Echelon(integral=rational)
    for r in ref + gen_vecs:
        rhs.add(r)
    match = (lhs.rank == rhs.rank
             and all(lhs.contains(g) for g in gen_vecs)
             and all(rhs.contains(r) for r in remainder))

    return ClassifyReport(
        shift=shift,
        solution_dim=space.dim,
        outer_dim=outer_dim,
        inner_dim=inner_dim,
        remainder_dim=len(remainder),
        remainder_basis=[_core_table(hv, core, r, idx) for r in remainder],
        outer_generators=gens,
        outer_remainder_dim=outer_remainder,
        generators_match=match,
        degenerate=space.degenerate,
    )


def _core_table(hv: HV, core: Box, vec: Mapping[int, object], idx: Indexer) -> TableDerivation:
    table: dict = {v: {} for v in core.basis()}
    for c, x in vec.items():
        v, t = idx.keys[c]
        table[v][t] = x
    return TableDerivation(hv, core, {v: Element(hv, t) for v, t in table.items()})
