"""Independent reference computations for the test suite.

Nothing here imports the package: structure constants, scalars and linear
algebra are re-implemented in the most direct way (dense Gauss-Jordan on
lists) so the solver results can be cross-checked on small boxes.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


class Sqrt2:
    """a + b*sqrt(2) with rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def lift(x):
        return x if isinstance(x, Sqrt2) else Sqrt2(x)

    def __add__(self, o):
        o = Sqrt2.lift(o)
        return Sqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Sqrt2(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-Sqrt2.lift(o))

    def __rsub__(self, o):
        return Sqrt2.lift(o) - self

    def __mul__(self, o):
        o = Sqrt2.lift(o)
        return Sqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = Sqrt2.lift(o)
        n = o.a * o.a - 2 * o.b * o.b
        return self * Sqrt2(o.a / n, -o.b / n)

    def __rtruediv__(self, o):
        return Sqrt2.lift(o) / self

    def __eq__(self, o):
        o = Sqrt2.lift(o)
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)


# -- the algebra, from its defining relations -------------------------------------

class Algebra:
    """Basis triples (kind, alpha, i); ``value`` maps alpha (an int tuple) to a scalar."""

    def __init__(self, value):
        self.value = value

    def bracket(self, x, y):
        """Dict basis -> coefficient for [x, y] of two basis triples."""
        kx, a, i = x
        ky, b, j = y
        s = tuple(p + q for p, q in zip(a, b))
        va, vb = self.value(a), self.value(b)
        out = {}

        def put(k, deg, c):
            if c:
                out[(k, s, deg)] = out.get((k, s, deg), 0) + c

        if kx == "L" and ky == "L":
            put("L", i + j, vb - va)
            put("L", i + j - 1, j - i)
        elif kx == "L" and ky == "H":
            put("H", i + j, vb)
            put("H", i + j - 1, j)
        elif kx == "H" and ky == "L":
            put("H", i + j, -va)
            put("H", i + j - 1, -i)
        return {k: c for k, c in out.items() if c}


def box_basis(support, cap):
    return [(k, a, i) for k in "LH" for a in sorted(support) for i in range(cap + 1)]


def ball(rank, radius):
    return sorted(p for p in product(range(-radius, radius + 1), repeat=rank)
                  if sum(map(abs, p)) <= radius)


def core_of(support, radius, cap):
    rank = len(next(iter(support)))
    steps = ball(rank, radius)
    s = [a for a in support if all(tuple(x + d for x, d in zip(a, st)) in support
                                   for st in steps)]
    return s or [(0,) * rank], max(cap - 1, 0)


# -- dense linear algebra ---------------------------------------------------------------

def rref(rows, ncols):
    """Gauss-Jordan, one row at a time: returns (reduced rows, pivot columns).

    Each incoming row is cleared against the current reduced rows; a nonzero
    remainder is scaled to a leading 1 and used to clear its column elsewhere.
    """
    basis = {}          # pivot column -> dense row with 1 there
    for row in rows:
        r = [x if isinstance(x, Sqrt2) else Fraction(x) for x in row]
        for p, b in basis.items():
            f = r[p]
            if f:
                r = [x - f * y for x, y in zip(r, b)]
        c = next((i for i, x in enumerate(r) if x), None)
        if c is None:
            continue
        p = r[c]
        r = [x / p for x in r]
        for q, b in basis.items():
            f = b[c]
            if f:
                basis[q] = [x - f * y for x, y in zip(b, r)]
        basis[c] = r
    piv = sorted(basis)
    return [basis[p] for p in piv], piv


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols, zero=Fraction(0), one=Fraction(1)):
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(red, piv):
            v[p] = -row[f]
        out.append(v)
    return out


def dense(vecs, ncols, zero):
    return [[v.get(c, zero) for c in range(ncols)] for v in vecs]


# -- derivations -------------------------------------------------------------------

def derivation_remainders(alg, support, cap, margin, core_radius, shift, zero, one):
    """(remainder modulo inner, remainder modulo inner + outer generators) on the core."""
    rank_ = len(shift)
    inner = box_basis(support, cap)
    inner_set = set(inner)
    outer_support = {tuple(x + y for x, y in zip(a, b)) for a in support for b in support}
    ocap = cap + margin
    cols = {}
    unknowns = {}
    for v in inner:
        t = tuple(x + y for x, y in zip(v[1], shift))
        unknowns[v] = [(k, t, i) for k in "LH" for i in range(ocap + 1)] if t in outer_support else []
        for b in unknowns[v]:
            cols[(v, b)] = len(cols)
    rows = []
    for n, v in enumerate(inner):
        for w in inner[n + 1:]:
            vw = alg.bracket(v, w)
            if not all(t in inner_set for t in vw):
                continue
            eq = {}
            for b in unknowns[v]:
                for t, c in alg.bracket(b, w).items():
                    eq.setdefault(t, {})
                    eq[t][cols[(v, b)]] = eq[t].get(cols[(v, b)], 0) + c
            for b in unknowns[w]:
                for t, c in alg.bracket(v, b).items():
                    eq.setdefault(t, {})
                    eq[t][cols[(w, b)]] = eq[t].get(cols[(w, b)], 0) + c
            for t0, c0 in vw.items():
                for b in unknowns[t0]:
                    eq.setdefault(b, {})
                    eq[b][cols[(t0, b)]] = eq[b].get(cols[(t0, b)], 0) - c0
            rows.extend(r for r in eq.values() if any(r.values()))
    sols = nullspace(dense(rows, len(cols), zero), len(cols), zero, one)
    keys = list(cols)

    csup, ccap = core_of(set(support), core_radius, cap)
    core = box_basis(csup, ccap)
    core_set = set(core)
    ridx = {}

    def restrict(images):
        vec = {}
        for v in core:
            for t, c in images(v).items():
                if c:
                    vec[ridx.setdefault((v, t), len(ridx))] = c
        return vec

    sol_r = []
    for s in sols:
        img = {}
        for c, x in enumerate(s):
            if x:
                v, t = keys[c]
                img.setdefault(v, {})[t] = x
        sol_r.append(restrict(lambda v: img.get(v, {})))
    ref = []
    for k in "LH":
        for i in range(ocap + 1):
            u = (k, shift, i)
            ref.append(restrict(lambda v: alg.bracket(u, v)))
    gens = []
    if not any(shift):
        for j in range(rank_):
            gens.append(restrict(lambda v: {v: v[1][j] * one}))
        gens.append(restrict(lambda v: {} if v[0] == "H" else
                             {t: c for t, c in (
                                 (("H", v[1], v[2]), alg.value(v[1])),
                                 (("H", v[1], v[2] - 1), v[2])) if c}))
        gens.append(restrict(lambda v: {v: one} if v[0] == "H" else {}))
    n = len(ridx)

    def rk(vs):
        return rank(dense(vs, n, zero), n) if vs else 0

    rem = rk(ref + sol_r) - rk(ref)
    outer_rem = rk(ref + gens + sol_r) - rk(ref + gens)
    return rem, outer_rem


# -- second cohomology --------------------------------------------------------------

def h2_quotient(alg, support, cap, margin, core_radius, zero):
    """dim(cocycles | core) - dim(coboundaries | core), cocycles solved with cap + margin."""
    scap = cap + margin
    basis = box_basis(support, scap)
    bset = set(basis)
    order = {b: n for n, b in enumerate(basis)}

    def key(a, b):
        return ((a, b), 1) if order[a] < order[b] else ((b, a), -1)

    pairs = [(v, w) for n, v in enumerate(basis) for w in basis[n + 1:]]
    csup, ccap = core_of(set(support), core_radius, cap)
    core = box_basis(csup, ccap)
    core_set = set(core)
    is_core = {p: p[0] in core_set and p[1] in core_set for p in pairs}

    # group pairs by total Gamma-degree; the cocycle system is block diagonal
    blocks = {}
    for p in pairs:
        s = tuple(x + y for x, y in zip(p[0][1], p[1][1]))
        blocks.setdefault(s, []).append(p)
    col = {}
    for s, ps in blocks.items():
        for p in ps:
            col[p] = (s, len(col))
    rows = {s: [] for s in blocks}

    def inside(a, b):
        return all(t in bset for t in alg.bracket(a, b))

    for n, x in enumerate(basis):
        for m, y in enumerate(basis[n + 1:], n + 1):
            if not inside(x, y):
                continue
            for z in basis[m + 1:]:
                if not (inside(y, z) and inside(x, z)):
                    continue
                row = {}
                s = None
                for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                    for t, k in alg.bracket(b, c).items():
                        if t == a:
                            continue
                        p, sign = key(a, t)
                        s = col[p][0]
                        row[p] = row.get(p, 0) + sign * k
                row = {p: c for p, c in row.items() if c}
                if row:
                    assert len({col[p][0] for p in row}) == 1
                    rows[col[next(iter(row))][0]].append(row)

    dim_cr = 0
    for s, ps in blocks.items():
        local = {p: i for i, p in enumerate(ps)}
        noncore = [p for p in ps if not is_core[p]]
        nloc = {p: i for i, p in enumerate(noncore)}
        full = [[r.get(p, zero) for p in ps] for r in rows[s]]
        nc = [[r.get(p, zero) for p in noncore] for r in rows[s]]
        c = len(ps) - len(noncore)
        rk_full = rank(full, len(ps)) if full else 0
        rk_nc = rank(nc, len(noncore)) if nc and noncore else 0
        dim_cr += c - rk_full + rk_nc

    cpairs = [(v, w) for n, v in enumerate(core) for w in core[n + 1:]]
    cidx = {p: i for i, p in enumerate(cpairs)}
    by_target = {}
    for (v, w) in cpairs:
        for t, c in alg.bracket(v, w).items():
            by_target.setdefault(t, {})[cidx[(v, w)]] = c
    cob = [[vec.get(i, zero) for i in range(len(cpairs))] for vec in by_target.values()]
    dim_br = rank(cob, len(cpairs)) if cob else 0
    return dim_cr - dim_br
