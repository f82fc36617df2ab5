"""Exact sparse linear algebra over Q or Q(theta).

Vectors are ``dict[int, scalar]`` with no stored zeros.  The workhorse is
:class:`Echelon`, an incrementally maintained fully reduced row echelon form:
every pivot row is 1 at its pivot (up to a positive integer scale on the
fraction-free path) and 0 at every other pivot column.  Pivots are chosen by
a Markowitz-style count: the candidate column touched by the fewest existing
rows wins, ties broken by the smallest column index, so results are
deterministic.

Over Q the rows are kept integral (denominators cleared on entry, contents
divided out after each combination), which avoids Fraction overhead and
keeps coefficient growth in check.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Vector = dict


class LinsolveError(ValueError):
    """Dimension mismatch or violated precondition."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


def _all_rational(values: Iterable) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in values)


def _to_integral(v: Mapping) -> dict:
    den = 1
    for x in v.values():
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    if den == 1:
        row = {c: int(x) for c, x in v.items()}
    else:
        row = {c: int(x * den) for c, x in v.items()}
    return _primitive(row)


def _primitive(row: dict) -> dict:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        for c in row:
            row[c] //= g
    return row


def axpy(dst: dict, a, src: Mapping) -> dict:
    """dst += a * src, in place, dropping cancelled entries."""
    for c, x in src.items():
        y = dst.get(c)
        if y is None:
            dst[c] = a * x
        else:
            y = y + a * x
            if y:
                dst[c] = y
            else:
                del dst[c]
    return dst


def _inverse(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


class Echelon:
    """Incremental fully reduced row echelon form with Markowitz pivoting."""

    def __init__(self, integral: bool = False, pivot_limit: int | None = None):
        self.integral = integral
        self.rows: dict[int, dict] = {}
        # non-pivot column -> pivot columns whose rows touch it
        self.touch: dict[int, set] = {}
        self.pivot_limit = pivot_limit

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _prepare(self, v: Mapping) -> dict:
        v = {c: x for c, x in v.items() if x}
        if self.integral:
            return _to_integral(v)
        return v

    def reduce(self, v: Mapping) -> dict:
        """Remainder of ``v`` against the current rows (no pivot columns left)."""
        r = self._prepare(v)
        rows = self.rows
        hits = [c for c in r if c in rows]
        if not hits:
            return r
        if self.integral:
            for c in hits:
                f = r.get(c)
                if not f:
                    continue
                p = rows[c]
                pc = p[c]
                if pc != 1:
                    for k in r:
                        r[k] *= pc
                axpy(r, -f, p)
            return _primitive(r) if r else r
        for c in hits:
            f = r.get(c)
            if f:
                axpy(r, -f, rows[c])
        return r

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def _choose_pivot(self, r: dict):
        touch = self.touch
        limit = self.pivot_limit
        best = None
        for c in r:
            if limit is not None and c >= limit:
                continue
            key = (len(touch.get(c, ())), c)
            if best is None or key < best:
                best = key
        return None if best is None else best[1]

    def add(self, v: Mapping):
        """Insert ``v``; return the new pivot column, or None if dependent.

        With ``pivot_limit`` set, columns at or beyond it are never pivots; a
        remainder living only there raises :class:`InconsistentRow`.
        """
        r = self.reduce(v)
        if not r:
            return None
        p = self._choose_pivot(r)
        if p is None:
            raise InconsistentRow(r)
        if self.integral:
            if r[p] < 0:
                for k in r:
                    r[k] = -r[k]
        else:
            inv = _inverse(r[p])
            for k in r:
                r[k] = r[k] * inv
        touch = self.touch
        for q in list(touch.get(p, ())):
            row = self.rows[q]
            f = row[p]
            before = set(row)
            if self.integral:
                rp = r[p]
                if rp != 1:
                    for k in row:
                        row[k] *= rp
                axpy(row, -f, r)
                _primitive(row)
            else:
                axpy(row, -f, r)
            after = set(row)
            for k in before - after:
                if k != q:
                    s = touch.get(k)
                    if s is not None:
                        s.discard(q)
            for k in after - before:
                touch.setdefault(k, set()).add(q)
        touch.pop(p, None)
        for k in r:
            if k != p:
                touch.setdefault(k, set()).add(p)
        self.rows[p] = r
        return p

    def normalized_row(self, p: int) -> dict:
        row = self.rows[p]
        if self.integral:
            d = row[p]
            if d == 1:
                return {c: Fraction(x) for c, x in row.items()}
            return {c: Fraction(x, d) for c, x in row.items()}
        return dict(row)

    def subspace(self, ambient_dim: int) -> "Subspace":
        pivots = sorted(self.rows)
        return Subspace(ambient_dim, [self.normalized_row(p) for p in pivots], pivots)


class InconsistentRow(LinsolveError):
    def __init__(self, row):
        super().__init__("inconsistent row after elimination", witness=row)


def _is_integral_field(vectors: Iterable[Mapping]) -> bool:
    return all(_all_rational(v.values()) for v in vectors)


class SparseMatrix:
    """Immutable r x c matrix stored as sparse row dicts."""

    __slots__ = ("nrows", "ncols", "row_data")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[Mapping] = ()):
        data = []
        for r in rows:
            d = {c: x for c, x in r.items() if x}
            for c in d:
                if not 0 <= c < ncols:
                    raise LinsolveError(f"column index {c} out of range")
            data.append(d)
        if len(data) > nrows:
            raise LinsolveError("more rows than declared")
        data.extend({} for _ in range(nrows - len(data)))
        self.nrows = nrows
        self.ncols = ncols
        self.row_data = tuple(data)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, [{j: x for j, x in enumerate(r) if x} for r in rows])

    @property
    def entries(self) -> dict:
        return {(i, j): x for i, r in enumerate(self.row_data) for j, x in r.items()}

    def apply(self, v: Mapping) -> dict:
        out = {}
        for i, r in enumerate(self.row_data):
            s = 0
            for j, x in r.items():
                y = v.get(j)
                if y:
                    s = s + x * y
            if s:
                out[i] = s
        return out

    def echelon(self) -> Echelon:
        e = Echelon(integral=_is_integral_field(self.row_data))
        # shortest rows first: cheap pivots early, less fill
        for r in sorted(self.row_data, key=len):
            if r:
                e.add(r)
        return e


class Subspace:
    """A subspace of F^n given by a reduced basis.

    Each basis vector is 1 at its pivot column and every other basis vector
    is 0 there; pivots are stored in increasing order.  Use
    :meth:`canonical` (true reduced row echelon form) for comparisons.
    """

    def __init__(self, ambient_dim: int, basis: Sequence[Mapping], pivots: Sequence[int]):
        if len(basis) != len(pivots):
            raise LinsolveError("one pivot per basis vector")
        order = sorted(range(len(pivots)), key=lambda i: pivots[i])
        self.ambient_dim = ambient_dim
        self.pivots = [pivots[i] for i in order]
        self.basis = [dict(basis[i]) for i in order]
        self._index = {p: i for i, p in enumerate(self.pivots)}
        self._canon = None

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Mapping]) -> "Subspace":
        vectors = [v for v in vectors if v]
        e = Echelon(integral=_is_integral_field(vectors))
        for v in vectors:
            e.add(v)
        return e.subspace(ambient_dim)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [], [])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def reduce(self, v: Mapping) -> dict:
        r = {c: x for c, x in v.items() if x}
        for c in [c for c in r if c in self._index]:
            f = r.get(c)
            if f:
                axpy(r, -f, self.basis[self._index[c]])
        return r

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    __contains__ = contains

    def coordinates(self, v: Mapping) -> dict | None:
        """Coefficients of ``v`` in this basis (keyed by pivot), or None."""
        if self.reduce(v):
            return None
        return {p: v[p] for p in self.pivots if v.get(p)}

    def join(self, other: "Subspace") -> "Subspace":
        return Subspace.span(max(self.ambient_dim, other.ambient_dim),
                             list(self.basis) + list(other.basis))

    def canonical(self) -> tuple:
        """Reduced row echelon form with leftmost pivots, as sorted tuples."""
        if self._canon is None:
            rows = [dict(b) for b in self.basis]
            out = []
            # Gauss-Jordan with leftmost pivots on a small basis
            while rows:
                col = min(min(r) for r in rows)
                i = next(i for i, r in enumerate(rows) if col in r)
                piv = rows.pop(i)
                inv = _inverse(piv[col])
                piv = {c: x * inv for c, x in piv.items()}
                for r in rows:
                    f = r.get(col)
                    if f:
                        axpy(r, -f, piv)
                for r in out:
                    f = r.get(col)
                    if f:
                        axpy(r, -f, piv)
                out.append(piv)
                rows = [r for r in rows if r]
            self._canon = tuple(tuple(sorted(r.items())) for r in out)
        return self._canon

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and all(other.contains(b) for b in self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def rank(a: SparseMatrix) -> int:
    return a.echelon().rank


def nullspace(a: SparseMatrix) -> Subspace:
    """Basis of {v : a v = 0}, one vector per free column."""
    e = a.echelon()
    vectors, pivots = [], []
    for f in range(a.ncols):
        if f in e.rows:
            continue
        v = {f: Fraction(1) if e.integral else 1}
        for p in e.touch.get(f, ()):
            row = e.rows[p]
            v[p] = -Fraction(row[f], row[p]) if e.integral else -row[f]
        vectors.append(v)
        pivots.append(f)
    return Subspace(a.ncols, vectors, pivots)


def solve(a: SparseMatrix, b: Sequence | Mapping):
    """Some exact solution of a x = b as a dense list, or None if inconsistent."""
    if not isinstance(b, Mapping):
        if len(b) != a.nrows:
            raise LinsolveError(f"right-hand side has length {len(b)}, expected {a.nrows}")
        b = {i: x for i, x in enumerate(b) if x}
    elif any(not 0 <= i < a.nrows for i in b):
        raise LinsolveError("right-hand side index out of range")
    n = a.ncols
    aug = []
    for i, r in enumerate(a.row_data):
        row = dict(r)
        if b.get(i):
            row[n] = b[i]
        if row:
            aug.append(row)
    e = Echelon(integral=_is_integral_field(aug), pivot_limit=n)
    try:
        for row in sorted(aug, key=len):
            e.add(row)
    except InconsistentRow:
        return None
    zero = Fraction(0)
    x = [zero] * n
    for p, row in e.rows.items():
        rhs = row.get(n, 0)
        if e.integral:
            x[p] = Fraction(rhs, row[p])
        else:
            x[p] = rhs
    return x


def in_span(space: Subspace, v: Mapping) -> bool:
    if any(c >= space.ambient_dim or c < 0 for c in v):
        raise LinsolveError("vector outside the ambient space")
    return space.contains(v)


def quotient_dim(big: Subspace, small: Subspace) -> int:
    """dim(big) - dim(small), after checking small is inside big."""
    for v in small.basis:
        if not big.contains(v):
            raise LinsolveError("subspace containment violated", witness=v)
    return big.dim - small.dim


class Indexer:
    """Assigns consecutive column indices to hashable keys on first sight."""

    def __init__(self, keys: Iterable = ()):
        self.index: dict = {}
        self.keys: list = []
        for k in keys:
            self(k)

    def __call__(self, key) -> int:
        i = self.index.get(key)
        if i is None:
            i = len(self.keys)
            self.index[key] = i
            self.keys.append(key)
        return i

    def get(self, key):
        return self.index.get(key)

    def __len__(self):
        return len(self.keys)

    def __contains__(self, key):
        return key in self.index
