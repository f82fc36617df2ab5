"""The grading group Gamma: a free abelian group of rank k inside the field.

Elements of Gamma are tuples of integer coordinates over fixed generators;
``GammaSpec.value`` embeds them into the scalar field.  Characters,
additive homomorphisms and scaling units are all stored by their values on
the generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .exactnum import FieldSpec, format_scalar

GammaElement = Tuple[int, ...]


class GammaError(ValueError):
    pass


class NotAUnitError(GammaError):
    """c * Gamma != Gamma."""


def _rank_and_relation(rows: list[list[Fraction]]) -> tuple[int, list[Fraction] | None]:
    """Rank of ``rows`` and, if dependent, one rational relation among them."""
    n = len(rows)
    # augment with identity to track the combination that produced each row
    work = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    width = len(rows[0]) if rows else 0
    rank = 0
    for col in range(width):
        piv = next((r for r in range(rank, n) if work[r][col] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        p = work[rank][col]
        for r in range(n):
            if r != rank and work[r][col] != 0:
                f = work[r][col] / p
                work[r] = [a - f * b for a, b in zip(work[r], work[rank])]
        rank += 1
    if rank == n:
        return rank, None
    return rank, work[rank][width:]


def _integer_relation(rel: Sequence[Fraction]) -> tuple[int, ...]:
    from math import gcd, lcm

    den = 1
    for c in rel:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in rel]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    # first nonzero entry positive
    lead = next(c for c in ints if c)
    if lead < 0:
        ints = [-c for c in ints]
    return tuple(ints)


class GammaSpec:
    """Gamma = Z g_1 + ... + Z g_k with ``generator_values`` in ``field``."""

    def __init__(self, field: FieldSpec, generator_values: Sequence):
        if not generator_values:
            raise GammaError("Gamma needs at least one generator")
        self.field = field
        self.generator_values = tuple(field.coerce(g) for g in generator_values)
        self.rank = len(self.generator_values)
        self._values: dict[GammaElement, object] = {}
        self.check()

    def check(self) -> None:
        """Verify Q-independence of the generators; raise with an integer relation."""
        rows = [list(self.field.coords(g)) for g in self.generator_values]
        if all(all(c == 0 for c in r) for r in rows):
            raise GammaError("Gamma must be a nontrivial subgroup")
        rank, rel = _rank_and_relation(rows)
        if rel is not None:
            witness = _integer_relation(rel)
            err = GammaError(f"generators are dependent: relation {witness}")
            err.witness = witness
            raise err

    def zero(self) -> GammaElement:
        return (0,) * self.rank

    def value(self, alpha: GammaElement):
        v = self._values.get(alpha)
        if v is None:
            if len(alpha) != self.rank:
                raise GammaError(f"expected {self.rank} coordinates, got {len(alpha)}")
            v = self.field.zero()
            for c, g in zip(alpha, self.generator_values):
                if c:
                    v = v + c * g
            if self.field.is_rational and v.denominator == 1:
                v = v.numerator
            self._values[alpha] = v
        return v

    def distinguished_one(self) -> GammaElement:
        """The element playing the role of 1: the first generator."""
        return (1,) + (0,) * (self.rank - 1)

    def ball(self, radius: int, norm: str = "l1") -> list[GammaElement]:
        """Coordinate ball around 0, sorted lexicographically."""
        from itertools import product

        pts = product(range(-radius, radius + 1), repeat=self.rank)
        if norm == "l1":
            out = [p for p in pts if sum(map(abs, p)) <= radius]
        elif norm == "linf":
            out = list(pts)
        else:
            raise GammaError(f"unknown norm {norm!r}")
        return sorted(out)

    def scaling_unit(self, c) -> "ScalingUnit":
        """Solve c * g_j = sum_i M[i][j] g_i and insist on M integral, det +-1."""
        c = self.field.coerce(c)
        if c == 0:
            raise NotAUnitError("0 is not a unit")
        k = self.rank
        rows = [list(self.field.coords(g)) for g in self.generator_values]
        d = len(rows[0])
        cols = []
        for g in self.generator_values:
            target = list(self.field.coords(c * g))
            sol = _solve_combination(rows, target, d)
            if sol is None:
                raise NotAUnitError(f"{format_scalar(c)} * Gamma leaves the span of Gamma")
            cols.append(sol)
        if any(x.denominator != 1 for col in cols for x in col):
            raise NotAUnitError(f"{format_scalar(c)} * Gamma is not inside Gamma")
        matrix = tuple(tuple(int(cols[j][i]) for j in range(k)) for i in range(k))
        det = _int_det([list(r) for r in matrix])
        if det not in (1, -1):
            raise NotAUnitError(
                f"{format_scalar(c)} * Gamma is a proper subgroup (det {det})")
        return ScalingUnit(c, matrix)

    def __repr__(self):
        return f"GammaSpec({', '.join(format_scalar(g) for g in self.generator_values)})"


def _solve_combination(rows, target, d):
    """Rational x with sum_i x_i rows[i] == target, or None."""
    k = len(rows)
    # columns of the system are the generators; equations are field coordinates
    aug = [[rows[i][e] for i in range(k)] + [target[e]] for e in range(d)]
    piv_cols = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, d) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][col]
        aug[r] = [a / p for a in aug[r]]
        for i in range(d):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(col)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, d)):
        return None
    x = [Fraction(0)] * k
    for i, col in enumerate(piv_cols):
        x[col] = aug[i][k]
    return x


def _int_det(m: list[list[int]]) -> int:
    n = len(m)
    m = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return int(det)


@dataclass(frozen=True)
class ScalingUnit:
    """A scalar c with c * Gamma = Gamma, together with its integer matrix."""

    value: object
    matrix: Tuple[Tuple[int, ...], ...]

    def act(self, alpha: GammaElement) -> GammaElement:
        return tuple(sum(row[j] * alpha[j] for j in range(len(alpha))) for row in self.matrix)

    def compose(self, other: "ScalingUnit") -> "ScalingUnit":
        """self * other (act by other first)."""
        k = len(self.matrix)
        m = tuple(tuple(sum(self.matrix[i][t] * other.matrix[t][j] for t in range(k))
                        for j in range(k)) for i in range(k))
        return ScalingUnit(self.value * other.value, m)

    def inverse(self) -> "ScalingUnit":
        k = len(self.matrix)
        inv = _int_matrix_inverse(self.matrix)
        return ScalingUnit(1 / self.value, inv)

    @classmethod
    def identity(cls, gamma: GammaSpec) -> "ScalingUnit":
        k = gamma.rank
        return cls(gamma.field.one(),
                   tuple(tuple(int(i == j) for j in range(k)) for i in range(k)))


def _int_matrix_inverse(m) -> Tuple[Tuple[int, ...], ...]:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [a / p for a in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    out = tuple(tuple(int(x) for x in row[n:]) for row in aug)
    return out


@dataclass(frozen=True)
class Character:
    """Group homomorphism Gamma -> F^*, stored on generators."""

    gamma: GammaSpec
    generator_images: tuple

    def __post_init__(self):
        if len(self.generator_images) != self.gamma.rank:
            raise GammaError("one image per generator required")
        if any(t == 0 for t in self.generator_images):
            raise GammaError("character values must be nonzero")

    def __call__(self, alpha: GammaElement):
        out = self.gamma.field.one()
        for t, n in zip(self.generator_images, alpha):
            if n:
                out = out * t ** n
        return out

    @classmethod
    def trivial(cls, gamma: GammaSpec) -> "Character":
        return cls(gamma, (gamma.field.one(),) * gamma.rank)

    def __eq__(self, other):
        return (isinstance(other, Character)
                and tuple(self.generator_images) == tuple(other.generator_images))

    def __hash__(self):
        return hash(tuple(self.generator_images))


@dataclass(frozen=True)
class GammaHom:
    """Additive map Gamma -> F, stored on generators."""

    gamma: GammaSpec
    generator_images: tuple

    def __post_init__(self):
        if len(self.generator_images) != self.gamma.rank:
            raise GammaError("one image per generator required")

    def __call__(self, alpha: GammaElement):
        out = self.gamma.field.zero()
        for t, n in zip(self.generator_images, alpha):
            if n:
                out = out + n * t
        return out

    @classmethod
    def identity_embedding(cls, gamma: GammaSpec) -> "GammaHom":
        """phi_0 : alpha -> alpha."""
        return cls(gamma, gamma.generator_values)

    @classmethod
    def basis(cls, gamma: GammaSpec) -> list["GammaHom"]:
        """The k homomorphisms sending one generator to 1 and the rest to 0."""
        f = gamma.field
        return [cls(gamma, tuple(f.one() if i == j else f.zero() for i in range(gamma.rank)))
                for j in range(gamma.rank)]


def add(a: GammaElement, b: GammaElement) -> GammaElement:
    return tuple(x + y for x, y in zip(a, b))


def neg(a: GammaElement) -> GammaElement:
    return tuple(-x for x in a)


def sub(a: GammaElement, b: GammaElement) -> GammaElement:
    return tuple(x - y for x, y in zip(a, b))
