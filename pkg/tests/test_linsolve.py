import random
from fractions import Fraction

import pytest

import oracle
from hvalg.exactnum import FieldSpec
from hvalg.linsolve import (LinsolveError, SparseMatrix, Subspace, in_span, nullspace,
                            quotient_dim, rank, solve)


def _random_matrix(r):
    rows, cols = r.randint(1, 8), r.randint(1, 8)
    return [[Fraction(r.randint(-3, 3)) if r.random() < 0.6 else Fraction(0)
             for _ in range(cols)] for _ in range(rows)], cols


def test_rank_matches_dense_reference():
    r = random.Random(11)
    for _ in range(300):
        m, cols = _random_matrix(r)
        a = SparseMatrix.from_dense(m)
        assert rank(a) == oracle.rank(m, cols)
        ns = nullspace(a)
        assert rank(a) + ns.dim == cols
        for v in ns.basis:
            assert not a.apply(v)


def test_solve_consistent_and_inconsistent():
    r = random.Random(12)
    for _ in range(200):
        m, cols = _random_matrix(r)
        a = SparseMatrix.from_dense(m)
        x0 = [Fraction(r.randint(-2, 2)) for _ in range(cols)]
        b = [sum(c * y for c, y in zip(row, x0)) for row in m]
        x = solve(a, b)
        assert x is not None
        assert [sum(c * y for c, y in zip(row, x)) for row in m] == b
    a = SparseMatrix.from_dense([[1, 1], [2, 2]])
    assert solve(a, [1, 3]) is None
    with pytest.raises(LinsolveError):
        solve(a, [1])


def test_extension_field_entries():
    q2 = FieldSpec(2, (-2, 0))
    t = q2.theta()
    a = SparseMatrix.from_dense([[t, 2], [1, t]])      # second row = first / theta
    assert rank(a) == 1
    v = nullspace(a).basis[0]
    assert not a.apply(v)


def test_span_and_quotient():
    s = Subspace.span(3, [{0: 1, 1: 1}, {1: 1}])
    small = Subspace.span(3, [{0: 2, 1: 2}])
    assert in_span(s, {0: 5}) and not in_span(s, {2: 1})
    assert quotient_dim(s, small) == 1
    with pytest.raises(LinsolveError):
        quotient_dim(small, s)
    with pytest.raises(LinsolveError):
        in_span(s, {3: 1})
    assert s == Subspace.span(3, [{0: 1}, {1: 7}])
