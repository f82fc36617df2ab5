"""Solver dimensions against the independent dense reference in oracle.py."""

from fractions import Fraction

import pytest

import oracle
from hvalg import Box
from hvalg.cohom import h2_report
from hvalg.deriv import classify_modulo_inner


def test_oracle_linear_algebra():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert oracle.rank(rows, 3) == 2
    (v,) = oracle.nullspace(rows, 3)
    assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    s = oracle.Sqrt2(1, 1)
    assert s * (1 / s) == 1


@pytest.mark.slow
def test_rank2_h2_against_oracle(hv2):
    box = Box.ball(hv2.gamma, 1, 1, 2)
    alg = oracle.Algebra(lambda a: oracle.Sqrt2(a[0], a[1]))
    expected = oracle.h2_quotient(alg, oracle.ball(2, 1), 1, 2, box.core_radius, oracle.Sqrt2(0))
    assert h2_report(hv2, box).quotient_on_core == expected == 0


def test_edge_core_artifact_matches_oracle(hv2):
    """A core touching the support edge inflates the quotient in both implementations."""
    box = Box.ball(hv2.gamma, 1, 1, 2, core_radius=0)
    assert h2_report(hv2, box).quotient_on_core == 4


def test_rank1_derivations_single_degree(hv, small_box):
    alg = oracle.Algebra(lambda a: Fraction(a[0]))
    support = [(a,) for a in range(-2, 3)]
    got = classify_modulo_inner(hv, (1,), small_box)
    expected = oracle.derivation_remainders(alg, support, 2, 2, small_box.core_radius,
                                            (1,), Fraction(0), Fraction(1))
    assert (got.remainder_dim, got.outer_remainder_dim) == expected
