from fractions import Fraction

import pytest

from hvalg import sampling
from hvalg.algebra import Basis
from hvalg.deriv import (D1, D2, HomDerivation, Inner, OutOfBoxError, TableDerivation,
                         base_preimage, box_pairs, classify_modulo_inner, d0,
                         decompose_by_degree, leibniz_check, normalize_at_base,
                         solve_derivation_space, tabulate)
from hvalg.gamma import GammaHom


def test_builtin_images(hv):
    assert D1(hv)(hv.L((2,), 3)) == 2 * hv.H((2,), 3) + 3 * hv.H((2,), 2)
    assert D1(hv)(hv.H((2,), 3)) == hv.zero()
    assert D2(hv)(hv.H((1,), 1)) == hv.H((1,), 1)
    assert D2(hv)(hv.L((1,), 1)) == hv.zero()
    assert d0(hv)(hv.L((3,), 0)) == 3 * hv.L((3,), 0)


def test_rank2_builtins_are_derivations(hv2, box2):
    pairs = list(box_pairs(hv2, box2, in_box_only=False))
    homs = GammaHom.basis(hv2.gamma)
    for d in [D1(hv2), D2(hv2)] + [HomDerivation(hv2, p) for p in homs]:
        assert leibniz_check(d, pairs).ok, d.describe()


def test_corrupted_rule_is_caught(hv, small_box):
    t = tabulate(D1(hv), small_box).override({Basis("L", (0,), 0): hv.L((0,), 0)})
    rep = leibniz_check(t, box_pairs(hv, small_box))
    assert not rep.ok
    x, y, residual = rep.counterexample
    assert residual


def test_table_out_of_box(hv, small_box):
    t = tabulate(D2(hv), small_box)
    with pytest.raises(OutOfBoxError):
        t(hv.H((5,), 0))
    rep = leibniz_check(t, [(hv.L((2,), 0), hv.H((2,), 0))])
    assert rep.ok and rep.unverifiable and rep.checked == 0


def test_table_arithmetic(hv, small_box):
    a, b = tabulate(D1(hv), small_box), tabulate(D2(hv), small_box)
    assert (a + b) - b == a
    assert 2 * a == a + a


def test_decompose_by_degree(hv, small_box):
    u = hv.L((1,), 0) + hv.H((-1,), 1)
    parts = decompose_by_degree(tabulate(Inner(u), small_box))
    assert set(parts) == {(1,), (-1,)}
    assert parts[(1,)] == tabulate(Inner(hv.L((1,), 0)), small_box)


def test_base_preimage(hv, hv2):
    r = sampling.rng(9)
    for h, box in ((hv, None), (hv2, None)):
        for _ in range(40):
            target = sampling.element(r, h, __import__("hvalg").default_box(h.gamma), 5)
            u = base_preimage(h, target)
            assert h.bracket(u, h.L(h.gamma.zero(), 0)) == target
    u = base_preimage(hv, hv.H((0,), 0))
    assert u == -hv.H((0,), 1)
    assert isinstance(base_preimage(hv, hv.H((3,), 0)).coeff(Basis("H", (3,), 0)), Fraction)


def test_normalize_hom_derivation(hv):
    rep = normalize_at_base(D1(hv))
    assert rep.ok


def test_solver_contains_known_derivations(hv, small_box):
    space = solve_derivation_space(hv, (0,), small_box)
    assert space.dim > 0
    for d in (D1(hv), D2(hv), d0(hv), Inner(hv.H((0,), 2))):
        assert space.vector(d) is not None
        assert space.space.contains(space.vector(d)), d.describe()
    for rule in space.rules():
        assert leibniz_check(rule, box_pairs(hv, small_box)).ok


def test_classification_small_box(hv, small_box):
    rep = classify_modulo_inner(hv, (0,), small_box)
    assert (rep.remainder_dim, rep.outer_remainder_dim) == (3, 0)
    assert rep.generators_match
    assert rep.components() == {"hom": 1, "D1": 1, "D2": 1}
    assert classify_modulo_inner(hv, (1,), small_box).remainder_dim == 0


@pytest.mark.slow
def test_classification_rank2(hv2, box2):
    assert classify_modulo_inner(hv2, (0, 0), box2).remainder_dim == 4
    assert classify_modulo_inner(hv2, (1, 0), box2).remainder_dim == 0
