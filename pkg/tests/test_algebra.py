import pytest

from hvalg import Box, Element
from hvalg import sampling
from hvalg.algebra import AlgebraError, Basis


def test_bracket_table(hv):
    L, H = hv.L, hv.H
    assert hv.bracket(L((1,), 1), L((2,), 2)) == L((3,), 3) + L((3,), 2)
    assert hv.bracket(L((1,), 0), H((2,), 1)) == 2 * H((3,), 1) + H((3,), 0)
    assert hv.bracket(H((1,), 3), H((-1,), 2)) == hv.zero()
    assert hv.bracket(H((2,), 1), L((1,), 1)) == -(2 * H((3,), 2) + H((3,), 1))
    # the degree-0 layer is the centerless Virasoro-type part
    assert hv.bracket(L((1,), 0), L((-1,), 0)) == -2 * L((0,), 0)


def test_rank2_values(hv2):
    t = hv2.field.theta()
    x = hv2.bracket(hv2.L((0, 1), 0), hv2.H((1, 0), 0))
    assert x == hv2.H((1, 1), 0)
    y = hv2.bracket(hv2.L((1, 0), 0), hv2.L((0, 1), 0))
    assert y == (t - 1) * hv2.L((1, 1), 0)


def test_bilinear_and_antisymmetric(hv, small_box):
    r = sampling.rng(2)
    for _ in range(50):
        x, y, z = (sampling.element(r, hv, small_box) for _ in range(3))
        assert hv.bracket(x, y + z) == hv.bracket(x, y) + hv.bracket(x, z)
        assert hv.bracket(x, x) == hv.zero()


def test_support_and_filtration(hv):
    x = 3 * hv.L((2,), 4) - hv.H((-1,), 1)
    assert x.support() == {(2,), (-1,)}
    assert x.filtration_level() == 4
    assert x.l_part() == 3 * hv.L((2,), 4)


def test_locally_finite_membership(hv):
    assert hv.in_locally_finite_set(2 * hv.L((0,), 0) + hv.H((3,), 5))
    assert not hv.in_locally_finite_set(hv.L((0,), 1))
    assert not hv.in_locally_finite_set(hv.L((1,), 0))


def test_orbit_growth_and_stabilisation(hv):
    assert hv.ad_orbit_dim(hv.L((1,), 0), hv.L((0,), 1), 6) == (7, False)
    assert hv.ad_orbit_dim(hv.H((2,), 0), hv.H((1,), 0), 3) == (1, True)
    with pytest.raises(AlgebraError):
        hv.ad_orbit_dim(hv.H((0,), 0), hv.H((0,), 0), 0)


def test_locally_finite_bound(hv, box):
    """Orbit spans stay within (k+1) + sum over distinct alpha+beta of (max_j + k + 1)."""
    r = sampling.rng(3)
    for _ in range(30):
        x = sampling.locally_finite_element(r, hv, box)
        hs = x.h_part()
        for p in (hv.vector(b) for b in box.basis()):
            k = p.filtration_level()
            shifts = {}
            for b in hs.terms:
                for a in p.support():
                    s = tuple(u + v for u, v in zip(a, b.alpha))
                    shifts[s] = max(shifts.get(s, 0), b.degree)
            bound = (k + 1) + sum(j + k + 1 for j in shifts.values())
            dim, stable = hv.ad_orbit_dim(x, p, bound)
            assert stable and dim <= bound


def test_box_rules(hv, hv2):
    b = Box.ball(hv.gamma, 4, 3, 2)
    assert b.core_radius == 2
    assert b.core().sorted_support() == [(-2,), (-1,), (0,), (1,), (2,)]
    assert b.core().degree_cap == 2
    assert b.outer().sorted_support()[0] == (-8,) and b.outer().degree_cap == 5
    assert Box.ball(hv2.gamma, 2, 2, 2).core().support == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}
    assert Basis("H", (1,), 3) in b and Basis("H", (1,), 4) not in b
    with pytest.raises(AlgebraError):
        Box(frozenset({(1,), (0,)}), 1)
    with pytest.raises(AlgebraError):
        Box(frozenset({(1,), (-1,)}), 1)


def test_elements_from_other_algebra_rejected(hv, hv2):
    with pytest.raises(Exception):
        hv.L((0,), 0) + hv2.L((0, 0), 0)


def test_h_ideal_is_abelian_and_stable(hv, small_box):
    ideal = hv.ideal_closure([hv.H((2,), 1)], small_box)
    assert ideal and all(b.kind == "H" for e in ideal for b in e.terms)
    for e in ideal:
        for f in ideal:
            assert hv.bracket(e, f) == hv.zero()
    assert isinstance(ideal[0], Element)
