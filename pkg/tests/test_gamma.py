import pytest

from hvalg.exactnum import FieldSpec
from hvalg.gamma import Character, GammaError, GammaHom, GammaSpec, NotAUnitError, ScalingUnit

from fractions import Fraction

Q = FieldSpec()
Q2 = FieldSpec(2, (-2, 0))


def test_dependence_witness():
    with pytest.raises(GammaError) as e:
        GammaSpec(Q, [1, Fraction(1, 2)])
    assert e.value.witness == (1, -2)


def test_values_and_ball():
    g = GammaSpec(Q2, [1, Q2.theta()])
    assert g.value((2, -1)) == 2 - Q2.theta()
    assert len(g.ball(1)) == 5 and len(g.ball(1, "linf")) == 9
    assert g.distinguished_one() == (1, 0)


def test_scaling_units():
    g = GammaSpec(Q2, [1, Q2.theta()])
    u = g.scaling_unit(1 + Q2.theta())
    assert u.matrix == ((1, 2), (1, 1))
    assert u.compose(u.inverse()) == ScalingUnit.identity(g)
    assert g.value(u.act((1, 0))) == u.value * g.value((1, 0))
    with pytest.raises(NotAUnitError):
        g.scaling_unit(2)
    with pytest.raises(NotAUnitError):
        GammaSpec(Q, [1]).scaling_unit(Fraction(1, 2))
    assert GammaSpec(Q, [1]).scaling_unit(-1).act((3,)) == (-3,)


def test_character_and_hom():
    g = GammaSpec(Q, [1])
    chi = Character(g, (Fraction(2),))
    assert chi((3,)) == 8 and chi((-1,)) == Fraction(1, 2)
    assert chi((2,)) * chi((-5,)) == chi((-3,))
    with pytest.raises(GammaError):
        Character(g, (0,))
    phi = GammaHom(g, (Fraction(3),))
    assert phi((2,)) + phi((5,)) == phi((7,))
    assert GammaHom.identity_embedding(g)((4,)) == 4
