from fractions import Fraction

import pytest

from hvalg import FieldSpec, GammaSpec, HV, format_element, parse_element
from hvalg import sampling
from hvalg.syntax import ParseError, parse_basis, parse_scalar


def test_round_trip_rank2(hv2, box2):
    r = sampling.rng(5)
    for _ in range(300):
        x = sampling.element(r, hv2, box2)
        assert parse_element(format_element(x), hv2) == x


def test_canonical_text(hv2):
    x = parse_element("(1+theta)*L[(1,0),2] - 1/2*H[(0,-1),0]", hv2)
    assert format_element(x) == "(1 + theta)*L[(1,0),2] - 1/2*H[(0,-1),0]"
    assert format_element(hv2.zero()) == "0"


def test_collecting_terms(hv):
    assert parse_element("L[1,0] + 2*L[1,0] - 3*L[1,0]", hv) == hv.zero()
    assert parse_element("0", hv) == hv.zero()
    assert parse_basis("H[-2,3]", hv).degree == 3


def test_scalar_syntax():
    q2 = FieldSpec(2, (-2, 0))
    assert parse_scalar("theta^2 - 1/2", q2) == Fraction(3, 2)
    assert parse_scalar("(theta)^2", q2) == 2


@pytest.mark.parametrize("text", ["L[1,-1]", "L[1]", "2", "L[1,0] +", "H[(1,2),0]", "X[0,0]"])
def test_parse_errors(hv, text):
    with pytest.raises(ParseError):
        parse_element(text, hv)
