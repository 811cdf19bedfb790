from fractions import Fraction

import pytest

import properties
from rampi.ball import ComplexBall
from rampi.errors import DivisionByZero, NotRepresentable
from rampi.exactnum import ONE, ZERO, I, TowerElement, principal_sqrt, real_sign, sqrt

T = TowerElement.parse

ALPHA0 = T("1/2 - 53/1000*sqrt(89)")
U0 = T("1/20*sqrt(15) + 1/20*sqrt(5) + 1/20*sqrt(15)*i - 1/20*sqrt(5)*i")


def test_add_builds_alpha0():
    assert TowerElement.rational(Fraction(1, 2)) + T("-53/1000*sqrt(89)") == ALPHA0
    assert len(ALPHA0.coords) == 2


def test_add_identity_and_conjugate_pair():
    assert ALPHA0 + 0 == ALPHA0
    assert T("1/2*sqrt(3) - 1/2*i") + T("1/2*sqrt(3) + 1/2*i") == T("sqrt(3)")


def test_mul_examples():
    assert ALPHA0 * (1 - ALPHA0) == Fraction(-1, 10**6)
    assert T("sqrt(3)") * T("sqrt(3)") == 3
    assert U0**12 == Fraction(-1, 10**6)


def test_div_examples():
    v1 = T("-294573*sqrt(3) + 82573*i") / 516854
    assert v1.coords == {3: Fraction(-294573, 516854), -1: Fraction(82573, 516854)}
    assert ALPHA0 / ALPHA0 == ONE
    assert ONE / (T("sqrt(3)") + I) == T("1/4*sqrt(3) - 1/4*i")


def test_div_by_zero():
    with pytest.raises(DivisionByZero):
        ONE / ZERO


def test_sqrt_of_m0_squared():
    m2 = T("43/1058 + 1/1058*sqrt(267)*i")
    got = sqrt(m2, ComplexBall.exact(1, 0))
    assert got == T("1/46*sqrt(89) + 1/46*sqrt(3)*i")
    assert sqrt(m2, ComplexBall.exact(-1, 0)) == -got


def test_sqrt_simple():
    assert principal_sqrt(TowerElement.rational(Fraction(9, 4))) == Fraction(3, 2)
    r = principal_sqrt(TowerElement.rational(Fraction(1, 5)))
    assert r == T("1/5*sqrt(5)") and r * r == Fraction(1, 5)
    assert principal_sqrt(TowerElement.rational(-1)) == I


def test_sqrt_denests_through_norm():
    # sqrt(1 + 4e-6) appears when solving for alpha0
    x = TowerElement.rational(1 + Fraction(4, 10**6))
    assert principal_sqrt(x) == T("53/500*sqrt(89)")


def test_sqrt_not_representable():
    with pytest.raises(NotRepresentable):
        principal_sqrt(T("1 + sqrt(2)"))


def test_canonical_form():
    assert T("sqrt(12)") == T("2*sqrt(3)")
    assert T("sqrt(16)") == 4
    assert T("sqrt(2)*sqrt(3)") == T("sqrt(6)")
    assert (ALPHA0 - ALPHA0).coords == {}


def test_text_round_trip():
    for x in (ALPHA0, U0, T("-1/3 + 2*sqrt(30)*i"), ZERO, ONE):
        assert T(x.to_text()) == x
        assert T(x.to_text()).to_text() == x.to_text()


def test_to_ball():
    m0 = T("1/46*sqrt(89) + 1/46*sqrt(3)*i")
    b = m0.to_ball(70)
    assert b.overlaps(ComplexBall.from_decimal("0.2050865463", "0.0376532784"))
    half = TowerElement.rational(Fraction(1, 2)).to_ball(64)
    assert half.rad == 0 and half.re == Fraction(1, 2)
    a = ALPHA0.to_ball(64)
    # alpha0 = (1 - sqrt(1 + 4e-6))/2 = -1e-6 + 1e-12 - ...
    assert abs(a.re - Fraction(-10**6 + 1, 10**12)) < Fraction(1, 10**17) and a.im == 0


def test_real_sign():
    assert real_sign(ALPHA0) == -1
    assert real_sign(T("sqrt(2) - 1")) == 1
    assert real_sign(ZERO) == 0
    # a near cancellation that needs refinement: 500 - 53*sqrt(89)
    assert real_sign(T("500 - 53*sqrt(89)")) == -1


def test_conjugate():
    assert U0.conjugate() == T("1/20*sqrt(15) + 1/20*sqrt(5) - 1/20*sqrt(15)*i + 1/20*sqrt(5)*i")
    assert (U0 * U0.conjugate()).is_real()


def test_property_suites_small():
    properties.run_field_axioms(200)
    assert properties.run_sqrt_roundtrip(200) > 100
    properties.run_to_ball_soundness(200)
