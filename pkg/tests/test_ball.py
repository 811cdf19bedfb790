from fractions import Fraction

import mpmath
import pytest

import properties
from rampi import ball as B
from rampi.ball import ComplexBall, contains
from rampi.errors import BranchCutStraddle, DivisorContainsZero
from rampi.exactnum import TowerElement

C = ComplexBall.exact


def test_sqrt_minus_one_upper_side():
    r = B.sqrt(C(-1), "+")
    assert r.contains_point(0, 1) and r.rad < Fraction(1, 2**60)
    assert B.sqrt(C(-1), "-").contains_point(0, -1)


def test_sqrt_on_cut_needs_side():
    with pytest.raises(BranchCutStraddle):
        B.sqrt(C(-1))
    with pytest.raises(BranchCutStraddle):
        B.log(C(-2))


def test_one_third():
    q = C(1, prec=128) / C(3, prec=128)
    assert q.contains_point(Fraction(1, 3)) and q.rad < Fraction(1, 2**120)


def test_log_small_negative_upper_side():
    alpha0 = TowerElement.parse("1/2 - 53/1000*sqrt(89)")
    x = (1 - (1 - alpha0)).to_ball(128)  # 1 - beta0 = alpha0 < 0
    lg = B.log(x, "+")
    assert lg.imag_part().overlaps(ComplexBall.pi(128))
    assert B.log(x, "-").imag_part().overlaps(-ComplexBall.pi(128))


def test_log_and_pi_against_mpmath():
    mpmath.mp.prec = 200
    lg = B.log(C(Fraction(3, 7), Fraction(-2, 5), prec=180))
    ref = mpmath.log(mpmath.mpc(mpmath.mpf(3) / 7, mpmath.mpf(-2) / 5))
    assert lg.overlaps(ComplexBall.from_decimal(mpmath.nstr(ref.real, 50), mpmath.nstr(ref.imag, 50)))
    assert ComplexBall.pi(300).to_decimal().startswith("3.14159265358979323846264338327950288")


def test_division_by_ball_containing_zero():
    with pytest.raises(DivisorContainsZero):
        C(1) / C(0).inflate(Fraction(1, 10))


def test_agm():
    assert B.agm(C(1), C(1)).contains_point(1)
    a, b = C(1, prec=128), B.sqrt(C(Fraction(1, 2), prec=128))
    g = B.agm(a, b).inverse()
    assert g.overlaps(ComplexBall.from_decimal("1.1803405990160962260453379"))
    step = B.agm((a + b) * C(Fraction(1, 2), prec=128), B.sqrt(a * b))
    assert step.overlaps(B.agm(a, b))


def test_powi():
    x = C(Fraction(3, 2), 1, prec=100)
    assert B.powi(x, 3).overlaps(x * x * x)
    assert B.powi(x, -2).overlaps((x * x).inverse())
    assert B.powi(x, 0).contains_point(1)


def test_arith_dispatch():
    x, y = C(2), C(3)
    assert B.arith("add", x, y).contains_point(5)
    assert B.arith("mul", x, y).contains_point(6)
    assert B.arith("div", x, y).contains_point(Fraction(2, 3))
    assert B.arith("neg", x).contains_point(-2)
    assert B.arith("sqrt", C(4)).contains_point(2)


def test_contains():
    m0 = TowerElement.parse("1/46*sqrt(89) + 1/46*sqrt(3)*i")
    printed = ComplexBall.from_decimal("0.20508654634905660459", "0.037653278425410375946")
    assert contains(printed, m0)
    assert contains(C(Fraction(1, 2)), TowerElement.rational(Fraction(1, 2)))
    tight = C(Fraction(1, 2)).inflate(Fraction(1, 10**30))
    assert not contains(tight, TowerElement.rational(Fraction(1, 2) + Fraction(1, 10**20)))


def test_from_decimal_half_ulp():
    b = ComplexBall.from_decimal("0.125", "-2")
    assert b.re == Fraction(1, 8) and b.im == -2
    assert b.rad >= Fraction(5, 10**4)


def test_property_suites_small():
    properties.run_ball_monotonicity(300)
    properties.run_dyadic_exactness(300)
