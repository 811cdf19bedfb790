"""Certified evaluation of F_s(x) = 2F1(1/s, 1 - 1/s; 1; x) for s in {2, 3, 4, 6}.

Two regimes are implemented: the Gauss series around 0 and, since c = a + b,
the logarithmic connection formula around 1::

    F(x) = sin(pi/s)/pi * sum_n c_n * (h_n + K_s - log(1 - x)) * (1 - x)^n

with c_n = (a)_n (b)_n / n!^2, h_n = 2 H_n - sum_{j<n} (1/(a+j) + 1/(b+j)) and
K_s = 2 psi(1) - psi(a) - psi(b), which Gauss's digamma theorem reduces to
logarithms of 2 and 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import ball as B
from .ball import ComplexBall, Side
from .errors import BranchAmbiguous, BranchCutStraddle, UnsupportedRegion
from .exactnum import TowerElement

DISC = Fraction(7, 10)
# |h_n| <= K_s <= 4 ln 2 + 3 ln 3 < 8
_K_BOUND = 8


@dataclass(frozen=True)
class HyperParams:
    s: int

    def __post_init__(self):
        if self.s not in (2, 3, 4, 6):
            raise ValueError(f"s must be one of 2, 3, 4, 6; got {self.s}")

    @property
    def a(self) -> Fraction:
        return Fraction(1, self.s)

    @property
    def b(self) -> Fraction:
        return 1 - Fraction(1, self.s)

    @property
    def c(self) -> Fraction:
        return Fraction(1)


def _as_params(p) -> HyperParams:
    return p if isinstance(p, HyperParams) else HyperParams(int(p))


def _log_constant(s: int, prec: int) -> ComplexBall:
    ln2 = lambda: ComplexBall.ln_rational(2, prec)  # noqa: E731
    ln3 = lambda: ComplexBall.ln_rational(3, prec)  # noqa: E731
    if s == 2:
        return ln2() * 4
    if s == 3:
        return ln3() * 3
    if s == 4:
        return ln2() * 6
    return ln2() * 4 + ln3() * 3


def _prefactor(s: int, prec: int) -> ComplexBall:
    """sin(pi/s)/pi = 1/(Gamma(a) Gamma(b))."""
    sin_vals = {2: TowerElement.rational(1), 3: TowerElement.sqrt_rational(3) / 2,
                4: TowerElement.sqrt_rational(2) / 2, 6: TowerElement.rational(Fraction(1, 2))}
    return sin_vals[s].to_ball(prec) / ComplexBall.pi(prec)


def _gauss_series(p: HyperParams, x: ComplexBall, prec: int) -> ComplexBall:
    r = x.abs_upper()
    eps = Fraction(1, 1 << prec)
    total = ComplexBall.exact(1, prec=prec)
    term = ComplexBall.exact(1, prec=prec)
    n = 0
    a, b = p.a, p.b
    while True:
        ratio = (n + a) * (n + b) / ((n + 1) ** 2)
        term = term * x * ComplexBall.exact(ratio, prec=prec)
        n += 1
        t = term.abs_upper()
        if t <= eps:
            # term ratios are bounded by |x|, so the rest is geometric
            return total.inflate(t / (1 - r))
        total = total + term


def _connection_series(p: HyperParams, x: ComplexBall, side: Side, prec: int) -> ComplexBall:
    w = 1 - x
    r = w.abs_upper()
    try:
        L = B.log(w, side)
    except BranchCutStraddle as exc:
        raise BranchAmbiguous(f"1 - x meets the negative real axis; pass side: {exc}") from None
    eps = Fraction(1, 1 << prec)
    a, b = p.a, p.b
    s1 = ComplexBall.exact(1, prec=prec)  # sum c_n w^n
    s2 = ComplexBall.exact(0, prec=prec)  # sum c_n h_n w^n
    term = ComplexBall.exact(1, prec=prec)
    h = Fraction(0)
    n = 0
    while True:
        ratio = (n + a) * (n + b) / ((n + 1) ** 2)
        h += Fraction(2, n + 1) - 1 / (a + n) - 1 / (b + n)
        term = term * w * ComplexBall.exact(ratio, prec=prec)
        n += 1
        t = term.abs_upper()
        if t <= eps:
            tail = t / (1 - r)
            s1 = s1.inflate(tail)
            s2 = s2.inflate(tail * _K_BOUND)
            break
        s1 = s1 + term
        s2 = s2 + term * ComplexBall.exact(h, prec=prec)
    K = _log_constant(p.s, prec)
    return _prefactor(p.s, prec) * (s2 + (K - L) * s1)


def f_s(p, alpha: ComplexBall, side: Side = None, precision_bits: int = 128) -> ComplexBall:
    """Certified F_s(alpha).

    Near 1 the value depends on the side of the cut [1, inf): ``side='+'``
    takes log(1 - alpha) with imaginary part +pi when 1 - alpha < 0, i.e.
    the limit as alpha approaches the cut from below.
    """
    p = _as_params(p)
    if not isinstance(alpha, ComplexBall):
        alpha = TowerElement.coerce(alpha).to_ball(precision_bits + 32)
    near0 = alpha.abs_upper()
    near1 = (1 - alpha).abs_upper()
    if min(near0, near1) > DISC:
        raise UnsupportedRegion(f"alpha ~ {complex(alpha):.6g} is outside both discs")
    guard = 32 + math.ceil(math.log2(precision_bits + 64))
    wp = precision_bits + guard
    x = alpha.with_prec(max(wp, alpha.prec))
    if near0 <= near1:
        out = _gauss_series(p, x, wp)
    else:
        out = _connection_series(p, x, side, wp)
    return out.with_prec(precision_bits)


def multiplier_numeric(
    p, alpha0: TowerElement, beta0: TowerElement, precision_bits: int = 128, side: Side = "+"
) -> ComplexBall:
    """Ball for F_s(alpha0) / F_s(beta0), upper-side convention by default."""
    if beta0 != 1 - alpha0:
        raise ValueError("multiplier_numeric requires beta0 == 1 - alpha0")
    wp = precision_bits + 32
    fa = f_s(p, alpha0.to_ball(wp), side, wp)
    fb = f_s(p, beta0.to_ball(wp), side, wp)
    return (fa / fb).with_prec(precision_bits)
