"""Midpoint-radius complex balls with certified enclosure.

Midpoints are exact rationals rounded to ``prec`` significant bits after each
operation; the radius is a rational upper bound kept to a short dyadic
mantissa.  Every operation returns a ball that contains the exact image of
all points of its input balls.

Elementary constants and functions (ln, atan, pi) are evaluated with
fixed-point integer series whose truncation and rounding errors are bounded
explicitly, so no floating-point library enters the error budget.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Optional, Union

from .errors import BranchCutStraddle, DivisorContainsZero, NonConvergence

Side = Optional[Literal["+", "-"]]
Real = Union[int, Fraction]

_RAD_BITS = 30


def _exp2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def _log2_floor(x: Fraction) -> int:
    """floor(log2|x|) for x != 0."""
    x = abs(x)
    e = x.numerator.bit_length() - x.denominator.bit_length()
    if _exp2(e) > x:
        e -= 1
    return e


def _round_to(x: Fraction, e: int) -> Fraction:
    """Nearest multiple of 2**e."""
    if e >= 0:
        return Fraction(round(x / (1 << e)) << e)
    scale = 1 << -e
    return Fraction(round(x * scale), scale)


def _up(r: Fraction) -> Fraction:
    """Upper bound of r >= 0 with a short dyadic mantissa."""
    if r <= 0:
        return Fraction(0)
    if r.denominator & (r.denominator - 1) == 0 and r.numerator.bit_length() <= _RAD_BITS:
        return r
    e = _log2_floor(r) - _RAD_BITS
    scale = _exp2(-e)
    return math.ceil(r * scale) / scale


def _sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    if q <= 0:
        return Fraction(0)
    e = (_log2_floor(q) // 2) - bits
    # sqrt(q) = sqrt(q * 4**-e) * 2**e
    scaled = q * _exp2(-2 * e)
    n = math.isqrt(math.ceil(scaled))
    if n * n < scaled:
        n += 1
    return n * _exp2(e)


def _sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    if q <= 0:
        return Fraction(0)
    e = (_log2_floor(q) // 2) - bits
    scaled = q * _exp2(-2 * e)
    return math.isqrt(math.floor(scaled)) * _exp2(e)


# -- fixed-point elementary functions ---------------------------------------
# Each returns (value, error) with |exact - value| <= error.


def _atanh_fixed(x: Fraction, w: int) -> tuple[int, int]:
    """atanh(x) * 2**w as an integer and an error bound in ulps; 0 <= x <= 1/3."""
    X = (x.numerator << w) // x.denominator
    exact_x = X == x * (1 << w)
    x2 = (X * X) >> w
    p, s, k = X, 0, 0
    while p:
        s += p // (2 * k + 1)
        p = (p * x2) >> w
        k += 1
    # one ulp per truncation, input rounding amplified by 1/(1-x^2) <= 9/8, tail < 1 ulp
    err = 3 * (k + 2) + (0 if exact_x else 2)
    return s, err


def _atan_fixed(x: Fraction, w: int) -> tuple[int, int]:
    """atan(x) * 2**w for |x| <= 1 via Euler's accelerated series."""
    if x == 0:
        return 0, 0
    neg = x < 0
    x = abs(x)
    one = 1 << w
    y = x * x / (1 + x * x)
    Y = (y.numerator << w) // y.denominator
    t0 = x / (1 + x * x)
    T = (t0.numerator << w) // t0.denominator
    s, n = 0, 0
    while T:
        s += T
        n += 1
        T = (T * 2 * n * Y) // ((2 * n + 1) * one)
    err = 2 * n + 16
    return (-s if neg else s), err


@lru_cache(maxsize=64)
def _pi_fixed(w: int) -> tuple[int, int]:
    a, ea = _atan_fixed(Fraction(1, 5), w)
    b, eb = _atan_fixed(Fraction(1, 239), w)
    return 16 * a - 4 * b, 16 * ea + 4 * eb


@lru_cache(maxsize=64)
def _ln2_fixed(w: int) -> tuple[int, int]:
    s, e = _atanh_fixed(Fraction(1, 3), w)
    return 2 * s, 2 * e


def _ln_fixed(q: Fraction, w: int) -> tuple[int, int]:
    if q <= 0:
        raise ValueError("ln of a non-positive rational")
    e = _log2_floor(q)
    m = q / _exp2(e)  # in [1, 2)
    x = (m - 1) / (m + 1)
    s, es = _atanh_fixed(x, w)
    l2, el2 = _ln2_fixed(w)
    return e * l2 + 2 * s, abs(e) * el2 + 2 * es


def _atan2_fixed(b: Fraction, a: Fraction, w: int) -> tuple[int, int]:
    """Principal arg of a + b i in (-pi, pi]."""
    pi, epi = _pi_fixed(w)
    if a == 0 and b == 0:
        raise ValueError("arg of zero")
    if a == 0:
        return (pi // 2 if b > 0 else -(pi // 2)), epi // 2 + 1
    if abs(b) <= abs(a):
        t, et = _atan_fixed(b / a, w)
        base, eb = t, et
    else:
        t, et = _atan_fixed(a / b, w)
        half = pi // 2
        base = (half - t) if (b / a) > 0 else (-half - t)
        eb = et + epi // 2 + 1
    if a > 0:
        return base, eb
    if b >= 0:
        return base + pi, eb + epi
    return base - pi, eb + epi


def _mpf_to_fraction(x) -> Fraction:
    # man_exp drops the sign under the gmpy backend; read the raw tuple
    sign, man, exp, _ = x._mpf_
    if not man:
        return Fraction(0)
    v = Fraction(int(man)) * _exp2(int(exp))
    return -v if sign else v


def _fixed_to_ball(v: int, err: int, w: int) -> tuple[Fraction, Fraction]:
    return Fraction(v, 1 << w), Fraction(err, 1 << w)


class ComplexBall:
    """Complex disc ``{z : |z - (re + i*im)| <= rad}`` at working precision ``prec``."""

    __slots__ = ("re", "im", "rad", "prec")

    def __init__(self, re: Real, im: Real = 0, rad: Real = 0, prec: int = 64):
        self.re = Fraction(re)
        self.im = Fraction(im)
        self.rad = _up(Fraction(rad))
        if self.rad < 0:
            raise ValueError("negative radius")
        self.prec = int(prec)

    # -- construction ---------------------------------------------------
    @classmethod
    def exact(cls, re: Real, im: Real = 0, prec: int = 64) -> ComplexBall:
        return cls(re, im, 0, prec)

    @classmethod
    def from_decimal(cls, re: str, im: str = "0", prec: int | None = None) -> ComplexBall:
        """Ball around decimal strings; radius is half a unit in the last place."""
        r, rr = parse_decimal(re)
        i, ri = parse_decimal(im)
        if prec is None:
            digits = max(len(re.replace("-", "").replace(".", "")), 1)
            prec = max(64, int(digits * 3.33) + 16)
        return cls(r, i, rr + ri, prec)

    @classmethod
    def sqrt_int(cls, n: int, prec: int) -> ComplexBall:
        m = math.isqrt(n << (2 * prec))
        if m * m == n << (2 * prec):
            return cls(Fraction(m, 1 << prec), 0, 0, prec)
        return cls(Fraction(2 * m + 1, 1 << (prec + 1)), 0, Fraction(1, 1 << (prec + 1)), prec)

    @classmethod
    def pi(cls, prec: int) -> ComplexBall:
        w = prec + 24
        v, e = _pi_fixed(w)
        mid, rad = _fixed_to_ball(v, e, w)
        return cls(mid, 0, rad, prec)._rounded(0)

    @classmethod
    def ln_rational(cls, q: Real, prec: int) -> ComplexBall:
        w = prec + 24
        v, e = _ln_fixed(Fraction(q), w)
        mid, rad = _fixed_to_ball(v, e, w)
        return cls(mid, 0, rad, prec)._rounded(0)

    # -- internals ------------------------------------------------------
    def _rounded(self, extra_rad: Fraction) -> ComplexBall:
        re, im, rad = self.re, self.im, self.rad + extra_rad
        mag = max(abs(re), abs(im))
        if mag:
            e = _log2_floor(mag) - self.prec
            nre, nim = _round_to(re, e), _round_to(im, e)
            if nre != re or nim != im:
                rad += abs(nre - re) + abs(nim - im)
            re, im = nre, nim
        out = ComplexBall.__new__(ComplexBall)
        out.re, out.im, out.rad, out.prec = re, im, _up(rad), self.prec
        return out

    @staticmethod
    def _make(re: Fraction, im: Fraction, rad: Fraction, prec: int) -> ComplexBall:
        out = ComplexBall.__new__(ComplexBall)
        out.re, out.im, out.rad, out.prec = re, im, Fraction(0), prec
        return out._rounded(rad)

    def with_prec(self, prec: int) -> ComplexBall:
        return ComplexBall._make(self.re, self.im, self.rad, prec)

    @staticmethod
    def _coerce(x) -> ComplexBall:
        if isinstance(x, ComplexBall):
            return x
        if isinstance(x, (int, Fraction)):
            return ComplexBall(x, 0, 0, 16)
        return NotImplemented

    # -- magnitude ------------------------------------------------------
    def mid_abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def mid_abs_upper(self) -> Fraction:
        return _sqrt_upper(self.mid_abs2())

    def mid_abs_lower(self) -> Fraction:
        return _sqrt_lower(self.mid_abs2())

    def abs_upper(self) -> Fraction:
        """Upper bound of |z| over the ball."""
        return self.mid_abs_upper() + self.rad

    def abs_lower(self) -> Fraction:
        return max(Fraction(0), self.mid_abs_lower() - self.rad)

    def contains_zero(self) -> bool:
        return self.mid_abs2() <= self.rad * self.rad

    def re_sign(self) -> int:
        if self.re - self.rad > 0:
            return 1
        if self.re + self.rad < 0:
            return -1
        return 0

    def im_sign(self) -> int:
        if self.im - self.rad > 0:
            return 1
        if self.im + self.rad < 0:
            return -1
        return 0

    def real_part(self) -> ComplexBall:
        return ComplexBall._make(self.re, Fraction(0), self.rad, self.prec)

    def imag_part(self) -> ComplexBall:
        return ComplexBall._make(self.im, Fraction(0), self.rad, self.prec)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> ComplexBall:
        other = ComplexBall._coerce(other)
        if other is NotImplemented:
            return other
        return ComplexBall._make(
            self.re + other.re, self.im + other.im, self.rad + other.rad, max(self.prec, other.prec)
        )

    __radd__ = __add__

    def __neg__(self) -> ComplexBall:
        out = ComplexBall.__new__(ComplexBall)
        out.re, out.im, out.rad, out.prec = -self.re, -self.im, self.rad, self.prec
        return out

    def __sub__(self, other) -> ComplexBall:
        other = ComplexBall._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> ComplexBall:
        return ComplexBall._coerce(other) - self

    def __mul__(self, other) -> ComplexBall:
        other = ComplexBall._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        rad = Fraction(0)
        if self.rad or other.rad:
            rad = (
                self.mid_abs_upper() * other.rad
                + other.mid_abs_upper() * self.rad
                + self.rad * other.rad
            )
        return ComplexBall._make(a * c - b * d, a * d + b * c, rad, max(self.prec, other.prec))

    __rmul__ = __mul__

    def mul_i(self) -> ComplexBall:
        out = ComplexBall.__new__(ComplexBall)
        out.re, out.im, out.rad, out.prec = -self.im, self.re, self.rad, self.prec
        return out

    def inverse(self) -> ComplexBall:
        n2 = self.mid_abs2()
        if n2 == 0 or self.contains_zero():
            raise DivisorContainsZero("divisor ball contains zero")
        low = self.mid_abs_lower()
        margin = low - self.rad
        if margin <= 0:
            raise DivisorContainsZero("divisor ball contains zero")
        rad = self.rad / (low * margin) if self.rad else Fraction(0)
        return ComplexBall._make(self.re / n2, -self.im / n2, rad, self.prec)

    def __truediv__(self, other) -> ComplexBall:
        other = ComplexBall._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> ComplexBall:
        return ComplexBall._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> ComplexBall:
        if not isinstance(n, int):
            return NotImplemented
        return powi(self, n)

    # -- branch handling ------------------------------------------------
    def touches_cut(self) -> bool:
        """True if the ball meets the closed negative real axis."""
        return self.re - self.rad <= 0 and abs(self.im) <= self.rad

    def _branch_flip(self, side: Side, op: str) -> bool:
        """Whether the principal value at the midpoint must be moved to ``side``."""
        if not self.touches_cut():
            return False
        if side is None:
            raise BranchCutStraddle(f"{op}: ball meets the branch cut and no side given")
        if side == "+":
            return self.im < 0
        return self.im >= 0

    # -- containment ----------------------------------------------------
    def overlaps(self, other: ComplexBall) -> bool:
        dre, dim = self.re - other.re, self.im - other.im
        r = self.rad + other.rad
        return dre * dre + dim * dim <= r * r

    def contains_ball(self, other: ComplexBall) -> bool:
        """True if ``other`` lies entirely inside this ball."""
        if other.rad > self.rad:
            return False
        dre, dim = self.re - other.re, self.im - other.im
        r = self.rad - other.rad
        return dre * dre + dim * dim <= r * r

    def contains_point(self, re: Real, im: Real = 0) -> bool:
        dre, dim = self.re - Fraction(re), self.im - Fraction(im)
        return dre * dre + dim * dim <= self.rad * self.rad

    def inflate(self, r: Real) -> ComplexBall:
        return ComplexBall(self.re, self.im, self.rad + Fraction(r), self.prec)

    # -- rendering ------------------------------------------------------
    def certified_digits(self) -> int:
        """Number of correct significant decimal digits implied by the radius."""
        mag = max(abs(self.re), abs(self.im))
        if not self.rad:
            return self.prec * 30103 // 100000
        if mag == 0 or self.rad >= mag:
            return 0
        return max(0, int(math.floor(math.log10(mag) - math.log10(self.rad))) - 1)

    def to_decimal(self, verbose: bool = False) -> str:
        re = _certified_component(self.re, self.rad)
        im = _certified_component(self.im, self.rad)
        if self.im == 0:
            text = re
        elif im.startswith("-"):
            text = f"{re} - {im[1:]}i"
        else:
            text = f"{re} + {im}i"
        if verbose:
            text += f"  [±{float(self.rad):.3e}, {self.certified_digits()} digits]"
        return text

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"ComplexBall({self.to_decimal(verbose=True)}, prec={self.prec})"


def parse_decimal(text: str) -> tuple[Fraction, Fraction]:
    t = text.strip().replace("_", "")
    mant = t.lower().split("e")[0]
    frac = mant.split(".")[1] if "." in mant else ""
    exp = int(t.lower().split("e")[1]) if "e" in t.lower() else 0
    value = Fraction(t)
    if "." not in mant:
        # integers are taken as exact
        return value, Fraction(0)
    half_ulp = Fraction(1, 2 * 10 ** len(frac)) * Fraction(10) ** exp
    return value, half_ulp


def _certified_component(mid: Fraction, rad: Fraction, max_digits: int = 2000) -> str:
    """Decimal digits of mid shared by every point of [mid - rad, mid + rad]."""
    lo, hi = mid - rad, mid + rad
    if mid == 0:
        return "0"
    if lo <= 0 <= hi:
        return f"±{float(rad):.1e}"
    if rad == 0 and mid.denominator & (mid.denominator - 1) == 0:
        n = 0
        while (mid * 10**n).denominator != 1 and n < max_digits:
            n += 1
        return _fmt_trunc(mid, n)
    neg = hi < 0
    a, b = (abs(hi), abs(lo)) if neg else (lo, hi)
    best = None
    for n in range(0, max_digits):
        if math.floor(a * 10**n) != math.floor(b * 10**n):
            break
        best = n
    if best is None:
        return f"{float(mid):.3e}"
    return ("-" if neg else "") + _fmt_trunc(a, best)


def _fmt_trunc(x: Fraction, n: int) -> str:
    neg = x < 0
    x = abs(x)
    v = math.floor(x * 10**n)
    s = str(v).rjust(n + 1, "0")
    body = s if n == 0 else f"{s[:-n]}.{s[-n:]}"
    return ("-" if neg else "") + body


# -- functional interface ---------------------------------------------------


def sqrt(x: ComplexBall, side: Side = None) -> ComplexBall:
    """Principal square root; ``side`` picks the limit on the negative real axis."""
    if x.contains_zero():
        raise BranchCutStraddle("sqrt: ball contains zero")
    import mpmath

    flip = x._branch_flip(side, "sqrt")
    ctx = mpmath.MPContext()
    ctx.prec = x.prec + 24
    re = ctx.mpf(x.re.numerator) / x.re.denominator
    im = ctx.mpf(x.im.numerator) / x.im.denominator
    s = ctx.sqrt(ctx.mpc(re, im))
    sr, si = _mpf_to_fraction(s.real), _mpf_to_fraction(s.imag)
    if flip:
        sr, si = -sr, -si
    # midpoint residual |s^2 - w0| / |s| and propagation r / sqrt(|w0|)
    res_re = sr * sr - si * si - x.re
    res_im = 2 * sr * si - x.im
    s_abs_low = _sqrt_lower(sr * sr + si * si)
    err = _sqrt_upper(res_re * res_re + res_im * res_im) / s_abs_low
    w_low = x.mid_abs_lower()
    if x.rad:
        if x.rad >= w_low:
            raise BranchCutStraddle("sqrt: ball too wide")
        err += x.rad / _sqrt_lower(w_low)
    return ComplexBall._make(sr, si, err, x.prec)


def log(x: ComplexBall, side: Side = None) -> ComplexBall:
    """Principal logarithm; ``side='+'`` gives Im = +pi on the negative real axis."""
    if x.contains_zero():
        raise BranchCutStraddle("log: ball contains zero")
    flip = x._branch_flip(side, "log")
    w = x.prec + 24
    re_v, re_e = _ln_fixed(x.mid_abs2(), w)
    im_v, im_e = _atan2_fixed(x.im, x.re, w)
    if flip:
        pi, epi = _pi_fixed(w)
        im_v = im_v + 2 * pi if side == "+" else im_v - 2 * pi
        im_e += 2 * epi
    mre, rre = _fixed_to_ball(re_v, re_e, w)
    mim, rim = _fixed_to_ball(im_v, im_e, w)
    err = rre / 2 + rim
    if x.rad:
        low = x.mid_abs_lower()
        if x.rad >= low:
            raise BranchCutStraddle("log: ball too wide")
        err += x.rad / (low - x.rad)
    return ComplexBall._make(mre / 2, mim, err, x.prec)


def powi(x: ComplexBall, n: int) -> ComplexBall:
    if n < 0:
        return powi(x.inverse(), -n)
    result = ComplexBall(1, 0, 0, x.prec)
    base = x
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def arith(op: str, *args: ComplexBall, side: Side = None) -> ComplexBall:
    """Dispatch by name: add, mul, div, neg, sqrt, log, powi."""
    if op == "add":
        return args[0] + args[1]
    if op == "mul":
        return args[0] * args[1]
    if op == "div":
        return args[0] / args[1]
    if op == "neg":
        return -args[0]
    if op == "sqrt":
        return sqrt(args[0], side)
    if op == "log":
        return log(args[0], side)
    if op == "powi":
        return powi(args[0], int(args[1]))
    raise ValueError(f"unknown op {op!r}")


def agm(a: ComplexBall, b: ComplexBall, max_iter: int | None = None) -> ComplexBall:
    """Arithmetic-geometric mean of two balls in the right half-plane."""
    if a.re_sign() <= 0 or b.re_sign() <= 0:
        raise ValueError("agm arguments must lie in the right half-plane")
    prec = max(a.prec, b.prec)
    if max_iter is None:
        max_iter = 2 * prec.bit_length() + 60
    target = _exp2(-prec)
    for _ in range(max_iter):
        gap = (a - b).mid_abs_upper()
        if gap <= target * a.mid_abs_lower():
            # the limit lies within the current gap of either iterate
            return a.inflate(gap)
        a, b = (a + b) * Fraction(1, 2), sqrt(a * b)
    raise NonConvergence("agm did not converge")


def contains(b: ComplexBall, x) -> bool:
    """Whether the exact tower element ``x`` is compatible with ball ``b``."""
    xb = x.to_ball(b.prec + 32)
    return b.overlaps(xb)
