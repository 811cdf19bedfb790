"""Ramanujan-type series for 1/pi from a modular equation, derived exactly.

Given ``u^k = ab, v^k = (1-a)(1-b), P(u, v) = 0`` of degree d, the pipeline

1. finds a point with b = 1 - a (so u^k = v^k and v = zeta*u),
2. differentiates P implicitly with respect to u, then a and b,
3. forms the multiplier m with m^2 = (1/d) * b(1-b)/(a(1-a)) * a'/b'
   and classifies it as 1/sqrt(d) (positive series) or
   sqrt(4d - l)/(2d) + i*sqrt(l)/(2d) (alternating series),
4. evaluates m'/a' through the logarithmic derivative of m, and
5. emits z = 4ab, the linear coefficients a + b*n, and a rational normal form.

Every quantity is an exact TowerElement; numerics only pick branches and
locate roots, and every numeric guess is checked exactly afterwards.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Literal

import mpmath

from .ball import ComplexBall, _mpf_to_fraction, contains
from .errors import (
    DegeneratePoint,
    IdentificationFailed,
    NoSingularPoint,
    NotRepresentable,
    SingularJacobian,
    UnrecognizedMultiplier,
)
from .exactnum import ONE, ZERO, I, TowerElement, principal_sqrt, real_sign, sqrt
from .hyper import multiplier_numeric
from .identify import recognize
from .radext import ExtElement, RadicalExtension, as_tower
from .exprparse import parse_poly
from .modeq import ModularEquation, PolyUV, eval_P, eval_univariate, render_poly, substitute_scaled

SeriesClass = Literal["positive", "alternating"]
CLASSES = ("positive", "alternating")

# working precision (bits) for numeric root finding and branch hints
ROOT_BITS = 400
HINT_BITS = 128


# -- roots of unity ---------------------------------------------------------

_ZETA24 = (TowerElement.sqrt_rational(6) + TowerElement.sqrt_rational(2)) / 4 + I * (
    TowerElement.sqrt_rational(6) - TowerElement.sqrt_rational(2)
) / 4


def roots_of_unity(k: int) -> list[TowerElement]:
    """All k-th roots of unity exp(2*pi*i*j/k), j = 0..k-1, for k dividing 24."""
    if 24 % k:
        raise NotRepresentable(f"{k}-th roots of unity are outside Q(i, sqrt 2, sqrt 3)")
    step = _ZETA24 ** (24 // k)
    out, z = [], ONE
    for _ in range(k):
        out.append(z)
        z = z * step
    return out


# -- data -------------------------------------------------------------------


@dataclass(frozen=True)
class SingularPoint:
    u0: TowerElement
    v0: TowerElement
    zeta: TowerElement
    alpha0: TowerElement
    beta0: TowerElement


@dataclass(frozen=True)
class DerivationTrace:
    v1: TowerElement
    v2: TowerElement
    alpha1: TowerElement
    beta1: TowerElement
    alpha2: TowerElement
    beta2: TowerElement
    m0: TowerElement
    m_ratio: TowerElement
    d: int
    level: int
    s: int
    # m0 is reported in its normal form; when set, the root of m^2 at the
    # point itself is conj(m0) (the conjugate point gives the same series)
    conjugated: bool = False

    @property
    def m_at_point(self) -> TowerElement:
        return self.m0.conjugate() if self.conjugated else self.m0


@dataclass(frozen=True)
class RationalForm:
    """sum (1/2)_n (1/s)_n (1-1/s)_n / n!^3 * (A n + B) * (sign*num/M)^n = C*sqrt(r)/pi."""

    A: int
    B: int
    sign: int
    num: int
    M: int
    C: Fraction
    radicand: int

    @property
    def z(self) -> Fraction:
        return Fraction(self.sign * self.num, self.M)


@dataclass(frozen=True)
class SeriesCertificate:
    equation_name: str
    s: int
    level: int
    d: int
    k: int
    poly: str
    cls: SeriesClass
    z: TowerElement
    a: TowerElement
    b: TowerElement
    rational_form: RationalForm | None
    trace: DerivationTrace
    point: SingularPoint
    irrational: bool = False

    @property
    def label(self) -> str:
        return f"{self.level}{'A' if self.cls == 'alternating' else 'P'}{self.d}"

    def replace(self, **changes) -> SeriesCertificate:
        return replace(self, **changes)

    def polynomial(self) -> PolyUV:
        return PolyUV.from_poly(parse_poly(self.poly, ("u", "v")))

    def identity_text(self) -> str:
        if self.rational_form is None:
            return f"sum (a + b n) z^n = 1/pi with z = {self.z}, a = {self.a}, b = {self.b}"
        return format_identity(self.rational_form)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    label: str
    digits: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def render(self) -> str:
        lines = [f"verify {self.label} at {self.digits} digits"]
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        lines.append("all checks passed" if self.passed else f"FAILED: {', '.join(self.failed())}")
        return "\n".join(lines)


# -- singular points --------------------------------------------------------


def _reduce_exponent(coeffs: dict[int, TowerElement]) -> tuple[int, dict[int, TowerElement]]:
    """Write Q(u) = R(u^e) with e maximal; returns (e, coefficients of R)."""
    e = 0
    for n in coeffs:
        e = math.gcd(e, n)
    e = e or 1
    return e, {n // e: c for n, c in coeffs.items()}


def _numeric_roots(coeffs: dict[int, TowerElement], bits: int) -> list:
    deg = max(coeffs)
    ctx = mpmath.MPContext()
    ctx.prec = bits
    cs = []
    for n in range(deg, -1, -1):
        c = coeffs.get(n, ZERO)
        b = c.to_ball(bits)
        cs.append(ctx.mpc(ctx.mpf(b.re.numerator) / b.re.denominator, ctx.mpf(b.im.numerator) / b.im.denominator))
    if deg == 0:
        return []
    return list(ctx.polyroots(cs, maxsteps=400, extraprec=bits))


def _exact_low_degree_roots(coeffs: dict[int, TowerElement]) -> list[TowerElement]:
    deg = max(coeffs)
    c = [coeffs.get(n, ZERO) for n in range(deg + 1)]
    if deg == 1:
        return [-c[0] / c[1]]
    if deg == 2:
        disc = c[1] * c[1] - c[2] * c[0] * 4
        r = principal_sqrt(disc) if not disc.is_zero() else ZERO
        return [(-c[1] + r) / (c[2] * 2), (-c[1] - r) / (c[2] * 2)]
    return []


def univariate_roots(coeffs: dict[int, TowerElement]) -> list[TowerElement]:
    """Exact roots of a univariate tower polynomial lying in its coefficient tower.

    Roots are isolated numerically, recognized against the coefficient
    field, and kept only when they annihilate the polynomial exactly.  For
    degree <= 2 the closed form is used when recognition misses a root.
    """
    if max(coeffs, default=0) == 0:
        return []
    radicands = sorted({g for c in coeffs.values() for g in c.generators() if g != "i"})
    found: list[TowerElement] = []
    numeric = _numeric_roots(coeffs, ROOT_BITS)
    digits = int(ROOT_BITS * 0.30103) - 20
    eps = Fraction(1, 10**digits)
    for r in numeric:
        scale = max(1, abs(r))
        x = recognize(
            _mpf_to_fraction(r.real), _mpf_to_fraction(r.imag), eps * int(scale + 1), eps * int(scale + 1),
            radicands, 10**12,
        )
        if x is not None and eval_univariate(coeffs, x).is_zero() and x not in found:
            found.append(x)
    if len(found) < len(numeric):
        for x in _exact_low_degree_roots(coeffs):
            if eval_univariate(coeffs, x).is_zero() and x not in found:
                found.append(x)
    return found


def _power_of_two_roots(w: TowerElement, e: int) -> list:
    """All e-th roots of w for e a power of two.

    Square roots are taken in the tower while they exist; past that point the
    remaining roots are the embeddings of an abstract generator t^e' = y.
    """
    if e & (e - 1):
        raise NotRepresentable(f"{e}-th roots are not quadratic")
    if e == 1:
        return [w]
    try:
        y = principal_sqrt(w)
    except NotRepresentable:
        return [RadicalExtension(w, e, j).gen for j in range(e)]
    return _power_of_two_roots(y, e // 2) + _power_of_two_roots(-y, e // 2)


def _class_accepts(p: TowerElement, cls: SeriesClass) -> bool:
    if not p.is_real() or p.is_zero():
        return False
    sgn = real_sign(p)
    if cls == "alternating":
        return sgn < 0
    return sgn > 0 and real_sign(Fraction(1, 4) - p) > 0


def candidate_points(eq: ModularEquation, cls: SeriesClass) -> list[SingularPoint]:
    """Every exactly verified point with b = 1 - a whose u^k fits ``cls``.

    All k-th roots of unity zeta are tried for v = zeta*u; results are
    ordered by |u^k| (fastest series first); ties go to the smallest arg(zeta)
    in (-pi, pi], then to the u0 with the largest real, then imaginary, part.
    """
    if cls not in CLASSES:
        raise ValueError(f"class must be one of {CLASSES}")
    out: list[tuple[tuple, SingularPoint]] = []
    seen: set = set()
    for j, zeta in enumerate(roots_of_unity(eq.k)):
        Q = substitute_scaled(eq.P, zeta, eq.k)
        if not Q or max(Q) == 0:
            continue
        e, R = _reduce_exponent(Q)
        try:
            ws = univariate_roots(R)
        except NotRepresentable:
            continue
        for w in ws:
            if w.is_zero():
                continue
            try:
                us = _power_of_two_roots(w, e)
            except NotRepresentable:
                continue
            for u0 in us:
                p = as_tower(u0**eq.k)
                if p is None or not _class_accepts(p, cls):
                    continue
                try:
                    alpha0 = (1 - principal_sqrt(1 - p * 4)) / 2
                except NotRepresentable:
                    continue
                if alpha0.is_zero() or alpha0 == Fraction(1, 2) or alpha0 == 1:
                    continue
                v0 = zeta * u0
                pt = SingularPoint(u0=u0, v0=v0, zeta=zeta, alpha0=alpha0, beta0=1 - alpha0)
                if not _point_ok(eq.P, eq.k, pt):
                    continue
                key = (j, u0)
                if key in seen:
                    continue
                seen.add(key)
                cz, cu = complex(zeta), complex(u0)
                order = (round(abs(complex(p)), 12), round(cmath.phase(cz), 12), -round(cu.real, 12),
                         -round(cu.imag, 12))
                out.append((order, pt))
    out.sort(key=lambda t: t[0])
    return [pt for _, pt in out]


def _point_ok(P: PolyUV, k: int, pt: SingularPoint) -> bool:
    uk, vk = pt.u0**k, pt.v0**k
    return (
        eval_P(P, pt.u0, pt.v0).is_zero()
        and pt.beta0 == 1 - pt.alpha0
        and pt.alpha0 * pt.beta0 == uk
        and pt.alpha0 + pt.beta0 == uk - vk + 1
    )


def find_singular_point(eq: ModularEquation, cls: SeriesClass) -> SingularPoint:
    """The point the derivation uses: first candidate whose multiplier has one of the two rational-series forms."""
    return derive(eq, cls).point


# -- derivatives ------------------------------------------------------------


def implicit_derivatives(P: PolyUV, pt: SingularPoint) -> tuple[TowerElement, TowerElement]:
    """v'(u0) and v''(u0) for the branch of P(u, v) = 0 through (u0, v0)."""
    u, v = pt.u0, pt.v0
    Pu, Pv = P.diff_u(), P.diff_v()
    pv = eval_P(Pv, u, v)
    if pv.is_zero():
        raise SingularJacobian("dP/dv vanishes at the point")
    pu = eval_P(Pu, u, v)
    puu = eval_P(Pu.diff_u(), u, v)
    puv = eval_P(Pu.diff_v(), u, v)
    pvv = eval_P(Pv.diff_v(), u, v)
    v1 = -pu / pv
    v2 = -(puu + puv * v1 * 2 + pvv * v1 * v1) / pv
    return v1, v2


def _sum_product_derivatives(k: int, pt: SingularPoint, v1: TowerElement, v2: TowerElement):
    """Derivatives of a + b = u^k - v^k + 1 and ab = u^k."""
    u, v = pt.u0, pt.v0
    uk1, vk1 = u ** (k - 1), v ** (k - 1)
    uk2 = u ** (k - 2) if k >= 2 else ZERO
    vk2 = v ** (k - 2) if k >= 2 else ZERO
    s1 = (uk1 - vk1 * v1) * k
    s2 = (uk2 - vk2 * v1 * v1) * (k * (k - 1)) - vk1 * v2 * k
    p1 = uk1 * k
    p2 = uk2 * (k * (k - 1))
    return s1, s2, p1, p2


def alpha_beta_derivatives(k: int, pt: SingularPoint, v1: TowerElement, v2: TowerElement):
    """(a', b', a'', b'') at u0 from the sum/product relations."""
    a, b = pt.alpha0, pt.beta0
    if a == b:
        raise DegeneratePoint("alpha0 == beta0")
    s1, s2, p1, p2 = _sum_product_derivatives(k, pt, v1, v2)
    gap = b - a
    a1 = (p1 - a * s1) / gap
    b1 = s1 - a1
    a2 = (p2 - a1 * b1 * 2 - a * s2) / gap
    b2 = s2 - a2
    return a1, b1, a2, b2


# -- multiplier -------------------------------------------------------------


def _in_tower(x, what: str) -> TowerElement:
    t = as_tower(x)
    if t is None:
        raise UnrecognizedMultiplier(f"{what} = {x} does not lie in the coefficient tower")
    return t


def multiplier_squared(alpha0, beta0, alpha1, beta1, d: int) -> TowerElement:
    return _in_tower((beta0 * (1 - beta0)) / (alpha0 * (1 - alpha0)) * (alpha1 / beta1) / d, "m0^2")


def multiplier_forms(d: int, level: int) -> dict[SeriesClass, TowerElement]:
    """The two multiplier values for which a rational-type series exists."""
    return {
        "positive": TowerElement.sqrt_rational(Fraction(1, d)),
        "alternating": (TowerElement.sqrt_rational(4 * d - level) + TowerElement.sqrt_rational(level) * I)
        / (2 * d),
    }


def classify_multiplier(m0: TowerElement, d: int, level: int) -> SeriesClass:
    for cls, form in multiplier_forms(d, level).items():
        if m0 == form:
            return cls
    raise UnrecognizedMultiplier(f"m0 = {m0} matches neither form for d = {d}, level = {level}")


def multiplier_at(alpha0, beta0, alpha1, beta1, d: int, level: int,
                  numeric_hint: ComplexBall) -> tuple[TowerElement, SeriesClass, bool]:
    """Exact m0 with branch fixed by ``numeric_hint``, its class, and a conjugation flag.

    The numeric multiplier F(a0)/F(b0) only sees a0, while m^2 depends on the
    point; a point and its complex conjugate give conjugate values of m^2 and
    the same real series.  If the hint matches a root of conj(m^2) rather than
    m^2, that root is returned with the flag set.
    """
    if beta1.is_zero():
        raise DegeneratePoint("beta' vanishes")
    m2 = multiplier_squared(alpha0, beta0, alpha1, beta1, d)
    for conjugated, target in ((False, m2), (True, m2.conjugate())):
        try:
            m0 = sqrt(target, numeric_hint)
        except NotRepresentable:
            continue
        if contains(numeric_hint, m0):
            return m0, classify_multiplier(m0, d, level), conjugated
    raise UnrecognizedMultiplier(f"no square root of m0^2 = {m2} agrees with numeric {numeric_hint.to_decimal()}")


def m_derivative_ratio(alpha0, beta0, alpha1, beta1, alpha2, beta2, m0) -> TowerElement:
    """m'/a' from the logarithmic derivative of m^2 = (1/d) b(1-b)/(a(1-a)) a'/b'."""
    for x in (alpha0, beta0, 1 - alpha0, 1 - beta0):
        if x.is_zero():
            raise DegeneratePoint("alpha0 or beta0 is 0 or 1")
    if alpha1.is_zero() or beta1.is_zero():
        raise DegeneratePoint("alpha' or beta' vanishes")
    bracket = (
        beta1 / beta0
        - beta1 / (1 - beta0)
        - alpha1 / alpha0
        + alpha1 / (1 - alpha0)
        + alpha2 / alpha1
        - beta2 / beta1
    )
    return _in_tower(m0 / (alpha1 * 2) * bracket, "m'/a'")


# -- series -----------------------------------------------------------------


def series_parameters(point: SingularPoint, m_ratio: TowerElement, d: int, level: int,
                      cls: SeriesClass) -> tuple[TowerElement, TowerElement, TowerElement]:
    """(z, a, b) with sum (1/2)_n (1/s)_n (1-1/s)_n / n!^3 (a + b n) z^n = 1/pi."""
    alpha0, beta0 = point.alpha0, point.beta0
    z = alpha0 * beta0 * 4
    if cls == "positive":
        root = TowerElement.sqrt_rational(Fraction(d, level))
    else:
        root = TowerElement.sqrt_rational(Fraction(d, level) - Fraction(1, 4))
    b = (1 - alpha0 * 2) * root * 2
    a = -(alpha0 * beta0 * 2) * m_ratio * d / TowerElement.sqrt_rational(level)
    return z, a, b


def _perfect_power(n: int) -> tuple[int, int]:
    """(base, e) with n == base**e and e maximal."""
    if n <= 1:
        return n, 1
    best = (n, 1)
    for e in range(2, n.bit_length() + 1):
        r = round(n ** (1.0 / e))
        for c in (r - 1, r, r + 1):
            if c > 1 and c**e == n:
                best = (c, e)
    return best


def _common_radical(a: TowerElement, b: TowerElement) -> int | None:
    """Square-free r > 0 with a, b both in Q*sqrt(r), or None."""
    keys = set(a.coords) | set(b.coords)
    if len(keys) != 1:
        return None
    r = keys.pop()
    return r if r > 0 else None


def rational_normal_form(z: TowerElement, a: TowerElement, b: TowerElement) -> RationalForm | None:
    """Integer form (A n + B) (sign*num/M)^n = C sqrt(r)/pi, or None if not rational."""
    if not z.is_rational() or z.is_zero():
        return None
    r = _common_radical(a, b)
    if r is None:
        return None
    root = TowerElement.sqrt_rational(r)
    ar, br = (a / root).to_fraction(), (b / root).to_fraction()
    lcm = math.lcm(ar.denominator, br.denominator)
    g = math.gcd(int(ar * lcm), int(br * lcm)) or 1
    rho = Fraction(lcm, g)
    zq = z.to_fraction()
    return RationalForm(
        A=int(br * rho),
        B=int(ar * rho),
        sign=-1 if zq < 0 else 1,
        num=abs(zq.numerator),
        M=zq.denominator,
        C=rho / r,
        radicand=r,
    )


def rational_form_parameters(rf: RationalForm) -> tuple[TowerElement, TowerElement, TowerElement]:
    """(z, a, b) recovered from a rational form."""
    scale = TowerElement.sqrt_rational(rf.radicand) / (rf.C * rf.radicand)
    return TowerElement.rational(rf.z), scale * rf.B, scale * rf.A


def format_identity(rf: RationalForm) -> str:
    """Human-readable identity, e.g. (14151 n + 827)(-1)^n/500^{2n} = 1500√3/π."""
    lin = f"({rf.A} n {'+' if rf.B >= 0 else '-'} {abs(rf.B)})"
    parts = [lin]
    if rf.sign < 0:
        parts.append("(−1)^n")
    if rf.num != 1:
        base, e = _perfect_power(rf.num)
        parts.append(f"{base}^{{{e}n}}" if e > 1 else f"{base}^n")
    text = "".join(parts)
    base, e = _perfect_power(rf.M)
    text += f"/{base}^{{{e}n}}" if e > 1 else f"/{base}^n"
    radical = "" if rf.radicand == 1 else f"√{rf.radicand}"
    c = rf.C
    if c.denominator == 1:
        rhs = f"{c.numerator}{radical}/π"
    else:
        rhs = f"{c.numerator}{radical}/({c.denominator}π)"
    return f"{text} = {rhs}"


# -- pipeline ---------------------------------------------------------------


def derive_at(eq: ModularEquation, pt: SingularPoint, cls: SeriesClass | None = None,
              hint_bits: int = HINT_BITS) -> SeriesCertificate:
    """Run the pipeline at a given point; raises if the multiplier has neither rational-series form."""
    v1, v2 = implicit_derivatives(eq.P, pt)
    a1, b1, a2, b2 = alpha_beta_derivatives(eq.k, pt, v1, v2)
    hint = multiplier_numeric(eq.s, pt.alpha0, pt.beta0, hint_bits)
    m0, found, conj = multiplier_at(pt.alpha0, pt.beta0, a1, b1, eq.degree, eq.level, hint)
    if cls is not None and found != cls:
        raise UnrecognizedMultiplier(f"multiplier is of {found} form, {cls} requested")
    ratio = m_derivative_ratio(pt.alpha0, pt.beta0, a1, b1, a2, b2, m0.conjugate() if conj else m0)
    trace = DerivationTrace(v1=v1, v2=v2, alpha1=a1, beta1=b1, alpha2=a2, beta2=b2, m0=m0,
                            m_ratio=ratio, d=eq.degree, level=eq.level, s=eq.s, conjugated=conj)
    z, a, b = series_parameters(pt, ratio, eq.degree, eq.level, found)
    rf = rational_normal_form(z, a, b)
    return SeriesCertificate(
        equation_name=eq.name, s=eq.s, level=eq.level, d=eq.degree, k=eq.k,
        poly=render_poly(eq.P), cls=found, z=z, a=a, b=b, rational_form=rf,
        trace=trace, point=pt, irrational=rf is None,
    )


def derive(eq: ModularEquation, cls: SeriesClass) -> SeriesCertificate:
    """Derive the certificate of class ``cls`` from ``eq``.

    Candidates are tried fastest-first; the first one whose multiplier has
    the requested multiplier form wins.
    """
    errors = []
    for pt in candidate_points(eq, cls):
        try:
            return derive_at(eq, pt, cls)
        except (UnrecognizedMultiplier, DegeneratePoint, SingularJacobian, NotRepresentable) as exc:
            errors.append(exc)
    if errors:
        raise NoSingularPoint(
            f"{eq.name}: no {cls} point yields a recognized multiplier ({errors[-1].name}: {errors[-1]})"
        )
    raise NoSingularPoint(f"{eq.name}: no {cls} candidate point")


def iter_derivations(eqs) -> Iterator[SeriesCertificate]:
    """Every (equation, class) pair that derives successfully."""
    for eq in eqs:
        for cls in CLASSES:
            try:
                yield derive(eq, cls)
            except NoSingularPoint:
                continue


# -- verification -----------------------------------------------------------

NUMERIC_MULTIPLIER_BITS = 80
NUMERIC_MULTIPLIER_DIGITS = 20


def _check(report: VerificationReport, name: str, fn) -> None:
    """Run ``fn`` -> (passed, detail); any exception is a failure."""
    try:
        ok, detail = fn()
    except Exception as exc:  # a broken certificate can break any step
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    report.checks.append(Check(name, bool(ok), detail))


def verify_certificate(cert: SeriesCertificate, digits: int = 1000) -> VerificationReport:
    """Re-check every stored relation exactly, then the numeric identities.

    Nothing is re-derived: the stored point and derivatives are substituted
    back into the defining relations.  Failures become report entries.
    """
    from . import piengine

    rep = VerificationReport(cert.label, digits)
    pt, tr, k = cert.point, cert.trace, cert.k
    P = cert.polynomial()

    _check(rep, "root_of_unity", lambda: (pt.zeta**k == 1, f"zeta^{k} = 1"))
    _check(rep, "point_on_curve", lambda: (
        eval_P(P, pt.u0, pt.v0).is_zero() and pt.v0 == pt.zeta * pt.u0, "P(u0, v0) = 0 and v0 = zeta*u0"))
    _check(rep, "singular_relation", lambda: (
        pt.beta0 == 1 - pt.alpha0
        and pt.alpha0 * pt.beta0 == pt.u0**k
        and pt.alpha0 + pt.beta0 == pt.u0**k - pt.v0**k + 1,
        "b0 = 1 - a0, a0*b0 = u0^k, a0 + b0 = u0^k - v0^k + 1"))
    _check(rep, "implicit_derivatives", lambda: (
        implicit_derivatives(P, pt) == (tr.v1, tr.v2), "v', v'' from implicit differentiation"))
    _check(rep, "alpha_beta_derivatives", lambda: (
        alpha_beta_derivatives(k, pt, tr.v1, tr.v2) == (tr.alpha1, tr.beta1, tr.alpha2, tr.beta2),
        "a', b', a'', b'' from u^k = ab, u^k - v^k + 1 = a + b"))
    _check(rep, "multiplier_identity", lambda: (
        tr.m_at_point * tr.m_at_point
        == multiplier_squared(pt.alpha0, pt.beta0, tr.alpha1, tr.beta1, cert.d),
        "m0^2 = (1/d) b(1-b)/(a(1-a)) a'/b'" + (" (at the conjugate point)" if tr.conjugated else "")))

    def _class():
        form = multiplier_forms(cert.d, cert.level)[cert.cls]
        if cert.cls == "alternating":
            ok = tr.m0 * tr.m0.conjugate() == Fraction(1, cert.d)
        else:
            ok = tr.m0 == TowerElement.sqrt_rational(Fraction(1, cert.d))
        return ok and tr.m0 == form, f"m0 = {form} ({cert.cls})"

    _check(rep, "multiplier_class", _class)
    _check(rep, "multiplier_ratio", lambda: (
        m_derivative_ratio(pt.alpha0, pt.beta0, tr.alpha1, tr.beta1, tr.alpha2, tr.beta2, tr.m_at_point)
        == tr.m_ratio, f"m'/a' = {tr.m_ratio}"))
    _check(rep, "series_z", lambda: (cert.z == pt.alpha0 * pt.beta0 * 4, f"z = 4 a0 b0 = {cert.z}"))
    _check(rep, "series_ab", lambda: (
        series_parameters(pt, tr.m_ratio, cert.d, cert.level, cert.cls) == (cert.z, cert.a, cert.b),
        f"a = {cert.a}, b = {cert.b}"))

    def _rational():
        rf = cert.rational_form
        if rf is None:
            ok = cert.irrational and rational_normal_form(cert.z, cert.a, cert.b) is None
            return ok, "no rational form (irrational series)"
        return rational_form_parameters(rf) == (cert.z, cert.a, cert.b), format_identity(rf)

    _check(rep, "rational_form", _rational)

    def _numeric_multiplier():
        bits, dig = NUMERIC_MULTIPLIER_BITS, NUMERIC_MULTIPLIER_DIGITS
        ball = multiplier_numeric(cert.s, pt.alpha0, pt.beta0, bits)
        ok = contains(ball, tr.m0) and ball.rad < Fraction(1, 10**dig)
        return ok, f"F(a0)/F(b0) = {ball.to_decimal()}"

    _check(rep, "numeric_multiplier", _numeric_multiplier)

    def _numeric_series():
        enc_w, enc_n, terms = piengine.weight_sums(cert, digits)
        prec = int(digits * 3.3219280948873626) + 64
        val = cert.a.to_ball(prec) * enc_w + cert.b.to_ball(prec) * enc_n
        target = ComplexBall.pi(prec).inverse()
        ok = val.overlaps(target) and val.rad + target.rad < Fraction(1, 10**digits)
        return ok, f"sum (a + b n) w_n z^n = 1/pi to {digits} digits with {terms} terms"

    _check(rep, "numeric_series", _numeric_series)
    if cert.rational_form is not None:
        def _pi():
            got = piengine.compute_pi(cert, digits)
            return got.text == piengine.reference_pi(digits), f"{digits} digits of pi with {got.terms} terms"

        _check(rep, "pi_digits", _pi)
    return rep
