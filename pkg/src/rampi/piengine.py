"""Binary-splitting evaluation of rational Ramanujan-type series and pi digits.

For a certificate with rational form sum w_n (A n + B) z^n = C sqrt(r)/pi,
w_n = (1/2)_n (1/s)_n (1-1/s)_n / n!^3, the term ratio is

    t_n / t_{n-1} = z (2n-1)(s n - s + 1)(s n - 1) / (2 s^2 n^3),

so with z = sign*num/M the leaves are p(n) = sign*num*(2n-1)(sn-s+1)(sn-1),
q(n) = 2 s^2 M n^3 (p(0) = q(0) = 1) and the sum over [0, N) is T/Q.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NonConvergence, UncertifiedDigits

GUARD_TERMS = 10
GUARD_DIGITS = 10
# beyond this a series is too slow to be worth summing (|z| close to 1)
MAX_TERMS = 200_000


@dataclass(frozen=True)
class SummationState:
    """Binary-splitting triple for a block [n1, n2)."""

    P: int
    Q: int
    T: int

    def combine(self, other: SummationState) -> SummationState:
        return SummationState(self.P * other.P, self.Q * other.Q, self.T * other.Q + self.P * other.T)


@dataclass(frozen=True)
class SeriesSpec:
    """What the engine needs from a certificate: s, z = sign*num/M, A, B."""

    s: int
    sign: int
    num: int
    M: int
    A: int
    B: int

    @property
    def z(self) -> Fraction:
        return Fraction(self.sign * self.num, self.M)


def spec_of(cert, A: int | None = None, B: int | None = None) -> SeriesSpec:
    """SeriesSpec of a certificate; A, B override the weight (e.g. (0, 1))."""
    rf = cert.rational_form
    if rf is None:
        if not cert.z.is_rational():
            raise ValueError(f"{cert.label}: z is not rational")
        zq = cert.z.to_fraction()
        sign, num, M = (-1 if zq < 0 else 1), abs(zq.numerator), zq.denominator
        A = 0 if A is None else A
        B = 1 if B is None else B
        return SeriesSpec(cert.s, sign, num, M, A, B)
    return SeriesSpec(cert.s, rf.sign, rf.num, rf.M, rf.A if A is None else A, rf.B if B is None else B)


def term_ratio(cert, n: int) -> Fraction:
    """t_{n+1}/t_n of the unweighted term, exactly."""
    sp = cert if isinstance(cert, SeriesSpec) else spec_of(cert)
    s = sp.s
    return sp.z * Fraction((2 * n + 1) * (s * n + 1) * (s * n + s - 1), 2 * s * s * (n + 1) ** 3)


def _leaf(sp: SeriesSpec, n: int) -> SummationState:
    if n == 0:
        return SummationState(1, 1, sp.B)
    s = sp.s
    p = sp.sign * sp.num * (2 * n - 1) * (s * n - s + 1) * (s * n - 1)
    q = 2 * s * s * sp.M * n**3
    return SummationState(p, q, p * (sp.A * n + sp.B))


def _split(sp: SeriesSpec, n1: int, n2: int) -> SummationState:
    if n2 - n1 == 1:
        return _leaf(sp, n1)
    if n2 - n1 <= 4:
        acc = _leaf(sp, n1)
        for n in range(n1 + 1, n2):
            acc = acc.combine(_leaf(sp, n))
        return acc
    mid = (n1 + n2) // 2
    return _split(sp, n1, mid).combine(_split(sp, mid, n2))


def binsplit(cert, n1: int, n2: int) -> SummationState:
    """Triple with sum_{n1 <= n < n2} (A n + B) t_n / t_{n1-1} = T/Q (t_{-1} := 1)."""
    if not 0 <= n1 < n2:
        raise ValueError("need 0 <= n1 < n2")
    sp = cert if isinstance(cert, SeriesSpec) else spec_of(cert)
    return _split(sp, n1, n2)


def partial_sum(cert, N: int) -> Fraction:
    st = binsplit(cert, 0, N)
    return Fraction(st.T, st.Q)


def naive_sum(cert, N: int) -> Fraction:
    """Left fold over exact rational terms (test oracle for binsplit)."""
    sp = cert if isinstance(cert, SeriesSpec) else spec_of(cert)
    total, t = Fraction(0), Fraction(1)
    for n in range(N):
        if n:
            t *= term_ratio(sp, n - 1)
        total += (sp.A * n + sp.B) * t
    return total


def tail_bound(sp: SeriesSpec, N: int, last_term: Fraction) -> Fraction:
    """Bound on |sum_{n >= N} (A n + B) t_n| given |t_{N-1}| = ``last_term``.

    Term ratios are below |z| in modulus, so the tail is dominated by a
    geometric series with an arithmetic weight.
    """
    r = abs(sp.z)
    if r >= 1:
        raise ValueError("series does not converge geometrically")
    tN = abs(last_term) * r
    a, b = abs(sp.A), abs(sp.B)
    return tN * ((a * N + b) / (1 - r) + a * r / (1 - r) ** 2)


def digits_per_term(cert) -> float:
    sp = cert if isinstance(cert, SeriesSpec) else spec_of(cert)
    return -math.log10(abs(sp.z))


def terms_for(cert, D: int) -> int:
    N = math.ceil(D / digits_per_term(cert)) + GUARD_TERMS
    if N > MAX_TERMS:
        raise NonConvergence(f"{D} digits would need {N} terms (limit {MAX_TERMS})")
    return N


@dataclass(frozen=True)
class SeriesEnclosure:
    """Exact partial sum with a rigorous bound on the omitted tail."""

    value: Fraction
    error: Fraction
    terms: int


def enclose_sum(sp: SeriesSpec, N: int) -> SeriesEnclosure:
    st = binsplit(sp, 0, N)
    last = Fraction(abs(st.P), abs(st.Q))  # |t_{N-1}|
    return SeriesEnclosure(Fraction(st.T, st.Q), tail_bound(sp, N, last), N)


def weight_sums(cert, digits: int):
    """Balls for sum w_n z^n and sum n w_n z^n, good to ``digits`` decimals.

    Rational z goes through binary splitting; otherwise terms are summed in
    ball arithmetic.  Returns (S_w, S_n, terms used).
    """
    from .ball import ComplexBall

    prec = int(digits * 3.3219280948873626) + 64
    if cert.z.is_rational():
        zq = cert.z.to_fraction()
        if abs(zq) >= 1:
            raise ValueError(f"|z| = {abs(zq)} >= 1: series diverges")
        base = SeriesSpec(cert.s, -1 if zq < 0 else 1, abs(zq.numerator), zq.denominator, 0, 1)
        N = terms_for(base, digits)
        out = []
        for A, B in ((0, 1), (1, 0)):
            enc = enclose_sum(SeriesSpec(base.s, base.sign, base.num, base.M, A, B), N)
            out.append(ComplexBall.exact(enc.value, prec=prec).inflate(enc.error))
        return out[0], out[1], N
    z = cert.z.to_ball(prec)
    r = z.abs_upper()
    if r >= 1:
        raise ValueError("|z| >= 1: series diverges")
    N = math.ceil(digits / -math.log10(float(r))) + GUARD_TERMS
    if N > MAX_TERMS:
        raise NonConvergence(f"{digits} digits would need {N} terms (limit {MAX_TERMS})")
    s = cert.s
    t = ComplexBall.exact(1, prec=prec)
    sw = ComplexBall.exact(0, prec=prec)
    sn = ComplexBall.exact(0, prec=prec)
    for n in range(N):
        if n:
            q = Fraction((2 * n - 1) * (s * n - s + 1) * (s * n - 1), 2 * s * s * n**3)
            t = t * z * ComplexBall.exact(q, prec=prec)
        sw = sw + t
        sn = sn + t * ComplexBall.exact(n, prec=prec)
    tN = (t * z).abs_upper()
    sw = sw.inflate(tN / (1 - r))
    sn = sn.inflate(tN * (N / (1 - r) + r / (1 - r) ** 2))
    return sw, sn, N


@dataclass(frozen=True)
class PiResult:
    text: str
    digits: int
    terms: int
    seconds: float


def _floor_div(a: int, b: int) -> int:
    return a // b if b > 0 else (-a) // (-b)


def _pi_bracket(cert, D: int, N: int) -> tuple[int, int]:
    """floor(10^D * pi) computed from the lower and upper enclosure of pi."""
    rf = cert.rational_form
    sp = spec_of(cert)
    enc = enclose_sum(sp, N)
    W = D + GUARD_DIGITS
    r = rf.radicand
    s_lo = math.isqrt(r * 10 ** (2 * W))
    s_hi = s_lo if s_lo * s_lo == r * 10 ** (2 * W) else s_lo + 1
    S_lo, S_hi = enc.value - enc.error, enc.value + enc.error
    if S_lo <= 0:
        raise UncertifiedDigits("series enclosure does not exclude zero")
    C = rf.C
    # pi = C sqrt(r) / S
    lo = Fraction(C.numerator * s_lo, C.denominator * 10**W) / S_hi
    hi = Fraction(C.numerator * s_hi, C.denominator * 10**W) / S_lo
    scale = 10**D
    return (
        _floor_div(lo.numerator * scale, lo.denominator),
        _floor_div(hi.numerator * scale, hi.denominator),
    )


def int_digits(n: int, width: int = 0) -> str:
    """Decimal digits of n >= 0, zero-padded to ``width``.

    Splits by powers of ten so huge values stay under the interpreter's
    int/str conversion limit.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n < 10**1000:
        return str(n).rjust(width, "0")
    k = max(1000, (len(bin(n)) * 30103 // 100000) // 2)
    hi, lo = divmod(n, 10**k)
    return int_digits(hi, max(0, width - k)) + int_digits(lo, k)


def format_digits(x: int, D: int) -> str:
    """'3.' followed by D digits; wrap to 80 columns, trailing newline."""
    s = int_digits(x, D + 1)
    text = s[:-D] + "." + s[-D:] if D else s
    lines = [text[i : i + 80] for i in range(0, len(text), 80)]
    return "\n".join(lines) + "\n"


def compute_pi(cert, D: int) -> PiResult:
    """pi to D certified decimals from a rational certificate."""
    if D < 1:
        raise ValueError("D must be >= 1")
    if cert.rational_form is None:
        raise ValueError(f"{cert.label}: no rational form, cannot compute pi")
    t0 = time.perf_counter()
    N = terms_for(cert, D)
    for attempt in range(2):
        lo, hi = _pi_bracket(cert, D, N)
        if lo == hi:
            s = int_digits(lo)
            return PiResult(s[0] + "." + s[1:], D, N, time.perf_counter() - t0)
        N = math.ceil(N * 1.1)
    raise UncertifiedDigits(f"could not certify {D} digits with {N} terms")


def pi_digits(cert, D: int) -> str:
    """'3.14159...' with D certified decimals (truncated, not rounded)."""
    return compute_pi(cert, D).text


# -- reference pi -----------------------------------------------------------


def _arctan_inv(x: int, scale: int) -> int:
    """floor-ish of scale * arctan(1/x), error below the number of terms."""
    total = term = scale // x
    x2 = x * x
    n, sign = 1, 1
    while term:
        term //= x2
        n += 2
        sign = -sign
        total += sign * (term // n)
    return total


@lru_cache(maxsize=8)
def reference_pi(D: int) -> str:
    """pi to D decimals by Machin's formula, as '3.1415...' (truncated)."""
    guard = 20
    scale = 10 ** (D + guard)
    val = 16 * _arctan_inv(5, scale) - 4 * _arctan_inv(239, scale)
    s = int_digits(val // 10**guard)
    return s[0] + "." + s[1:]


# -- convergence report -----------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    label: str
    level: int
    abs_z: Fraction
    digits_per_term: float
    terms_1000: int
    measured_digits_per_term: float
    seconds: float

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "level": self.level,
            "abs_z": str(self.abs_z),
            "digits_per_term": round(self.digits_per_term, 6),
            "terms_for_1000_digits": self.terms_1000,
            "measured_digits_per_term": round(self.measured_digits_per_term, 6),
            "seconds": round(self.seconds, 4),
        }


@dataclass
class ConvergenceReport:
    rows: list[ConvergenceRow]

    def level_ranking(self, level: int = 3) -> list[ConvergenceRow]:
        rows = [r for r in self.rows if r.level == level]
        return sorted(rows, key=lambda r: -r.digits_per_term)

    def fastest(self, level: int = 3) -> ConvergenceRow | None:
        ranked = self.level_ranking(level)
        return ranked[0] if ranked else None

    def render(self) -> str:
        head = ("series", "level", "|z|", "digits/term", "terms(1000)", "measured", "seconds")
        body = [
            (r.label, str(r.level), str(r.abs_z), f"{r.digits_per_term:.5f}", str(r.terms_1000),
             f"{r.measured_digits_per_term:.5f}", f"{r.seconds:.3f}")
            for r in self.rows
        ]
        widths = [max(len(x) for x in col) for col in zip(head, *body)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in [head, *body]]
        best = self.fastest(3)
        if best is not None and len(self.level_ranking(3)) > 1:
            lines.append(f"fastest level-3 series: {best.label} ({best.digits_per_term:.5f} digits/term)")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        best = self.fastest(3)
        return {
            "rows": [r.as_dict() for r in self.rows],
            "fastest_level3": best.label if best is not None and len(self.level_ranking(3)) > 1 else None,
        }

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        rows = [r.as_dict() for r in self.rows]
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        return buf.getvalue()


def _measured_rate(sp: SeriesSpec, n: int = 400) -> float:
    """-log10 |t_{n+1}/t_n| at large n (tends to -log10|z|)."""
    return -math.log10(abs(float(term_ratio(sp, n))))


def convergence_report(certs) -> ConvergenceReport:
    rows = []
    for c in certs:
        if c.rational_form is None:
            continue
        sp = spec_of(c)
        t0 = time.perf_counter()
        compute_pi(c, 1000)
        dt = time.perf_counter() - t0
        rows.append(ConvergenceRow(
            label=c.label, level=c.level, abs_z=abs(sp.z), digits_per_term=digits_per_term(sp),
            terms_1000=terms_for(sp, 1000), measured_digits_per_term=_measured_rate(sp), seconds=dt,
        ))
    rows.sort(key=lambda r: (r.level, -r.digits_per_term, r.label))
    return ConvergenceReport(rows)
