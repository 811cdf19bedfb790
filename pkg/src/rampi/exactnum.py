"""Exact arithmetic in quadratic radical towers Q(i, sqrt(r1), ..., sqrt(rm)).

An element is stored as a map from basis monomials to rational coordinates.
A monomial is a square-free positive integer ``n`` standing for ``sqrt(n)``;
the imaginary unit is folded into the key by sign, so key ``-n`` stands for
``i*sqrt(n)``.  The family {sqrt(n), i*sqrt(n) : n square-free} is linearly
independent over Q, which makes equality a plain comparison of coordinates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Mapping, Union

from sympy import factorint

from .errors import DivisionByZero, NotRepresentable

if TYPE_CHECKING:
    from .ball import ComplexBall

Number = Union[int, Fraction]

_I = "i"


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    # factorint may hand back gmpy integers; keep everything plain int
    return tuple(sorted((int(p), int(e)) for p, e in factorint(n).items()))


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(c, r)`` with ``n == c*c*r`` and ``r`` square-free (n > 0)."""
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    c, r = 1, 1
    for p, e in _factor(n):
        c *= p ** (e // 2)
        if e % 2:
            r *= p
    return c, r


def _primes(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in _factor(n))


def _mul_keys(k1: int, k2: int) -> tuple[int, int]:
    """Product of two basis monomials as ``(rational factor, key)``."""
    n1, n2 = abs(k1), abs(k2)
    g = math.gcd(n1, n2)
    factor = g
    n = (n1 // g) * (n2 // g)
    i1, i2 = k1 < 0, k2 < 0
    if i1 and i2:
        factor = -factor
    return factor, (-n if i1 != i2 else n)


class TowerElement:
    """Immutable exact algebraic number in a quadratic radical tower."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coords: Mapping[int, Number] | None = None):
        c = {}
        if coords:
            for k, v in coords.items():
                if k == 0:
                    raise ValueError("0 is not a basis key")
                v = Fraction(v)
                if v:
                    c[k] = v
        self._c: dict[int, Fraction] = c
        self._hash: int | None = None

    # -- construction ---------------------------------------------------
    @classmethod
    def _raw(cls, coords: dict[int, Fraction]) -> TowerElement:
        obj = cls.__new__(cls)
        obj._c = coords
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q: Number) -> TowerElement:
        q = Fraction(q)
        return cls._raw({1: q} if q else {})

    @classmethod
    def sqrt_rational(cls, q: Number) -> TowerElement:
        """sqrt of a rational, principal branch (i*sqrt(|q|) for q < 0)."""
        q = Fraction(q)
        if q == 0:
            return ZERO
        sign = -1 if q < 0 else 1
        num, den = abs(q.numerator), q.denominator
        # sqrt(num/den) = sqrt(num*den)/den
        c, r = squarefree_split(num * den)
        return cls._raw({sign * r: Fraction(c, den)})

    @classmethod
    def coerce(cls, x) -> TowerElement:
        if isinstance(x, TowerElement):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to TowerElement")

    @classmethod
    def parse(cls, text: str) -> TowerElement:
        from .exprparse import parse_constant

        return parse_constant(text)

    # -- inspection -----------------------------------------------------
    @property
    def coords(self) -> dict[int, Fraction]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def is_rational(self) -> bool:
        return all(k == 1 for k in self._c)

    def is_real(self) -> bool:
        return all(k > 0 for k in self._c)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._c.get(1, Fraction(0))

    def generators(self) -> tuple:
        """Primes (ascending) appearing in any radicand, then ``'i'`` if present."""
        ps: set[int] = set()
        has_i = False
        for k in self._c:
            has_i |= k < 0
            ps.update(_primes(abs(k)))
        out: list = sorted(ps)
        if has_i:
            out.append(_I)
        return tuple(out)

    def real(self) -> TowerElement:
        return TowerElement._raw({k: v for k, v in self._c.items() if k > 0})

    def imag(self) -> TowerElement:
        return TowerElement._raw({-k: v for k, v in self._c.items() if k < 0})

    def conjugate(self) -> TowerElement:
        return self.conjugate_by(_I)

    def conjugate_by(self, gen) -> TowerElement:
        """Galois conjugate flipping the sign of ``sqrt(gen)`` (or of ``i``)."""
        if gen == _I:
            flip = lambda k: k < 0  # noqa: E731
        else:
            flip = lambda k: abs(k) % gen == 0  # noqa: E731
        return TowerElement._raw({k: (-v if flip(k) else v) for k, v in self._c.items()})

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> TowerElement:
        try:
            other = TowerElement.coerce(other)
        except TypeError:
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return TowerElement._raw(c)

    __radd__ = __add__

    def __neg__(self) -> TowerElement:
        return TowerElement._raw({k: -v for k, v in self._c.items()})

    def __pos__(self) -> TowerElement:
        return self

    def __sub__(self, other) -> TowerElement:
        try:
            other = TowerElement.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> TowerElement:
        return TowerElement.coerce(other) - self

    def __mul__(self, other) -> TowerElement:
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return ZERO
            return TowerElement._raw({k: v * other for k, v in self._c.items()})
        if not isinstance(other, TowerElement):
            return NotImplemented
        c: dict[int, Fraction] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                f, k = _mul_keys(k1, k2)
                c[k] = c.get(k, 0) + f * v1 * v2
        return TowerElement._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def inverse(self) -> TowerElement:
        if not self._c:
            raise DivisionByZero("division by zero tower element")
        if self.is_rational():
            return TowerElement.rational(1 / self._c[1])
        # x * sigma(x) is free of the generator sigma flips; recurse on it
        g = self.generators()[-1]
        conj = self.conjugate_by(g)
        return conj * (self * conj).inverse()

    def __truediv__(self, other) -> TowerElement:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> TowerElement:
        return TowerElement.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> TowerElement:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison -----------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TowerElement.rational(other)
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._c)

    # -- text form ------------------------------------------------------
    def to_text(self) -> str:
        """Normalized text: signed terms ``p/q*sqrt(n)*i`` sorted by monomial."""
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, key=lambda k: (k < 0, abs(k))):
            v = self._c[k]
            n = abs(k)
            factors = []
            if n != 1:
                factors.append(f"sqrt({n})")
            if k < 0:
                factors.append(_I)
            mag = abs(v)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            parts.append(("-" if v < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"TowerElement({self.to_text()!r})"

    # -- numerics -------------------------------------------------------
    def to_ball(self, precision_bits: int) -> ComplexBall:
        """Certified enclosure of the exact value."""
        from .ball import ComplexBall

        if precision_bits < 32:
            raise ValueError("precision_bits must be >= 32")
        prec = precision_bits + 16
        acc = ComplexBall.exact(0, prec=precision_bits)
        for k, v in self._c.items():
            n = abs(k)
            term = ComplexBall.sqrt_int(n, prec) if n != 1 else ComplexBall.exact(1, prec=prec)
            term = term * ComplexBall.exact(v, prec=prec)
            if k < 0:
                term = term.mul_i()
            acc = acc + term
        return acc.with_prec(precision_bits)

    def __complex__(self) -> complex:
        re = sum(float(v) * math.sqrt(k) for k, v in self._c.items() if k > 0)
        im = sum(float(v) * math.sqrt(-k) for k, v in self._c.items() if k < 0)
        return complex(re, im)


ZERO = TowerElement._raw({})
ONE = TowerElement._raw({1: Fraction(1)})
I = TowerElement._raw({-1: Fraction(1)})


def sqrt_int(n: int) -> TowerElement:
    return TowerElement.sqrt_rational(n)


def from_terms(terms: Iterable[tuple[Number, int, bool]]) -> TowerElement:
    """Build ``sum q*sqrt(n)*(i if flag)`` from triples, normalizing radicands."""
    acc = ZERO
    for q, n, imag in terms:
        t = TowerElement.sqrt_rational(n) * Fraction(q)
        acc = acc + (t * I if imag else t)
    return acc


# -- square roots ---------------------------------------------------------

_MAX_DEPTH = 12


def _split(x: TowerElement, gen) -> tuple[TowerElement, TowerElement, int]:
    """Write ``x = A + B*sqrt(g)`` with A, B free of ``gen``; returns (A, B, g)."""
    a: dict[int, Fraction] = {}
    b: dict[int, Fraction] = {}
    for k, v in x._c.items():
        if gen == _I:
            if k < 0:
                b[-k] = v
            else:
                a[k] = v
        elif abs(k) % gen == 0:
            b[k // gen] = v
        else:
            a[k] = v
    g = -1 if gen == _I else gen
    return TowerElement._raw(a), TowerElement._raw(b), g


def _gamma(g: int) -> TowerElement:
    return I if g == -1 else TowerElement._raw({g: Fraction(1)})


@lru_cache(maxsize=8192)
def _root(x: TowerElement, depth: int = 0) -> TowerElement | None:
    """Some y with y*y == x, or None if the bounded denesting search fails."""
    if x.is_zero():
        return ZERO
    if x.is_rational():
        return TowerElement.sqrt_rational(x.to_fraction())
    if depth > _MAX_DEPTH:
        return None
    gens = x.generators()
    # i first, then primes from the largest down
    order = ([_I] if _I in gens else []) + sorted((p for p in gens if p != _I), reverse=True)
    for gen in order:
        a, b, g = _split(x, gen)
        norm = a * a - b * b * g
        rn = _root(norm, depth + 1)
        if rn is None:
            continue
        gamma = _gamma(g)
        for sign in (1, -1):
            c2 = (a + rn * sign) * Fraction(1, 2)
            if c2.is_zero():
                d = _root(a / g, depth + 1)
                cands = [] if d is None else [d * gamma]
            else:
                c = _root(c2, depth + 1)
                cands = [] if c is None else [c + (b / (c * 2)) * gamma]
            for y in cands:
                if y * y == x:
                    return y
    return None


def sqrt(x: TowerElement, branch_hint: ComplexBall) -> TowerElement:
    """Exact square root, choosing the root numerically nearest ``branch_hint``."""
    x = TowerElement.coerce(x)
    if x.is_zero():
        raise ValueError("sqrt requires a nonzero argument")
    y = _root(x)
    if y is None:
        raise NotRepresentable(f"sqrt({x}) needs a radical outside the searched towers")
    prec = max(64, branch_hint.prec)
    pos = y.to_ball(prec)
    d_pos = (pos - branch_hint).abs_upper()
    d_neg = (-pos - branch_hint).abs_upper()
    return y if d_pos <= d_neg else -y


def real_sign(x: TowerElement) -> int:
    """Exact sign of a real element, decided by refining its enclosure."""
    x = TowerElement.coerce(x)
    if not x.is_real():
        raise ValueError(f"{x} is not real")
    if x.is_zero():
        return 0
    prec = 64
    while True:
        s = x.to_ball(prec).re_sign()
        if s:
            return s
        prec *= 2


def principal_sqrt(x: TowerElement) -> TowerElement:
    """sqrt with the principal branch (Re > 0, or Im > 0 on the imaginary axis)."""
    x = TowerElement.coerce(x)
    if x.is_zero():
        return ZERO
    y = _root(x)
    if y is None:
        raise NotRepresentable(f"sqrt({x}) needs a radical outside the searched towers")
    re = real_sign(y.real())
    if re < 0 or (re == 0 and real_sign(y.imag()) < 0):
        return -y
    return y
