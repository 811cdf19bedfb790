"""Simple radical extensions K(t), t^e = w, over the quadratic tower K.

Some singular points sit at a 2^m-th root that is not itself a tower element
(e.g. u0^4 = -1/18).  Everything the derivation reports in the end (u0^k,
m0^2, m'/a', z, a, b) falls back into K, so it is enough to compute in K(t)
with t an abstract root and reduce at the end.

The extension is only built after a square root of ``w`` has failed; since K
contains i, Capelli's criterion then makes x^e - w irreducible for e a power
of two, so coefficient vectors are unique and the norm of a nonzero element
is nonzero.
"""

from __future__ import annotations

from fractions import Fraction

from . import ball as B
from .errors import DivisionByZero, NotRepresentable
from .exactnum import ONE, ZERO, TowerElement


def _root_of_unity(e: int) -> TowerElement:
    from .derive import roots_of_unity

    return roots_of_unity(e)[1] if e > 1 else ONE


class RadicalExtension:
    """K(t) with t^e = w; ``branch`` j embeds t as zeta_e^j * principal w^(1/e)."""

    __slots__ = ("w", "e", "branch")

    def __init__(self, w: TowerElement, e: int, branch: int = 0):
        if e < 2 or e & (e - 1):
            raise NotRepresentable(f"extension degree {e} is not a power of two >= 2")
        if 24 % e:
            raise NotRepresentable(f"{e}-th roots of unity are outside the tower")
        self.w = TowerElement.coerce(w)
        self.e = e
        self.branch = branch % e

    def _key(self):
        return (self.w, self.e, self.branch)

    def __eq__(self, other) -> bool:
        return isinstance(other, RadicalExtension) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"RadicalExtension(t^{self.e} = {self.w}, branch {self.branch})"

    @property
    def gen(self) -> ExtElement:
        c = [ZERO] * self.e
        c[1] = ONE
        return ExtElement(self, c)

    def t_ball(self, precision_bits: int):
        """Certified enclosure of the embedded generator."""
        wp = precision_bits + 16
        x = self.w.to_ball(wp)
        e = self.e
        while e > 1:
            x = B.sqrt(x, "+")
            e //= 2
        z = _root_of_unity(self.e) ** self.branch
        return (x * z.to_ball(wp)).with_prec(precision_bits)


def _reduce(c: list[TowerElement]):
    """Collapse to a TowerElement when t does not occur."""
    if all(x.is_zero() for x in c[1:]):
        return c[0]
    return None


class ExtElement:
    """sum c_j t^j, j < e, with tower coefficients."""

    __slots__ = ("field", "c")

    def __init__(self, field: RadicalExtension, coeffs):
        c = [TowerElement.coerce(x) for x in coeffs]
        if len(c) != field.e:
            raise ValueError("coefficient count must equal the extension degree")
        self.field = field
        self.c = c

    @staticmethod
    def make(field: RadicalExtension, coeffs):
        down = _reduce(coeffs)
        return down if down is not None else ExtElement(field, coeffs)

    def _lift(self, other) -> list[TowerElement] | None:
        if isinstance(other, ExtElement):
            if other.field != self.field:
                raise ValueError("elements of different extensions")
            return other.c
        try:
            x = TowerElement.coerce(other)
        except TypeError:
            return None
        return [x] + [ZERO] * (self.field.e - 1)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExtElement.make(self.field, [a + b for a, b in zip(self.c, o)])

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.field, [-a for a in self.c])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExtElement.make(self.field, [a - b for a, b in zip(self.c, o)])

    def __rsub__(self, other):
        return (-self) + other

    def _mul_coeffs(self, a, b) -> list[TowerElement]:
        e, w = self.field.e, self.field.w
        out = [ZERO] * e
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                if y.is_zero():
                    continue
                p = x * y
                if i + j >= e:
                    out[i + j - e] = out[i + j - e] + p * w
                else:
                    out[i + j] = out[i + j] + p
        return out

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExtElement.make(self.field, self._mul_coeffs(self.c, o))

    __rmul__ = __mul__

    def sigma(self, j: int) -> ExtElement:
        """The K-automorphism t -> zeta_e^j t."""
        z = _root_of_unity(self.field.e) ** j
        zk = ONE
        out = []
        for x in self.c:
            out.append(x * zk)
            zk = zk * z
        return ExtElement(self.field, out)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        others = ExtElement(self.field, [ONE] + [ZERO] * (self.field.e - 1))
        for j in range(1, self.field.e):
            others = ExtElement(self.field, self._mul_coeffs(others.c, self.sigma(j).c))
        norm = _reduce(self._mul_coeffs(self.c, others.c))
        if norm is None or norm.is_zero():
            raise DivisionByZero(f"norm of {self} does not reduce to a nonzero tower element")
        inv = norm.inverse()
        return ExtElement.make(self.field, [x * inv for x in others.c])

    def __truediv__(self, other):
        if isinstance(other, ExtElement):
            return self * other.inverse()
        try:
            o = TowerElement.coerce(other)
        except TypeError:
            return NotImplemented
        inv = o.inverse()
        return ExtElement.make(self.field, [x * inv for x in self.c])

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = base * out
            base = base * base
            n >>= 1
        return out

    # -- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, ExtElement):
            return self.field == other.field and self.c == other.c
        try:
            o = TowerElement.coerce(other)
        except TypeError:
            return NotImplemented
        return False if _reduce(self.c) is None else self.c[0] == o

    def __hash__(self) -> int:
        return hash((self.field, tuple(self.c)))

    def to_text(self) -> str:
        parts = []
        for j, x in enumerate(self.c):
            if x.is_zero():
                continue
            mono = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
            parts.append(f"({x.to_text()})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"ExtElement({self.to_text()!r}; t^{self.field.e} = {self.field.w})"

    def to_ball(self, precision_bits: int):
        wp = precision_bits + 16
        t = self.field.t_ball(wp)
        acc = self.c[0].to_ball(wp)
        tp = t
        for x in self.c[1:]:
            if not x.is_zero():
                acc = acc + x.to_ball(wp) * tp
            tp = tp * t
        return acc.with_prec(precision_bits)

    def __complex__(self) -> complex:
        b = self.to_ball(64)
        return complex(float(b.re), float(b.im))

    def conjugate(self):
        raise NotRepresentable("complex conjugation does not act on an abstract radical")


def parse_ext(text: str, field: RadicalExtension):
    """Inverse of ExtElement.to_text (also accepts plain tower text)."""
    from .exprparse import parse_poly

    p = parse_poly(text, ("t",))
    c = [ZERO] * field.e
    w_pow = [ONE]
    for (deg,), coef in p.terms.items():
        q, r = divmod(deg, field.e)
        while len(w_pow) <= q:
            w_pow.append(w_pow[-1] * field.w)
        c[r] = c[r] + coef * w_pow[q]
    return ExtElement.make(field, c)


def as_tower(x) -> TowerElement | None:
    """``x`` as a TowerElement, or None if it genuinely involves t."""
    if isinstance(x, TowerElement):
        return x
    if isinstance(x, (int, Fraction)):
        return TowerElement.rational(x)
    return _reduce(x.c)
