"""Modular equations ``u^k = ab, v^k = (1-a)(1-b), P(u, v) = 0``.

Equations live in small text files::

    # comment
    name = "berndt-3-5"
    level = 3
    s = 3
    degree = 5
    k = 6
    poly = "u^2 + v^2 + 3*u*v - 1"

``s`` is optional and cross-checked against ``level`` when present.
"""

from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    AsymmetricPolynomial,
    DSLSyntaxError,
    LevelDegreeMismatch,
    NotRootOfUnity,
    RampiError,
)
from .exactnum import ONE, ZERO, TowerElement
from .exprparse import Poly, parse_poly

LEVEL_OF_S = {6: 1, 4: 2, 3: 3, 2: 4}
S_OF_LEVEL = {v: k for k, v in LEVEL_OF_S.items()}

REGISTRY_ENV = "RAMPI_REGISTRY"
DEFAULT_REGISTRY = Path(__file__).parent / "registry"
SUFFIX = ".meq"


class PolyUV:
    """Bivariate polynomial with exact coefficients, keyed by ``(deg_u, deg_v)``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], TowerElement] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def from_poly(cls, p: Poly) -> PolyUV:
        return cls({(m[0], m[1]): c for m, c in p.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyUV) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"PolyUV({render_poly(self)!r})"

    def swapped(self) -> PolyUV:
        return PolyUV({(b, a): c for (a, b), c in self.terms.items()})

    def is_symmetric(self) -> bool:
        return self == self.swapped()

    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=0)

    def orbits(self) -> list[tuple[int, int]]:
        """Representatives of the monomial orbits under u <-> v."""
        return sorted({(max(a, b), min(a, b)) for a, b in self.terms}, key=lambda m: (-sum(m), -m[0]))

    def diff_u(self) -> PolyUV:
        return PolyUV({(a - 1, b): c * a for (a, b), c in self.terms.items() if a})

    def diff_v(self) -> PolyUV:
        return PolyUV({(a, b - 1): c * b for (a, b), c in self.terms.items() if b})

    def __call__(self, u, v) -> TowerElement:
        return eval_P(self, u, v)


@dataclass(frozen=True)
class ModularEquation:
    name: str
    level: int
    s: int
    degree: int
    k: int
    P: PolyUV = field(compare=False)
    source: str = field(default="", compare=False, repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModularEquation):
            return NotImplemented
        return (self.name, self.level, self.s, self.degree, self.k) == (
            other.name,
            other.level,
            other.s,
            other.degree,
            other.k,
        ) and self.P == other.P

    __hash__ = None  # type: ignore[assignment]

    def source_hash(self) -> str:
        return hashlib.sha256((self.source or render_equation(self)).encode()).hexdigest()


# -- evaluation -------------------------------------------------------------


def _powers(x: TowerElement, n: int) -> list[TowerElement]:
    out = [ONE]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def _num(x):
    from .radext import ExtElement

    return x if isinstance(x, ExtElement) else TowerElement.coerce(x)


def eval_P(P: PolyUV, u, v) -> TowerElement:
    """Exact value of P at (u, v); u, v may also lie in a radical extension."""
    u, v = _num(u), _num(v)
    du = max((a for a, _ in P.terms), default=0)
    dv = max((b for _, b in P.terms), default=0)
    pu, pv = _powers(u, du), _powers(v, dv)
    acc = ZERO
    for (a, b), c in P.terms.items():
        acc = pu[a] * pv[b] * c + acc
    return acc


def substitute_scaled(P: PolyUV, zeta: TowerElement, k: int) -> dict[int, TowerElement]:
    """Coefficients of P(u, zeta*u) by power of u; requires zeta**k == 1."""
    zeta = TowerElement.coerce(zeta)
    if zeta**k != ONE:
        raise NotRootOfUnity(f"{zeta} is not a {k}-th root of unity")
    dv = max((b for _, b in P.terms), default=0)
    zp = _powers(zeta, dv)
    out: dict[int, TowerElement] = {}
    for (a, b), c in P.terms.items():
        out[a + b] = out.get(a + b, ZERO) + c * zp[b]
    return {n: c for n, c in out.items() if not c.is_zero()}


def eval_univariate(coeffs: dict[int, TowerElement], u) -> TowerElement:
    u = _num(u)
    pu = _powers(u, max(coeffs, default=0))
    acc = ZERO
    for n, c in coeffs.items():
        acc = pu[n] * c + acc
    return acc


# -- rendering --------------------------------------------------------------


def _monomial(a: int, b: int) -> str:
    parts = []
    for var, e in (("u", a), ("v", b)):
        if e == 1:
            parts.append(var)
        elif e > 1:
            parts.append(f"{var}^{e}")
    return "*".join(parts)


def render_poly(P: PolyUV) -> str:
    """Canonical text for P: terms by descending total degree, then deg_u."""
    if not P.terms:
        return "0"
    out = []
    for a, b in sorted(P.terms, key=lambda m: (-(m[0] + m[1]), -m[0])):
        c = P.terms[(a, b)]
        mono = _monomial(a, b)
        ctext = c.to_text()
        neg = False
        if len(c.coords) == 1:
            neg = ctext.startswith("-")
            ctext = ctext.lstrip("-")
            if mono and ctext == "1":
                body = mono
            else:
                body = ctext + ("*" + mono if mono else "")
        else:
            body = f"({ctext})" + ("*" + mono if mono else "")
        out.append(("-" if neg else "+", body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def render_equation(eq: ModularEquation) -> str:
    return (
        f'name = "{eq.name}"\n'
        f"level = {eq.level}\n"
        f"s = {eq.s}\n"
        f"degree = {eq.degree}\n"
        f"k = {eq.k}\n"
        f'poly = "{render_poly(eq.P)}"\n'
    )


# -- parsing ----------------------------------------------------------------

_LINE = re.compile(r'\s*([A-Za-z_]+)\s*=\s*(?:"([^"]*)"|(-?\d+))\s*$')
_KEYS = {"name": str, "level": int, "s": int, "degree": int, "k": int, "poly": str}
_REQUIRED = ("name", "level", "degree", "k", "poly")


def parse_equation(source_text: str) -> ModularEquation:
    """Parse and validate one equation file."""
    fields: dict[str, object] = {}
    poly_offset = 0
    offset = 0
    for line in source_text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            m = _LINE.match(body.rstrip("\r\n"))
            if not m:
                raise DSLSyntaxError("malformed header line", offset, source_text)
            key = m.group(1)
            if key not in _KEYS:
                raise DSLSyntaxError(f"unknown key {key!r}", offset, source_text)
            if key in fields:
                raise DSLSyntaxError(f"duplicate key {key!r}", offset, source_text)
            raw = m.group(2) if m.group(2) is not None else m.group(3)
            if _KEYS[key] is int:
                if m.group(3) is None:
                    raise DSLSyntaxError(f"{key} must be an integer", offset, source_text)
                fields[key] = int(raw)
            else:
                if m.group(2) is None:
                    raise DSLSyntaxError(f"{key} must be a quoted string", offset, source_text)
                fields[key] = raw
                if key == "poly":
                    poly_offset = offset + m.start(2)
        offset += len(line)
    for key in _REQUIRED:
        if key not in fields:
            raise DSLSyntaxError(f"missing key {key!r}", len(source_text), source_text)

    level, degree, k = fields["level"], fields["degree"], fields["k"]
    if level not in S_OF_LEVEL:
        raise LevelDegreeMismatch(f"level {level} not in {{1, 2, 3, 4}}")
    s = fields.get("s", S_OF_LEVEL[level])
    if LEVEL_OF_S.get(s) != level:
        raise LevelDegreeMismatch(f"s = {s} does not give level {level} (level = 4 sin^2(pi/s))")
    if degree < 2:
        raise LevelDegreeMismatch(f"degree must be >= 2, got {degree}")
    if k < 1:
        raise LevelDegreeMismatch(f"k must be positive, got {k}")

    try:
        poly = parse_poly(fields["poly"], ("u", "v"))
    except DSLSyntaxError as exc:
        pos = None if exc.pos is None else poly_offset + exc.pos
        raise DSLSyntaxError(str(exc).rsplit(" at position", 1)[0], pos, source_text) from None
    P = PolyUV.from_poly(poly)
    if not P.is_symmetric():
        raise AsymmetricPolynomial(f"{fields['name']}: P(u, v) != P(v, u)")
    return ModularEquation(
        name=fields["name"], level=level, s=s, degree=degree, k=k, P=P, source=source_text
    )


@dataclass
class RegistryError:
    path: Path
    error: RampiError

    def describe(self) -> str:
        pos = getattr(self.error, "pos", None)
        where = f" (position {pos})" if pos is not None else ""
        return f"{self.path.name}: {self.error.name}: {self.error}{where}"


def registry_path(path: str | os.PathLike | None = None) -> Path:
    if path is not None:
        return Path(path)
    env = os.environ.get(REGISTRY_ENV)
    return Path(env) if env else DEFAULT_REGISTRY


def registry_scan(path=None) -> tuple[list[ModularEquation], list[RegistryError]]:
    """Parse every ``*.meq`` file, collecting failures instead of raising."""
    root = registry_path(path)
    eqs, errors = [], []
    for f in sorted(root.glob(f"*{SUFFIX}")):
        try:
            eqs.append(parse_equation(f.read_text(encoding="utf-8")))
        except RampiError as exc:
            errors.append(RegistryError(f, exc))
    eqs.sort(key=lambda e: e.name)
    return eqs, errors


def registry_load(path=None) -> list[ModularEquation]:
    """Load all equations; the first parse failure is re-raised with its file."""
    eqs, errors = registry_scan(path)
    if errors:
        err = errors[0]
        raise type(err.error)(f"{err.path}: {err.error}") from err.error
    return eqs


def find_equation(name: str, path=None) -> ModularEquation:
    for eq in registry_load(path):
        if eq.name == name:
            return eq
    raise KeyError(name)
