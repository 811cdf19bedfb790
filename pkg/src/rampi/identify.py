"""Recognize decimals as elements ``sum q_j sqrt(n_j) (+ i * ...)`` of a radical tower.

Real and imaginary parts are recognized separately by an integer relation
search (PSLQ) against the basis {1} + {sqrt(n) : n a square-free product of
the given radicands}.  Every hit is re-evaluated at doubled precision before
it is reported.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable

import mpmath

from .errors import NoMatch
from .exactnum import ZERO, I, TowerElement, squarefree_split


def radical_basis(radicands: Iterable[int]) -> list[int]:
    """Square-free integers spanning Q(sqrt(r) : r in radicands) as a Q-space."""
    gens = sorted({squarefree_split(int(r))[1] for r in radicands if int(r) > 0} - {1})
    basis = {1}
    for k in range(1, len(gens) + 1):
        for combo in itertools.combinations(gens, k):
            prod = 1
            for g in combo:
                prod *= g
            basis.add(squarefree_split(prod)[1])
    return sorted(basis)


def _recognize_real(ctx, x: Fraction, eps: Fraction, basis: list[int], height: int) -> TowerElement | None:
    """Match rational ``x`` (uncertain by ``eps``) against the basis."""
    if x == 0:
        return ZERO
    if basis == [1]:
        q = x.limit_denominator(height)
        return TowerElement.rational(q) if abs(q - x) <= eps else None
    xv = ctx.mpf(x.numerator) / x.denominator
    vec = [xv] + [ctx.sqrt(n) for n in basis]
    tol = max(ctx.mpf(eps.numerator) / eps.denominator * 10, ctx.mpf(10) ** (5 - ctx.dps))
    rel = ctx.pslq(vec, tol=tol, maxcoeff=height, maxsteps=20000)
    if rel is None or rel[0] == 0:
        return None
    c0 = rel[0]
    out = ZERO
    for cj, n in zip(rel[1:], basis):
        if cj:
            q = Fraction(-cj, c0)
            if abs(q.numerator) > height or q.denominator > height:
                return None
            out = out + TowerElement.sqrt_rational(n) * q
    return out


def _context_for(eps: Fraction):
    ctx = mpmath.MPContext()
    digits = max(15, int(-mpmath.log10(eps)) + 1) if eps else 50
    ctx.dps = digits + 10
    return ctx


def recognize(re: Fraction, im: Fraction, eps_re: Fraction, eps_im: Fraction,
              radicands: Iterable[int], height: int) -> TowerElement | None:
    """Best-effort recognition of ``re + i*im``, each part known to within its eps."""
    basis = radical_basis(radicands)
    r = _recognize_real(_context_for(eps_re), re, eps_re, basis, height)
    i = _recognize_real(_context_for(eps_im), im, eps_im, basis, height)
    if r is None or i is None:
        return None
    return r + i * I


def identify(re: str, im: str = "0", radicands: Iterable[int] = (), height: int = 10**6) -> TowerElement:
    """Exact tower element matching decimal ``re + i*im`` to its stated digits.

    Raises NoMatch when nothing of height <= ``height`` fits; never returns an
    unverified guess.
    """
    from .ball import ComplexBall, parse_decimal

    radicands = list(radicands)
    (xr, er), (xi, ei) = parse_decimal(re), parse_decimal(im)
    cand = recognize(xr, xi, er, ei, radicands, height)
    target = ComplexBall.from_decimal(re, im)
    if cand is None:
        raise NoMatch(f"no element of height <= {height} over radicands {radicands} matches")
    check = cand.to_ball(2 * target.prec)
    if not target.overlaps(check):
        raise NoMatch(f"candidate {cand} fails re-verification")
    return cand
