"""Exact derivation and certified verification of Ramanujan-type series for 1/pi.

The pipeline starts from a modular equation ``u^k = ab, v^k = (1-a)(1-b),
P(u, v) = 0``, finds a singular point, differentiates exactly in a tower of
quadratic radicals and emits a series certificate; the certificate can be
re-checked symbolically and numerically, and used to compute digits of pi.
"""

from .ball import ComplexBall
from .derive import SeriesCertificate, derive, verify_certificate
from .exactnum import TowerElement
from .modeq import ModularEquation, find_equation, parse_equation, registry_load

__version__ = "0.1.0"

__all__ = [
    "ComplexBall",
    "ModularEquation",
    "SeriesCertificate",
    "TowerElement",
    "derive",
    "find_equation",
    "parse_equation",
    "registry_load",
    "verify_certificate",
    "__version__",
]
