"""Exception hierarchy shared across the package."""


class RampiError(Exception):
    """Base class; ``name`` is what the CLI prints on failure."""

    @property
    def name(self) -> str:
        return type(self).__name__


# exactnum
class DivisionByZero(RampiError, ZeroDivisionError):
    pass


class NotRepresentable(RampiError):
    pass


# ball
class BranchCutStraddle(RampiError):
    pass


class DivisorContainsZero(RampiError, ZeroDivisionError):
    pass


class NonConvergence(RampiError):
    pass


# modeq
class DSLSyntaxError(RampiError):
    def __init__(self, message: str, pos: int | None = None, source: str | None = None):
        self.pos = pos
        self.source = source
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class AsymmetricPolynomial(RampiError):
    pass


class LevelDegreeMismatch(RampiError):
    pass


class NotRootOfUnity(RampiError):
    pass


# hyper
class UnsupportedRegion(RampiError):
    pass


class BranchAmbiguous(RampiError):
    pass


# derive
class NoSingularPoint(RampiError):
    pass


class IdentificationFailed(RampiError):
    pass


class SingularJacobian(RampiError):
    pass


class DegeneratePoint(RampiError):
    pass


class UnrecognizedMultiplier(RampiError):
    pass


class NonRationalSeries(RampiError):
    pass


# piengine / identify
class UncertifiedDigits(RampiError):
    pass


class NoMatch(RampiError):
    pass


# cli
class MalformedCertificate(RampiError):
    pass
