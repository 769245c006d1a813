"""Exception hierarchy shared by all modmoon modules."""


class MoonshineError(Exception):
    """Base class for every error raised by this package."""


class DataError(MoonshineError):
    """Bad or missing input data; the CLI maps these to exit code 3."""


# exactlinalg
class ContainmentError(MoonshineError, ValueError):
    pass


class InfiniteQuotientError(MoonshineError, ValueError):
    pass


class NoIntegerSolution(MoonshineError, ValueError):
    pass


# cyclotomic
class ModulusMismatch(MoonshineError, ValueError):
    pass


class DivisionByZero(MoonshineError, ZeroDivisionError):
    pass


class NotRational(MoonshineError, ValueError):
    pass


class DomainError(MoonshineError, ValueError):
    pass


# tate
class OrderError(MoonshineError, ValueError):
    pass


class NotPreserved(MoonshineError, ValueError):
    pass


# brauer
class NotAFactor(MoonshineError, ValueError):
    pass


# qseries
class Mod24Error(MoonshineError, ValueError):
    pass


class MissingSigma(MoonshineError, ValueError):
    pass


class PrecisionError(MoonshineError, ValueError):
    """A coefficient was requested beyond the known truncation order."""


class ParseError(DataError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class UnknownClass(DataError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class NormalizationError(DataError):
    pass


# leech
class ConstructionError(MoonshineError):
    pass


class AxiomError(MoonshineError):
    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        super().__init__(f"lattice fails the '{axiom}' axiom" + (f": {detail}" if detail else ""))


class NotFound(MoonshineError):
    pass


class NotAnAutomorphism(MoonshineError, ValueError):
    pass
