"""Exception types shared across the library."""


class CutofflabError(Exception):
    """Base class for all library errors."""


class DimensionError(CutofflabError, ValueError):
    """Dimension incompatible with the requested family (e.g. odd-dimensional CP^n)."""


class DomainError(CutofflabError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UnsupportedFamilyError(CutofflabError, ValueError):
    """Operation not defined for this family (e.g. closed-form mean on RP^n)."""


class GridMismatchError(CutofflabError, ValueError):
    """GridFunction sampled on a grid that does not match the operator's domain."""


class AccuracyError(CutofflabError, ArithmeticError):
    """Two grid refinements disagree by more than the requested tolerance."""


class ConvergenceError(CutofflabError, ArithmeticError):
    """A series did not reach its truncation criterion (argument too extreme)."""


class ThresholdError(CutofflabError, ValueError):
    """Spectral moment order below its validity threshold."""


class ConfigError(CutofflabError, ValueError):
    """Monte Carlo configuration violates an invariant."""
