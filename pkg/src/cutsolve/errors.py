"""Exception hierarchy shared across the package."""


class CutsolveError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(CutsolveError, ValueError):
    """Operands live in different ambient dimensions."""


class DegenerateSet(CutsolveError, ValueError):
    """Set parameters describe an empty or ill-posed set (rejected at construction)."""


class GammaOutOfRange(CutsolveError, ValueError):
    """Relaxation parameter outside its admissible interval."""


class InvalidParams(CutsolveError, ValueError):
    """Operator parameters violate the active mode's ranges."""


class EtaNonpositive(CutsolveError, ValueError):
    """Damping parameter must be strictly positive."""


class ZeroSubgradient(CutsolveError, ArithmeticError):
    """f(x) > 0 with a zero subgradient: the level set is empty and the cutter undefined."""


class ParamFloorViolated(CutsolveError, ValueError):
    """A relaxation-parameter sequence drifted below the stability floor."""


class EmptyReferenceSet(CutsolveError, ValueError):
    """A monotonicity check needs at least one certified reference point."""


class ConfigError(CutsolveError, ValueError):
    """Problem configuration is malformed; message carries the offending field."""


class UnknownCatalogName(ConfigError):
    """Requested a function or fixture name not present in the catalog."""
