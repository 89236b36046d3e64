"""Exception hierarchy shared across solvcoh."""


class SolvcohError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(SolvcohError, ValueError):
    pass


class NotQSplitError(SolvcohError, ValueError):
    """A matrix (or family) is not diagonalizable over Q."""


class NonCommutingError(SolvcohError, ValueError):
    def __init__(self, i, j, message=None):
        self.indices = (i, j)
        super().__init__(message or f"operators {i} and {j} do not commute")


class JacobiError(SolvcohError, ValueError):
    def __init__(self, triple, residual):
        self.triple = tuple(triple)
        self.residual = tuple(residual)
        super().__init__(f"Jacobi identity fails on basis triple {self.triple}: residual {_fmt(residual)}")


class ModuleLawError(SolvcohError, ValueError):
    def __init__(self, pair, message=None):
        self.pair = tuple(pair)
        super().__init__(message or f"module law action([e_i,e_j]) = [action(e_i), action(e_j)] fails for {self.pair}")


class DerivationError(SolvcohError, ValueError):
    pass


class NonDiscreteError(SolvcohError, ValueError):
    pass


class DensityError(SolvcohError, ValueError):
    pass


class PairingLawError(SolvcohError, ValueError):
    pass


class ConfigError(SolvcohError, ValueError):
    """Schema or mathematical validation failure while loading a config.

    ``pointer`` is a JSON pointer into the offending document.
    """

    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


def _fmt(vec):
    return "(" + ", ".join(str(x) for x in vec) + ")"
