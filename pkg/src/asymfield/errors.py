"""Exception hierarchy shared by the parser, solver and closed forms."""


class AsymfieldError(Exception):
    pass


class NetlistError(AsymfieldError, ValueError):
    """Malformed netlist text or an invalid circuit description."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class ParameterRangeError(NetlistError):
    """A coupling, reflection, attenuation or offset outside its domain."""


class SingularSystemError(AsymfieldError, ArithmeticError):
    """The scattering equations have no unique solution.

    ``pivot`` holds the magnitude of the offending pivot when raised by the
    elimination routine.
    """

    def __init__(self, message, pivot=None):
        self.pivot = pivot
        super().__init__(message)


class DegenerateCouplingError(ParameterRangeError, SingularSystemError):
    """sigma == 1 or rho == 1: a closed resonator or a perfect mirror.

    It is both a range error (the data model requires values in [0, 1)) and a
    singular-system condition, so callers mapping exceptions to exit codes
    should test for :class:`SingularSystemError` first.
    """

    def __init__(self, message, line=None, col=None):
        NetlistError.__init__(self, message, line, col)
        self.pivot = 0.0


class ResonanceDivergenceError(SingularSystemError):
    """A closed-form denominator fell below the divergence guard."""


class ResidualError(AsymfieldError, ArithmeticError):
    """Solution rejected because its relative residual exceeded the limit."""
