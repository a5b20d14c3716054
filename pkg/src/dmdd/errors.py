"""Exception and warning classes.

Every error carries an ``exit_code`` so the command line front end can map
failures without string matching: 2 for bad input or configuration, 3 for
numerical failures.
"""


class DmddError(Exception):
    exit_code = 3


class InputError(DmddError, ValueError):
    exit_code = 2


class NumericalError(DmddError, ArithmeticError):
    exit_code = 3


class ZeroMatrixError(NumericalError):
    """Raised when a decomposition is asked for on an all-zero matrix."""


class DimensionMismatch(NumericalError, ValueError):
    pass


class TooManyDelays(NumericalError, ValueError):
    def __init__(self, delays, max_delays):
        self.delays = delays
        self.max_delays = max_delays
        super().__init__(
            f"{delays} delays requested but at most d = {max_delays} is feasible "
            f"for this trajectory"
        )


class TooFewSnapshots(NumericalError, ValueError):
    pass


class DegenerateSpectrum(NumericalError):
    pass


class UnsupportedIndex(NumericalError, ValueError):
    pass


class EmptyCollection(InputError):
    pass


class FormatError(InputError):
    pass


class ParseError(InputError):
    pass


class TooFewFrames(InputError):
    pass


class WindowConfigError(InputError):
    pass


class UnknownChannel(InputError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class AliasError(InputError):
    pass


class ConjugacyWarning(RuntimeWarning):
    """Predicted states kept a non-negligible imaginary part."""


class EmptyWindowsWarning(UserWarning):
    """A trajectory was too short to yield a single experiment window."""
