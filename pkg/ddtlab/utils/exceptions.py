"""Exception types raised by the ddtlab modules.

Invalid arguments are reported with the builtin ValueError. The types below
separate the failure modes the experiment runner maps to exit codes.
"""


class ConfigError(ValueError):
    """An experiment configuration is malformed or violates a precondition.

    Attributes
    ----------
    field : str or None
        dotted path of the offending field, if known
    line : int or None
        line number of the field within the configuration file, if known
    """

    def __init__(self, message, field=None, line=None):
        """Instantiate the error.

        Parameters
        ----------
        message : str
            description of the problem
        field : str or None
            dotted path of the offending field
        line : int or None
            line number of the field within the configuration file
        """
        super(ConfigError, self).__init__(message)
        self.field = field
        self.line = line

    def __str__(self):
        """Return the diagnostic, prefixed with the location if known."""
        msg = super(ConfigError, self).__str__()
        if self.line is not None:
            msg = "line {}: {}".format(self.line, msg)
        return msg


class InsufficientDataError(ValueError):
    """Too few samples, escapes or elements to compute a statistic."""

    pass


class NumericalFailureError(ArithmeticError):
    """A computation produced non-finite values."""

    pass


class DivergenceError(NumericalFailureError):
    """A trajectory left the finite domain (non-finite or |θ_i| > 1e6)."""

    pass
