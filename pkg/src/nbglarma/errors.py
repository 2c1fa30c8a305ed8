"""Exception hierarchy for nbglarma."""


class NbGlarmaError(Exception):
    """Base class for all nbglarma errors."""


class ConfigurationError(NbGlarmaError):
    """Inconsistent dimensions, invalid options, or violated preconditions."""


class NumericError(NbGlarmaError):
    """Non-finite intermediate values or failed linear algebra (divergent fit)."""


class SimulationError(NbGlarmaError):
    """Degenerate simulation configuration (e.g. exploding mean process)."""


class InputError(NbGlarmaError):
    """Malformed input file; message names the offending location."""


class MetricsError(NbGlarmaError):
    """Metrics requested on an undefined configuration (e.g. empty truth)."""
