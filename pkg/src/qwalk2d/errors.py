"""Exception types raised by qwalk2d."""


class WalkInputError(ValueError):
    """Invalid user input: bad coin, mismatched dimensions, out-of-range parameter."""


class ConfigurationError(ValueError):
    """A configuration that cannot be executed, e.g. overlapping integration windows."""


class ImpossibleOutcomeError(ValueError):
    """A measurement outcome with (numerically) zero probability was requested."""
