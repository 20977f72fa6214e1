"""Exception types raised by the library."""


class DomainError(ValueError):
    """An input lies outside the domain of the operation."""


class DegenerateConfigurationError(ArithmeticError):
    """A denominator in the group-velocity formulas fell below its floor."""

    def __init__(self, term, value, floor):
        self.term = term
        self.value = value
        self.floor = floor
        self.index = None
        self.axis_value = None
        super().__init__(term, value, floor)

    def __str__(self):
        msg = f"degenerate configuration: |{self.term}| = {abs(self.value):.3e} below floor {self.floor:.1e}"
        if self.axis_value is not None:
            msg += f" (at axis value {self.axis_value:.17g})"
        return msg


class RootNotFoundError(ArithmeticError):
    """No sign change of the target function inside the search bracket."""


class ConfigError(ValueError):
    """Malformed or out-of-range run configuration."""

    def __init__(self, message, lineno=None, key=None):
        self.lineno = lineno
        self.key = key
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)
