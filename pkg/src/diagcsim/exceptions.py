"""Exception types raised by diagcsim."""


class ConfigurationError(ValueError):
    """Invalid configuration value.

    ``key`` names the offending configuration key when one applies, so the
    command line front end can report it.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key

    def __str__(self):
        msg = super().__str__()
        if self.key:
            return f"{self.key}: {msg}"
        return msg


class ScenarioError(ConfigurationError):
    """Scenario geometry does not fit the receive window."""


class ContractViolation(RuntimeError):
    """An operation was called outside its precondition."""
