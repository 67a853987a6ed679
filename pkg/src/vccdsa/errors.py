"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A configuration object violates its invariants."""


class DataError(ValueError):
    """Input data cannot satisfy an operation's preconditions."""


class DivergenceError(RuntimeError):
    """Training loss became non-finite or ran away; carries the step."""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step
