"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid parameters or configuration (CLI exit status 1)."""


class DomainError(ValueError):
    """A function was evaluated outside its mathematical domain."""


class IntegrationError(RuntimeError):
    """Numerical failure during time integration (CLI exit status 2).

    Attributes
    ----------
    last_time : float
        Last time at which the solution was accepted.
    """

    def __init__(self, message, last_time):
        super().__init__(f"{message} (last good t = {last_time!r})")
        self.last_time = last_time


class StepSizeUnderflow(IntegrationError):
    pass


class UnphysicalState(IntegrationError):
    pass
