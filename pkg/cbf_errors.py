"""Exception types shared by the controller and the simulator."""


class CBFError(Exception):
    """Base class for every error raised by this package"""


class InvalidArgumentError(CBFError, ValueError):
    """An operation was called outside its precondition"""


class StaleBufferError(CBFError):
    """The composite barrier was evaluated outside the buffer's epoch"""

    def __init__(self, message, epoch=None, t=None):
        super().__init__(message)
        self.epoch = epoch
        self.t = t


class NumericalError(CBFError, ArithmeticError):
    """A non-finite intermediate showed up in the cascade or the plant"""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{key}={value}" for key, value in self.diagnostics.items())
        return f"{base} ({details})"


class InfeasibleQPError(CBFError):
    """The safety constraint cannot be satisfied (strict mode)"""

    def __init__(self, message, row=None, t=None):
        super().__init__(message)
        self.row = row
        self.t = t


class IntegrationError(CBFError):
    """The plant integrator produced a non-finite state"""

    def __init__(self, message, step=None, t=None, state=None):
        super().__init__(message)
        self.step = step
        self.t = t
        self.state = state


class SingularCommandError(CBFError):
    """Acceleration command cannot be inverted into attitude and thrust"""


class ScenarioError(CBFError, ValueError):
    """Scenario file is malformed or carries unknown keys"""
