"""Exception hierarchy shared by the simulator, controllers and CLI."""


class MotorSimError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MotorSimError, ValueError):
    """A parameter or input is outside its valid domain.

    ``field`` names the offending attribute when one can be singled out, so
    the config parser can point at the right line.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class IntegrationBlowup(MotorSimError):
    """The plant state became non-finite or left the sanity envelope."""

    def __init__(self, message, step=None, t=None):
        super().__init__(message)
        self.step = step
        self.t = t


class ControllerFault(MotorSimError):
    """A controller emitted a non-finite command."""


class TraceError(MotorSimError, ValueError):
    """A trace is too short, empty, or otherwise unusable for a metric."""


class DisturbanceBeforeSettling(TraceError):
    """The disturbance hit before the speed had entered its settling band."""


class ConfigError(MotorSimError, ValueError):
    """Invalid experiment configuration document."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
