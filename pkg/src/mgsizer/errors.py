"""Exception types shared across the package."""


class ConfigError(Exception):
    """Invalid configuration or mutually inconsistent inputs."""


class LengthError(ConfigError):
    """A profile file does not contain the expected number of records."""


class BoundsError(Exception):
    """A requested storage flow would violate state-of-charge limits.

    Carries ``max_feasible``, the largest power [kW] (or tank flow) that the
    store could actually accept or deliver, so the caller can cap the flow
    and retry.
    """

    def __init__(self, message: str, max_feasible: float):
        super().__init__(message)
        self.max_feasible = max_feasible


class IRRUndefined(Exception):
    """Net present value has no sign change over the search bracket."""
