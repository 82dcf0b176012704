"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when parameters are outside their valid domain."""


class ScenarioFormatError(ValueError):
    """Raised when a scenario or placement file cannot be parsed or validated."""


class InfeasibleError(RuntimeError):
    """Raised when a solver cannot satisfy every node.

    Attributes
    ----------
    unsatisfied : list of int
        Indices of the nodes left below the required power.
    context : str
        Free-form location of the failure (e.g. the cluster being solved).
    """

    def __init__(self, message, unsatisfied=(), context=""):
        super().__init__(message)
        self.unsatisfied = list(unsatisfied)
        self.context = context
