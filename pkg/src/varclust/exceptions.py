"""Exception hierarchy for varclust.

``InputError`` subclasses map to CLI exit code 2 and ``ConfigError``
subclasses to exit code 3.
"""


class VarclustError(Exception):
    """Base class for all varclust errors."""


class InputError(VarclustError):
    """Malformed or invalid input data."""


class ConfigError(VarclustError):
    """Infeasible or invalid configuration."""


class ZeroVarianceColumn(InputError):
    def __init__(self, name):
        super().__init__(f"column {name!r} has zero variance and cannot be scaled")
        self.name = name


class DecompositionFailure(VarclustError):
    """The symmetric eigensolver or SVD did not converge."""


class RankDeficient(VarclustError):
    def __init__(self, k, available):
        super().__init__(f"requested {k} factors but the centered matrix has rank {available}")
        self.k = k
        self.available = available


class EmptyCluster(VarclustError):
    """An operation needed at least one cluster member."""


class TooManyClusters(ConfigError):
    def __init__(self, K, p):
        super().__init__(f"cannot form {K} nonempty clusters from {p} variables")
        self.K = K
        self.p = p


class InvalidConfig(ConfigError):
    """Simulation or engine configuration violates its invariants."""


class DegenerateInput(InputError):
    """Too few elements for the requested measure."""
