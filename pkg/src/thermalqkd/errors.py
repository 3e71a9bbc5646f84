"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside an operation's documented domain."""


class UnphysicalStateError(ValueError):
    """A covariance matrix violates the physicality bound (symplectic eigenvalue < 1)."""


class DegenerateChannelError(ValueError):
    """The thermal noise channel is degenerate (eta4 in {0, 1}); no auxiliary variance exists."""


class DeadDetectorError(ValueError):
    """A detector trace has zero mean intensity; normalized correlations are undefined."""
