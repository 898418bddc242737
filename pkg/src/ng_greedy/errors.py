"""Exception types that callers may want to distinguish from plain ValueError."""


class NoThresholdError(RuntimeError):
    """The revenue gap has no sign change on the searched interval."""


class ReproductionError(RuntimeError):
    """Golden-data reproduction failed; carries the offending cells."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("golden table mismatch: " + "; ".join(self.failures))


class SolveError(RuntimeError):
    """Linear solve of the truncated chain did not reach the required residual."""
