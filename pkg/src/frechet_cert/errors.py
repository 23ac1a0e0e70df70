class FrechetCertError(Exception):
    """Base class for all errors raised by this package."""


class DomainMismatch(FrechetCertError, TypeError):
    pass


class PreconditionViolation(FrechetCertError, ValueError):
    pass


class DuplicateNode(FrechetCertError, ValueError):
    pass


class MalformedPermutation(FrechetCertError, ValueError):
    pass


class DegenerateDomain(FrechetCertError, ValueError):
    pass


class BudgetExceeded(FrechetCertError, RuntimeError):
    pass


class StepInsideBall(FrechetCertError, ValueError):
    """The telescoping step h/p^m still lies in the excluded ball."""


class HypothesisViolation(FrechetCertError, ValueError):
    """A vanishing hypothesis Delta^{n+1} f = 0 failed at a concrete point."""

    def __init__(self, point, value, step=None):
        self.point = point
        self.value = value
        self.step = step
        super().__init__(f"Delta^(n+1) f({point}) = {value} != 0 (step {step})")


class ConfigError(FrechetCertError, ValueError):
    pass
