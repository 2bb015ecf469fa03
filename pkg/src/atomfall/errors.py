"""Exception types shared across the package."""


class AtomfallError(Exception):
    """Base class for all package-specific errors."""


class GammaPoleError(AtomfallError, ValueError):
    """Gamma function evaluated at a nonpositive integer.

    Carries the offending argument as ``z``.
    """

    def __init__(self, z):
        self.z = z
        super().__init__(f"gamma pole at z = {z}")


class NonConvergenceError(AtomfallError, ArithmeticError):
    """A series evaluation did not reach the requested tolerance.

    ``diagnostics`` holds the state of the failed evaluation (arguments,
    terms consumed, last term magnitude) for post-mortem inspection.
    """

    def __init__(self, message, **diagnostics):
        self.diagnostics = diagnostics
        super().__init__(f"{message} ({diagnostics})")


class RegimeError(AtomfallError, ValueError):
    """An operation was invoked outside its validity regime.

    The message names the violated gate.
    """


class SingularExponentError(AtomfallError, ArithmeticError):
    """Matrix-exponent evaluation hit a resonance pole of the expansion."""


class StepLimitError(AtomfallError, ArithmeticError):
    """Adaptive integrator exceeded its step budget.

    ``worst_error`` records the largest scaled local-error estimate seen.
    """

    def __init__(self, message, worst_error):
        self.worst_error = worst_error
        super().__init__(f"{message} (worst local error estimate {worst_error:.3e})")


class GridError(AtomfallError, ValueError):
    """Momentum-grid precondition violated (margin, alignment, truncation)."""
