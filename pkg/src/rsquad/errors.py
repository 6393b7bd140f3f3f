"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RSQuadError(Exception):
    """Base class for all errors raised by rsquad."""


class FuncSpecError(RSQuadError, ValueError):
    """A funcspec document is malformed or violates a model invariant.

    ``where`` locates the problem: a JSON path such as ``pieces[1].to`` or
    ``line 3 column 7`` for syntax errors.
    """

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class DomainError(RSQuadError, ValueError):
    """A point or interval lies outside the function's domain."""


class SharedDiscontinuity(RSQuadError):
    """Integrand and integrator jump at the same point; the RS integral does not exist."""

    def __init__(self, at):
        self.at = at
        super().__init__(f"integrand and integrator are both discontinuous at t={at}")


class NoConvergence(RSQuadError):
    """Refining Riemann-Stieltjes sums did not settle within the doubling budget."""


class InvalidParams(RSQuadError, ValueError):
    """Quadrature parameters outside the certified regime (x beyond the midpoint, alpha outside [0,1])."""


class InvalidTag(InvalidParams):
    """A partition tag lies outside ``[x_i, (x_i + x_{i+1})/2]``."""


class HypothesisViolation(RSQuadError, ValueError):
    """An input fails a theorem hypothesis; ``hypothesis`` names it."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis '{hypothesis}' violated" + (f": {detail}" if detail else ""))


class NotNonnegativeWeight(HypothesisViolation):
    def __init__(self, detail: str = ""):
        super().__init__("g >= 0 and continuous", detail)


class NotMonotoneIntegrator(HypothesisViolation):
    def __init__(self, detail: str = ""):
        super().__init__("u monotone nondecreasing", detail)


class NotMonotoneIntegrand(HypothesisViolation):
    def __init__(self, detail: str = ""):
        super().__init__("f monotone nondecreasing", detail)


class NoLipschitzCertificate(HypothesisViolation):
    def __init__(self, detail: str = ""):
        super().__init__("f Lipschitz", detail)


class InvariantViolation(RSQuadError):
    """An internal guarantee failed (for example a kernel-rigorous bound was exceeded)."""
