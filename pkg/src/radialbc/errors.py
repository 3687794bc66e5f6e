"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: config/parse problems
exit 2, domain/physics rejections exit 3, numerical failures exit 4.
"""


class RadialBCError(Exception):
    """Base class for all package errors."""


class DomainError(RadialBCError):
    """Potential evaluation produced a non-finite or out-of-domain value."""

    def __init__(self, variant: str, r: float, detail: str = ""):
        self.variant = variant
        self.r = r
        msg = f"{variant}: evaluation failed at r={r!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ClassificationError(RadialBCError):
    """Tabulated small-r (or tail) trend is not a clean power law."""

    def __init__(self, slope: float, residual: float, tolerance: float):
        self.slope = slope
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"ambiguous power-law trend: fitted slope {slope:.4g}, rms log-residual "
            f"{residual:.3g} exceeds tolerance {tolerance:.3g}"
        )


class UnsupportedClassError(RadialBCError):
    """Origin behaviour outside what the solver handles."""


class FallToCenterError(RadialBCError):
    """Imaginary indicial exponent: no ground state without extra input."""


class PolicyError(RadialBCError):
    """Boundary policy incompatible with the problem's indicial structure."""


class StartOffError(RadialBCError):
    """Series start-off point violates the truncation bound."""


class RegimeError(RadialBCError):
    """Energy is not in the bound-state regime for the inward sweep."""


class BracketError(RadialBCError):
    """Energy window does not bracket the requested level."""

    def __init__(self, msg: str, counts=None):
        super().__init__(msg)
        self.counts = counts


class SolverConvergenceError(RadialBCError):
    """Eigenvalue refinement failed to reach tolerance."""

    def __init__(self, msg: str, history=None):
        super().__init__(msg)
        self.history = tuple(history or ())


class DivergentVolumeError(RadialBCError):
    """Ball integral diverges: candidate is not a solution candidate."""


class ConfigError(RadialBCError):
    """Command-line / config-file parse failure."""

    def __init__(self, field: str, msg: str):
        self.field = field
        super().__init__(f"config field '{field}': {msg}")
