"""Exception hierarchy for the duopoly stability library."""
from typing import Optional


class DuopolyError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(DuopolyError, ValueError):
    """Invalid run configuration; carries the offending key and line when known."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class GridTooLarge(ConfigError):
    """Sweep grid exceeds the configured cap."""


class InvalidParameters(DuopolyError, ValueError):
    """A model constant is non-positive or non-finite."""


class DegenerateEquilibrium(DuopolyError):
    """L1*L2 - gamma^2 is exactly zero, so E3 does not exist as a point."""


class UnstableAnchor(DuopolyError, ValueError):
    """Liapunov bundle requested for an anchor that is not linearly stable."""


class OutsideCertifiedBasin(DuopolyError):
    """Decay envelope requested for V(0) with h2*sqrt(V(0)) >= h1."""


class HorizonExceeded(DuopolyError):
    """Gronwall gap bound evaluated past the zero of its denominator."""


class IntegrationError(DuopolyError, RuntimeError):
    """Integration could not be completed."""

    def __init__(self, message: str, time: float):
        self.time = time
        super().__init__(f"{message} (t={time!r})")


class StepSizeUnderflow(IntegrationError):
    """Adaptive step size fell below floating point resolution."""


class OrthantViolation(IntegrationError):
    """A trajectory component dropped below -orthant_abort."""

    def __init__(self, time: float, state):
        self.state = state
        super().__init__(f"State {state} left the first orthant", time)
