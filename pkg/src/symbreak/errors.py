"""Exception types shared across the package."""


class SymbreakError(Exception):
    """Base class for all package errors."""


class ConfigError(SymbreakError, ValueError):
    """Invalid scenario configuration. Carries the offending field when known."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class NumericalToleranceError(SymbreakError, RuntimeError):
    """A numerical method could not meet its accuracy contract."""


class GridTooNarrowError(NumericalToleranceError):
    """A sampling grid does not hold the state (norm deficit or truncated support)."""


class AliasingError(NumericalToleranceError):
    """Wavefunction amplitude reached the periodic boundary of a spectral grid."""
