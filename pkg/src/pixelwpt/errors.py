"""Exception hierarchy shared across the package."""


class PixelWptError(Exception):
    """Base class for all package-specific errors."""


class SingularSystem(PixelWptError):
    """Reduced pixel-port impedance system is numerically singular."""


class EmptyPattern(PixelWptError):
    """Open-circuit pattern matrix is identically zero."""


class ZeroPattern(PixelWptError):
    """A coder radiates nothing inside the retained beamspace."""


class DimensionMismatch(PixelWptError):
    """Operands have inconsistent shapes."""


class ZeroChannel(PixelWptError):
    """Channel matrix is identically zero, no beam direction exists."""


class UnsupportedOrder(PixelWptError):
    """Requested moment order is odd or exceeds the Taylor truncation."""


class NonPositivePower(PixelWptError):
    """dB ratio requested for a non-positive power value."""


class SchemaError(PixelWptError):
    """Antenna dataset file is malformed or carries an unknown schema."""


class DimensionError(PixelWptError):
    """Antenna dataset declares dimensions its arrays do not match."""


class InfeasibleSpec(PixelWptError):
    """Synthetic antenna request cannot be satisfied."""
