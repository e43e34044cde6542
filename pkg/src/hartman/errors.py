"""Exception types shared across the package."""


class HartmanError(Exception):
    """Base class for all package errors."""


class ValidationError(HartmanError):
    """Malformed input data or parameters."""


class PresentationError(HartmanError):
    """A subgroup presentation cannot be certified within the configured bounds."""


class WindowError(HartmanError):
    """A sampled window is too small for the requested operation."""


class FloatingDataError(HartmanError):
    """An exact-only operation received floating (uncertified) data."""


class UnsupportedSubgroupError(HartmanError):
    """The closed subgroup is outside the supported shape class
    (coordinate subtori x per-coordinate rational torsion x fiber subgroup)."""


class KernelSearchError(HartmanError):
    """Kernel candidate enumeration exceeded the configured budget."""
