"""Exception hierarchy shared by every eipack module."""


class EIPackError(Exception):
    """Base class for all library errors."""


class InvalidInput(EIPackError, ValueError):
    pass


class NotHermitian(InvalidInput):
    pass


class NotIsometry(InvalidInput):
    pass


class DimensionTooSmall(InvalidInput):
    pass


class BoundVacuous(InvalidInput):
    pass


class OutOfScope(InvalidInput):
    pass


class RatioMismatch(InvalidInput):
    pass


class BasisTooShort(InvalidInput):
    pass


class NotEquiIsoclinic(EIPackError):
    pass


class AlphaOne(NotEquiIsoclinic):
    """Raised where an argument needs alpha != 1 (linearly independent projections)."""


class NotTight(EIPackError):
    pass


class NotEITFF(EIPackError):
    pass


class NoComplement(EIPackError):
    pass


class Unsupported(EIPackError):
    pass


class UnsupportedDyadicPart(Unsupported):
    pass


class NotApplicable(EIPackError):
    pass


class UncertainDimension(EIPackError):
    """A numerical rank did not show a clean singular-value gap."""


class InternalInconsistency(EIPackError):
    """Two independent computations of the same quantity disagree."""
