"""Exception types shared across the package."""


class CliffordMellinError(Exception):
    """Base class for all library errors."""


class DomainError(CliffordMellinError, ValueError):
    """Invalid argument: unsupported signature, bad grade index, non-finite input."""


class SignatureMismatchError(DomainError):
    """Operands live in different algebras."""


class SingularElementError(CliffordMellinError):
    """Element has no inverse (zero divisor)."""


class NotARootError(CliffordMellinError):
    """Candidate does not square to -1; carries the residual |a^2 + 1|."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class OffManifoldError(CliffordMellinError):
    """Requested (b1, b2) lies outside the admissible root-manifold region."""


class ContractError(CliffordMellinError):
    """A documented precondition was violated by the caller."""


class GeometryError(DomainError):
    """Grid geometries are incompatible or out of range."""


class FormatError(CliffordMellinError):
    """Malformed or unsupported file content."""


class ImageParseError(FormatError):
    """Unreadable PGM/PPM data; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset
