"""Exception hierarchy shared by every stage of the pipeline."""


class RdheiError(Exception):
    """Base class for all errors raised by this package."""


class PgmError(RdheiError, ValueError):
    """Malformed PGM input."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnsupportedDepthError(PgmError):
    """PGM maxval above 255 (16-bit samples)."""


class KeyFormatError(RdheiError, ValueError):
    """Secret key is not exactly 32 bytes / 64 hex characters."""


class UnsupportedSizeError(RdheiError, ValueError):
    """Image too small for the requested method."""


class CapacityError(RdheiError):
    """Message does not fit in the embeddable capacity."""

    def __init__(self, capacity_bits, requested_bits):
        super().__init__(
            f"message needs {requested_bits} bits but capacity is {capacity_bits} bits"
        )
        self.capacity_bits = capacity_bits
        self.requested_bits = requested_bits


class IntegrityError(RdheiError):
    """Decrypted payload is inconsistent (wrong key or tampered image)."""


class FormatError(RdheiError):
    """In-image header or compressed stream is malformed."""


class DecodeError(FormatError):
    """Compressed bi-level stream is truncated or corrupt."""
