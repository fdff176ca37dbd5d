"""Exception hierarchy for the codec.

Each externally visible failure mode gets its own class so callers (and
the CLI) can report distinct diagnostics.
"""


class CodecError(Exception):
    """Base class for all mamcodec errors."""


class ContractViolationError(CodecError):
    """An operation was called with arguments violating its contract."""


class ImageInputError(CodecError):
    """Unreadable or out-of-range image input (bad depth, pixel overflow)."""


class FormatError(CodecError):
    """Base class for byte-format problems (MAMW / MAMC)."""


class BadMagicError(FormatError):
    """File does not start with the expected magic."""


class BadVersionError(FormatError):
    """Unsupported format version."""


class TruncatedError(FormatError):
    """File ends before the declared content."""


class DimMismatchError(FormatError):
    """Stored tensor dimensions disagree with the fixed architecture."""


class HashMismatchError(FormatError):
    """Weight hash does not match the one recorded in the container."""


class CorruptContainerError(FormatError):
    """MAMC header invariants violated."""


class CorruptStreamError(CodecError):
    """Arithmetic-coded payload or packed bitstream is inconsistent."""
