"""Exception hierarchy shared by the compressor and decompressor."""


class LogFoldError(Exception):
    """Base class for all pipeline errors."""


class MalformedVarint(LogFoldError):
    pass


class NumericOverflow(LogFoldError):
    """A numeric value does not fit the signed 64-bit carrier.

    Callers catch this and route the values through a string path instead.
    """


class BackendUnavailable(LogFoldError):
    pass


class IoFailure(LogFoldError):
    pass


class UnsupportedVersion(LogFoldError):
    pass


class CorruptArchive(LogFoldError):
    pass


class InternalInconsistency(CorruptArchive):
    """Decoded data violates an invariant; decoding stops instead of guessing."""
