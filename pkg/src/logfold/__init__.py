"""Lossless log compression over delimiter skeletons and sub-token matrices."""

from .compressor import CompressionResult, compress, compress_result
from .decompressor import decompress, decompress_profile
from .errors import (BackendUnavailable, CorruptArchive, InternalInconsistency, IoFailure,
                     LogFoldError, MalformedVarint, NumericOverflow, UnsupportedVersion)
from .model import Config, default_config

__version__ = "0.1.0"

__all__ = [
    "BackendUnavailable",
    "CompressionResult",
    "Config",
    "CorruptArchive",
    "InternalInconsistency",
    "IoFailure",
    "LogFoldError",
    "MalformedVarint",
    "NumericOverflow",
    "UnsupportedVersion",
    "compress",
    "compress_result",
    "decompress",
    "decompress_profile",
    "default_config",
]
