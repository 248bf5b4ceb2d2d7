"""Top-level compression entry point: chunk, encode, pack."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

from .encoder import EncodedChunk, encode_chunk
from .model import Config, chunk_input, default_config
from .packer import build_manifest, pack


@dataclass
class CompressionResult:
    archive: bytes
    original_size: int
    seconds: float
    chunks: List[dict] = field(default_factory=list)

    @property
    def compressed_size(self) -> int:
        return len(self.archive)

    @property
    def ratio(self) -> float:
        if not self.archive:
            return 0.0
        return self.original_size / len(self.archive)

    @property
    def speed(self) -> float:
        """Bytes per second over the whole run, backend included."""
        return self.original_size / self.seconds if self.seconds > 0 else float("inf")


def _encode(args) -> EncodedChunk:
    chunk, cfg = args
    return encode_chunk(chunk, cfg)


def compress_result(data: bytes, cfg: Optional[Config] = None, workers: int = 1) -> CompressionResult:
    cfg = cfg or default_config()
    start = time.perf_counter()
    chunks = chunk_input(data, cfg)
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            encoded = list(pool.map(_encode, [(c, cfg) for c in chunks]))
    else:
        encoded = [encode_chunk(c, cfg) for c in chunks]
    manifest = build_manifest(cfg, [(e.line_count, e.streams) for e in encoded])
    archive = pack([e.streams for e in encoded], manifest, cfg)
    elapsed = time.perf_counter() - start
    return CompressionResult(archive, len(data), elapsed, [e.stats for e in encoded])


def compress(data: bytes, cfg: Optional[Config] = None, workers: int = 1) -> bytes:
    return compress_result(data, cfg, workers).archive
