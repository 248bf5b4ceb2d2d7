"""Archive container: a deterministic tar wrapped in gzip, bzip2 or xz.

The first tar member is ``manifest.bin``, a tagged binary record::

    b"LFMF" | elastic(version) | fields...

where each field is ``elastic(tag) | elastic(len) | value`` and nested
records use the same framing.
"""

from __future__ import annotations

import bz2
import gzip
import io
import lzma
import tarfile
import zlib
from typing import Dict, Iterable, List, Sequence, Tuple

from .codecs import elastic_decode, elastic_encode
from .errors import BackendUnavailable, CorruptArchive, IoFailure, MalformedVarint, UnsupportedVersion
from .model import (FORMAT_VERSION, ArchiveManifest, ChunkRecord, Config, EncodedStream,
                    StreamKind, StreamRecord, config_snapshot)

MANIFEST_NAME = "manifest.bin"
MANIFEST_MAGIC = b"LFMF"

_MAGIC = {
    "gzip": b"\x1f\x8b",
    "bzip2": b"BZh",
    "lzma": b"\xfd7zXZ\x00",
}

# manifest field tags
_T_CONFIG, _T_CHUNK_COUNT, _T_CHUNK = 1, 2, 3
_T_C_INDEX, _T_C_LINES, _T_C_STREAM = 1, 2, 3
_T_S_NAME, _T_S_KIND, _T_S_SIZE, _T_S_ENCODING = 1, 2, 3, 4

_CONFIG_FIELDS = [
    # (tag, key, type)
    (1, "chunk_lines", int), (2, "theta_rv", int), (3, "phi_d", float), (4, "zeta_uv", int),
    (5, "backend", str), (6, "backend_level", int), (7, "token_strategy", str),
    (8, "max_mining_depth", int), (9, "disable_processor", bool), (10, "disable_hybrid_encoder", bool),
]


def _field(tag: int, value: bytes) -> bytes:
    return elastic_encode(tag) + elastic_encode(len(value)) + value


def _fields(buf: bytes) -> Iterable[Tuple[int, bytes]]:
    pos = 0
    while pos < len(buf):
        tag, n = elastic_decode(buf, pos)
        pos += n
        ln, n = elastic_decode(buf, pos)
        pos += n
        if pos + ln > len(buf):
            raise CorruptArchive("manifest field overruns its record")
        yield tag, buf[pos:pos + ln]
        pos += ln


def _uint(b: bytes) -> int:
    v, n = elastic_decode(b, 0)
    if n != len(b):
        raise CorruptArchive("trailing bytes in manifest integer")
    return v


def encode_manifest(manifest: ArchiveManifest) -> bytes:
    cfg = bytearray()
    snap = manifest.config_snapshot
    for tag, key, typ in _CONFIG_FIELDS:
        if key not in snap:
            continue
        v = snap[key]
        if typ in (int, bool):
            cfg += _field(tag, elastic_encode(int(v)))
        else:
            cfg += _field(tag, str(v).encode())
    out = bytearray(MANIFEST_MAGIC + elastic_encode(manifest.format_version))
    out += _field(_T_CONFIG, bytes(cfg))
    out += _field(_T_CHUNK_COUNT, elastic_encode(manifest.chunk_count))
    for c in manifest.chunks:
        rec = bytearray(_field(_T_C_INDEX, elastic_encode(c.index)))
        rec += _field(_T_C_LINES, elastic_encode(c.line_count))
        for s in c.streams:
            srec = _field(_T_S_NAME, s.name.encode()) + _field(_T_S_KIND, elastic_encode(int(s.kind)))
            srec += _field(_T_S_SIZE, elastic_encode(s.size))
            if s.encoding:
                srec += _field(_T_S_ENCODING, s.encoding.encode())
            rec += _field(_T_C_STREAM, srec)
        out += _field(_T_CHUNK, bytes(rec))
    return bytes(out)


def decode_manifest(buf: bytes) -> ArchiveManifest:
    if not buf.startswith(MANIFEST_MAGIC):
        raise UnsupportedVersion("manifest magic missing")
    try:
        version, n = elastic_decode(buf, len(MANIFEST_MAGIC))
        if version != FORMAT_VERSION:
            raise UnsupportedVersion(f"archive format {version}, this build reads {FORMAT_VERSION}")
        snap: Dict[str, object] = {}
        chunks: List[ChunkRecord] = []
        declared = None
        by_tag = {tag: (key, typ) for tag, key, typ in _CONFIG_FIELDS}
        for tag, value in _fields(buf[len(MANIFEST_MAGIC) + n:]):
            if tag == _T_CONFIG:
                for ctag, cval in _fields(value):
                    if ctag not in by_tag:
                        continue
                    key, typ = by_tag[ctag]
                    if typ is int:
                        snap[key] = _uint(cval)
                    elif typ is bool:
                        snap[key] = bool(_uint(cval))
                    else:
                        snap[key] = typ(cval.decode())
            elif tag == _T_CHUNK_COUNT:
                declared = _uint(value)
            elif tag == _T_CHUNK:
                chunks.append(_decode_chunk(value))
    except (MalformedVarint, UnicodeDecodeError, ValueError) as exc:
        raise CorruptArchive(f"unreadable manifest: {exc}") from exc
    if declared is None or declared != len(chunks):
        raise CorruptArchive("manifest chunk count does not match its chunk records")
    if [c.index for c in chunks] != list(range(len(chunks))):
        raise CorruptArchive("manifest chunks out of order")
    return ArchiveManifest(snap, tuple(chunks), version)


def _decode_chunk(buf: bytes) -> ChunkRecord:
    index = lines = None
    streams = []
    for tag, value in _fields(buf):
        if tag == _T_C_INDEX:
            index = _uint(value)
        elif tag == _T_C_LINES:
            lines = _uint(value)
        elif tag == _T_C_STREAM:
            name = kind = size = None
            encoding = ""
            for stag, sval in _fields(value):
                if stag == _T_S_NAME:
                    name = sval.decode()
                elif stag == _T_S_KIND:
                    kind = StreamKind(_uint(sval))
                elif stag == _T_S_SIZE:
                    size = _uint(sval)
                elif stag == _T_S_ENCODING:
                    encoding = sval.decode()
            if name is None or kind is None or size is None:
                raise CorruptArchive("incomplete stream record in manifest")
            streams.append(StreamRecord(name, kind, size, encoding))
    if index is None or lines is None:
        raise CorruptArchive("incomplete chunk record in manifest")
    return ChunkRecord(index, lines, tuple(streams))


def build_manifest(cfg: Config, chunks: Sequence[Tuple[int, Sequence[EncodedStream]]]) -> ArchiveManifest:
    """Manifest for ``(line_count, streams)`` pairs in chunk order."""
    records = tuple(
        ChunkRecord(i, lines, tuple(StreamRecord(s.name, s.kind, len(s.payload), s.encoding) for s in streams))
        for i, (lines, streams) in enumerate(chunks)
    )
    return ArchiveManifest(config_snapshot(cfg), records)


# ---------------------------------------------------------------------------
# Container layers


def _tar(members: Sequence[Tuple[str, bytes]]) -> bytes:
    buf = io.BytesIO()
    with tarfile.open(fileobj=buf, mode="w", format=tarfile.USTAR_FORMAT) as tar:
        for name, data in members:
            info = tarfile.TarInfo(name)
            info.size = len(data)
            info.mtime = 0
            info.mode = 0o644
            info.uid = info.gid = 0
            info.uname = info.gname = ""
            tar.addfile(info, io.BytesIO(data))
    return buf.getvalue()


def compress_backend(data: bytes, backend: str, level: int) -> bytes:
    if backend == "lzma":
        return lzma.compress(data, format=lzma.FORMAT_XZ, preset=level)
    if backend == "gzip":
        return gzip.compress(data, compresslevel=level, mtime=0)
    if backend == "bzip2":
        return bz2.compress(data, compresslevel=level)
    raise BackendUnavailable(f"no backend named {backend!r}")


def detect_backend(archive: bytes) -> str:
    for name, magic in _MAGIC.items():
        if archive.startswith(magic):
            return name
    raise UnsupportedVersion("unrecognized archive container")


def decompress_backend(archive: bytes) -> bytes:
    backend = detect_backend(archive)
    try:
        if backend == "lzma":
            return lzma.decompress(archive, format=lzma.FORMAT_XZ)
        if backend == "gzip":
            return gzip.decompress(archive)
        return bz2.decompress(archive)
    except (lzma.LZMAError, EOFError, OSError, zlib.error, ValueError) as exc:
        raise CorruptArchive(f"{backend} layer is damaged: {exc}") from exc


def pack(chunk_streams: Sequence[Sequence[EncodedStream]], manifest: ArchiveManifest, cfg: Config) -> bytes:
    """Tar the manifest and every stream, then compress with the configured backend."""
    members = [(MANIFEST_NAME, encode_manifest(manifest))]
    listed = manifest.member_names()
    provided = [s.name for streams in chunk_streams for s in streams]
    if listed != provided:
        raise ValueError("manifest does not list exactly the provided streams")
    for streams in chunk_streams:
        members.extend((s.name, s.payload) for s in streams)
    return compress_backend(_tar(members), cfg.backend, cfg.level)


def untar(data: bytes) -> List[Tuple[str, bytes]]:
    try:
        with tarfile.open(fileobj=io.BytesIO(data), mode="r:") as tar:
            out = []
            for info in tar:
                if not info.isfile():
                    raise CorruptArchive(f"unexpected tar entry {info.name!r}")
                f = tar.extractfile(info)
                out.append((info.name, f.read()))
            return out
    except tarfile.TarError as exc:
        raise CorruptArchive(f"tar layer is damaged: {exc}") from exc


def validate(manifest: ArchiveManifest, members: Dict[str, bytes]) -> None:
    listed = manifest.member_names()
    if len(set(listed)) != len(listed):
        raise CorruptArchive("duplicate stream names in manifest")
    extra = set(members) - set(listed)
    if extra:
        raise CorruptArchive(f"archive holds unreferenced members: {sorted(extra)[:5]}")
    for c in manifest.chunks:
        for s in c.streams:
            data = members.get(s.name)
            if data is None:
                raise CorruptArchive(f"member {s.name} missing")
            if len(data) != s.size:
                raise CorruptArchive(f"member {s.name} has {len(data)} bytes, manifest says {s.size}")


def unpack_tar(data: bytes) -> Tuple[ArchiveManifest, Dict[str, bytes]]:
    entries = untar(data)
    if not entries or entries[0][0] != MANIFEST_NAME:
        raise CorruptArchive("manifest.bin is not the first member")
    manifest = decode_manifest(entries[0][1])
    members: Dict[str, bytes] = {}
    for name, payload in entries[1:]:
        if name in members or name == MANIFEST_NAME:
            raise CorruptArchive(f"duplicate member {name}")
        members[name] = payload
    validate(manifest, members)
    return manifest, members


def unpack(archive: bytes) -> Tuple[ArchiveManifest, Dict[str, bytes]]:
    return unpack_tar(decompress_backend(archive))


def write_archive(path, archive: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(archive)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
