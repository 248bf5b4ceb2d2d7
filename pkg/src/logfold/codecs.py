"""Integer and dictionary codecs.

Elastic encoding is the usual base-128 varint: little-endian 7-bit groups,
MSB set on every byte except the last. Bulk paths work on numpy arrays;
the scalar functions exist for clarity and for small headers.

Numeric stream layout::

    elastic(count) | mode byte | [width byte] | [ncols byte, widths...] | payload

The low nibble of the mode byte is the :class:`Mode`; bit 0x10 says a
fixed-width byte follows. Combined streams always carry their column widths.
The payload holds ``count`` elastic-encoded zigzag values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import InternalInconsistency, MalformedVarint, NumericOverflow

MAX_VARINT_BYTES = 10
# Numbers travel as signed 64-bit integers; anything at or above this goes
# through a string path instead.
INT_LIMIT = 1 << 63
SAMPLE_SIZE = 10
MAX_COMBINED_WIDTH = 18

_WIDTH_FLAG = 0x10


def elastic_encode(n: int) -> bytes:
    if n < 0:
        raise ValueError("elastic encoding needs a non-negative integer")
    out = bytearray()
    while True:
        low = n & 0x7F
        n >>= 7
        if n:
            out.append(low | 0x80)
        else:
            out.append(low)
            return bytes(out)


def elastic_decode(buf: bytes, offset: int = 0) -> Tuple[int, int]:
    """Return ``(value, bytes_consumed)`` for the varint at ``offset``."""
    result = 0
    shift = 0
    for i in range(MAX_VARINT_BYTES):
        pos = offset + i
        if pos >= len(buf):
            raise MalformedVarint(f"stream ends inside a varint at offset {offset}")
        b = buf[pos]
        result |= (b & 0x7F) << shift
        if not b & 0x80:
            return result, i + 1
        shift += 7
    raise MalformedVarint(f"no terminator within {MAX_VARINT_BYTES} bytes at offset {offset}")


def zigzag(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


def unzigzag(z: int) -> int:
    return z >> 1 if not z & 1 else -(z >> 1) - 1


# ---------------------------------------------------------------------------
# Bulk varints


def pack_uvarints(values) -> bytes:
    """Elastic-encode a sequence of non-negative integers below 2**64."""
    v = np.asarray(values, dtype=np.uint64).ravel()
    if v.size == 0:
        return b""
    nbytes = np.ones(v.size, dtype=np.int64)
    rest = v >> np.uint64(7)
    while rest.any():
        nz = rest != 0
        nbytes += nz
        rest >>= np.uint64(7)
    ends = np.cumsum(nbytes)
    starts = ends - nbytes
    out = np.empty(int(ends[-1]), dtype=np.uint8)
    for k in range(int(nbytes.max())):
        sel = nbytes > k
        group = (v[sel] >> np.uint64(7 * k)) & np.uint64(0x7F)
        more = (nbytes[sel] > k + 1).astype(np.uint64) << np.uint64(7)
        out[starts[sel] + k] = (group | more).astype(np.uint8)
    return out.tobytes()


def unpack_uvarints(buf, offset: int, count: int) -> Tuple[np.ndarray, int]:
    """Decode ``count`` varints starting at ``offset``; returns (uint64 array, end offset)."""
    if count == 0:
        return np.zeros(0, dtype=np.uint64), offset
    window = np.frombuffer(buf, dtype=np.uint8, count=min(len(buf) - offset, count * MAX_VARINT_BYTES),
                           offset=offset) if offset < len(buf) else np.zeros(0, dtype=np.uint8)
    ends = np.flatnonzero(window < 0x80)[:count]
    if ends.size < count:
        raise MalformedVarint(f"expected {count} varints, stream holds {ends.size}")
    starts = np.empty_like(ends)
    starts[0] = 0
    starts[1:] = ends[:-1] + 1
    lens = ends - starts + 1
    if lens.max() > MAX_VARINT_BYTES:
        raise MalformedVarint("varint longer than 10 bytes")
    used = window[: ends[-1] + 1]
    pos = np.arange(used.size) - np.repeat(starts, lens)
    if lens.max() == MAX_VARINT_BYTES and np.any(used[pos == 9] > 1):
        raise MalformedVarint("varint exceeds 64 bits")
    parts = (used & 0x7F).astype(np.uint64) << (pos * 7).astype(np.uint64)
    values = np.add.reduceat(parts, starts)
    return values, offset + int(ends[-1]) + 1


def zigzag_array(d: np.ndarray) -> np.ndarray:
    d = d.astype(np.int64, copy=False)
    return ((d << 1) ^ (d >> 63)).view(np.uint64)


def unzigzag_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=False)
    return ((z >> np.uint64(1)) ^ (np.uint64(0) - (z & np.uint64(1)))).view(np.int64)


# ---------------------------------------------------------------------------
# Numeric columns


class Mode(enum.IntEnum):
    PLAIN = 0
    DELTA = 1
    COMBINED = 2
    RAW = 3  # digit strings stored verbatim; overflow escape


@dataclass(frozen=True)
class NumericColumnEncoding:
    mode: Mode = Mode.PLAIN
    zigzag: bool = True
    fixed_width: Optional[int] = None
    base_value: Optional[int] = None
    widths: Tuple[int, ...] = ()  # combined mode only

    def describe(self) -> str:
        parts = [self.mode.name.lower()]
        if self.fixed_width is not None:
            parts.append(f"w{self.fixed_width}")
        if self.widths:
            parts.append("w" + ".".join(map(str, self.widths)))
        if self.zigzag and self.mode is not Mode.RAW:
            parts.append("z")
        return ",".join(parts)


def _mean_abs(xs: Sequence[int]) -> float:
    return sum(abs(x) for x in xs) / len(xs)


def delta_sample(sample: Sequence[int]) -> list:
    return [sample[0]] + [b - a for a, b in zip(sample, sample[1:])]


def dynamic_delta_decide(column: Sequence[int]) -> NumericColumnEncoding:
    """Delta iff the first ten deltas are smaller on average than the values."""
    if not len(column):
        raise ValueError("column must be non-empty")
    sample = [int(x) for x in column[:SAMPLE_SIZE]]
    if _mean_abs(delta_sample(sample)) < _mean_abs(sample):
        return NumericColumnEncoding(Mode.DELTA, base_value=sample[0])
    return NumericColumnEncoding(Mode.PLAIN)


def has_leading_zero(value: bytes) -> bool:
    return len(value) > 1 and value[:1] == b"0"


def parse_digits(column: Sequence[bytes]) -> np.ndarray:
    """Parse digit strings into int64; raises NumericOverflow past the carrier."""
    if not len(column):
        return np.zeros(0, dtype=np.int64)
    if max(map(len, column)) > 18:
        ints = [int(v) for v in column]
        if max(ints) >= INT_LIMIT:
            raise NumericOverflow("value exceeds the signed 64-bit range")
        return np.array(ints, dtype=np.int64)
    return np.array(list(map(int, column)), dtype=np.int64)


def _header(count: int, enc: NumericColumnEncoding) -> bytearray:
    out = bytearray(elastic_encode(count))
    mode = int(enc.mode)
    if enc.fixed_width is not None:
        out.append(mode | _WIDTH_FLAG)
        out.append(enc.fixed_width)
    else:
        out.append(mode)
    if enc.mode is Mode.COMBINED:
        out.append(len(enc.widths))
        out.extend(enc.widths)
    return out


def encode_int_column(values: np.ndarray, enc: NumericColumnEncoding) -> bytes:
    """Encode non-negative int64 values (already parsed) with ``enc``."""
    values = np.asarray(values, dtype=np.int64)
    out = _header(values.size, enc)
    if values.size:
        if values.min() < 0:
            raise ValueError("numeric columns carry non-negative integers")
        if enc.mode in (Mode.DELTA, Mode.COMBINED):
            seq = np.empty_like(values)
            seq[0] = values[0]
            seq[1:] = np.diff(values)
        elif enc.mode is Mode.PLAIN:
            seq = values
        else:
            raise ValueError(f"mode {enc.mode} is not an integer mode")
        out += pack_uvarints(zigzag_array(seq))
    return bytes(out)


def encode_numeric_column(column: Sequence[bytes], enc: NumericColumnEncoding) -> bytes:
    """Encode digit strings. Raises NumericOverflow if a value does not fit."""
    if enc.mode is Mode.RAW:
        out = _header(len(column), enc)
        if enc.fixed_width is not None:
            out += b"".join(column)
        else:
            for v in column:
                out += elastic_encode(len(v))
                out += v
        return bytes(out)
    if enc.mode is Mode.COMBINED:
        values = parse_digits([b"".join(row) for row in column])
    else:
        values = parse_digits(column)
    return encode_int_column(values, enc)


@dataclass
class NumericStream:
    """A decoded numeric stream header plus its integer payload."""

    encoding: NumericColumnEncoding
    values: Optional[np.ndarray]  # int64; None for RAW streams
    raw: Optional[list] = None

    def __len__(self):
        return len(self.raw) if self.values is None else int(self.values.size)


@dataclass
class RawNumericStream:
    """Header plus undecoded zigzag payload of a numeric stream."""

    encoding: NumericColumnEncoding
    count: int
    zigzagged: Optional[np.ndarray]  # uint64; None for RAW streams
    raw: Optional[list] = None


def parse_numeric_stream(buf: bytes, offset: int = 0) -> Tuple[RawNumericStream, int]:
    """Read the header and the varint payload without undoing delta/zigzag."""
    count, n = elastic_decode(buf, offset)
    offset += n
    if count > len(buf) - offset:
        raise InternalInconsistency(f"numeric stream declares {count} values, too few bytes remain")
    if offset >= len(buf):
        raise MalformedVarint("numeric stream truncated before mode byte")
    mode_byte = buf[offset]
    offset += 1
    try:
        mode = Mode(mode_byte & 0x0F)
    except ValueError:
        raise InternalInconsistency(f"unknown numeric mode {mode_byte:#x}") from None
    width = None
    if mode_byte & _WIDTH_FLAG:
        if offset >= len(buf):
            raise MalformedVarint("numeric stream truncated in its header")
        width = buf[offset]
        offset += 1
    widths: Tuple[int, ...] = ()
    if mode is Mode.COMBINED:
        if offset >= len(buf):
            raise MalformedVarint("numeric stream truncated in its header")
        k = buf[offset]
        widths = tuple(buf[offset + 1: offset + 1 + k])
        offset += 1 + k
        if len(widths) != k:
            raise MalformedVarint("combined widths truncated")
    enc = NumericColumnEncoding(mode, zigzag=mode is not Mode.RAW, fixed_width=width, widths=widths)
    if mode is Mode.RAW:
        raw = []
        if width is not None:
            end = offset + count * width
            if end > len(buf):
                raise MalformedVarint("raw numeric stream truncated")
            raw = [bytes(buf[i:i + width]) for i in range(offset, end, width)]
            offset = end
        else:
            for _ in range(count):
                ln, n = elastic_decode(buf, offset)
                offset += n
                raw.append(bytes(buf[offset:offset + ln]))
                offset += ln
            if offset > len(buf):
                raise MalformedVarint("raw numeric stream truncated")
        return RawNumericStream(enc, count, None, raw), offset
    z, offset = unpack_uvarints(buf, offset, count)
    return RawNumericStream(enc, count, z), offset


def restore_numeric_stream(raw: RawNumericStream) -> NumericStream:
    """Undo zigzag and delta."""
    enc = raw.encoding
    if raw.zigzagged is None:
        return NumericStream(enc, None, raw.raw)
    seq = unzigzag_array(raw.zigzagged)
    if enc.mode in (Mode.DELTA, Mode.COMBINED):
        values = np.cumsum(seq, dtype=np.int64)
    else:
        values = seq
    if values.size:
        if values.min() < 0:
            raise InternalInconsistency("numeric stream decodes to a negative value")
        if enc.mode is Mode.DELTA:
            enc = NumericColumnEncoding(enc.mode, fixed_width=enc.fixed_width, base_value=int(values[0]))
    return NumericStream(enc, values)


def read_numeric_stream(buf: bytes, offset: int = 0) -> Tuple[NumericStream, int]:
    raw, offset = parse_numeric_stream(buf, offset)
    return restore_numeric_stream(raw), offset


def format_ints(values: Iterable[int], width: Optional[int] = None) -> list:
    if width is None:
        return [b"%d" % v for v in values]
    return [b"%0*d" % (width, v) for v in values]


def render_numeric(stream: NumericStream) -> list:
    """Digit strings of a plain/delta/raw stream, re-padded to the fixed width."""
    if stream.values is None:
        return list(stream.raw)
    vals = stream.values.tolist()
    out = format_ints(vals, stream.encoding.fixed_width)
    w = stream.encoding.fixed_width
    if w is not None and any(len(v) != w for v in out):
        raise InternalInconsistency("decoded value wider than its fixed width")
    return out


def split_combined(stream: NumericStream) -> list:
    """Split a combined stream back into per-column digit-string tuples."""
    widths = stream.encoding.widths
    total = sum(widths)
    cols = [[] for _ in widths]
    for s in format_ints(stream.values.tolist(), total):
        if len(s) != total:
            raise InternalInconsistency("combined value wider than its columns")
        pos = 0
        for c, w in zip(cols, widths):
            c.append(s[pos:pos + w])
            pos += w
    return cols


def combined_column_decide(columns: Sequence[Sequence[bytes]]) -> bool:
    """Should a digit-only matrix be encoded as one concatenated column?

    Compares the mean absolute row-to-row delta of the concatenated integers
    against the sum of the per-column mean absolute deltas over the first ten
    rows. Needs every column to have a uniform width, at least two rows and at
    most 18 digits in total.
    """
    if not columns or len(columns[0]) < 2:
        return False
    widths = []
    for col in columns:
        w = len(col[0])
        if any(len(v) != w for v in col) or not all(v.isdigit() for v in col):
            return False
        widths.append(w)
    if sum(widths) > MAX_COMBINED_WIDTH:
        return False
    n = min(SAMPLE_SIZE, len(columns[0]))
    concat = [int(b"".join(col[i] for col in columns)) for i in range(n)]
    combined = _mean_abs(delta_sample(concat)[1:])
    separate = sum(_mean_abs(delta_sample([int(v) for v in col[:n]])[1:]) for col in columns)
    return combined < separate


# ---------------------------------------------------------------------------
# Dictionaries


def encode_dictionary(entries: Sequence[bytes]) -> bytes:
    out = bytearray(elastic_encode(len(entries)))
    for e in entries:
        out += elastic_encode(len(e))
        out += e
    return bytes(out)


def decode_dictionary(buf: bytes, offset: int = 0) -> Tuple[list, int]:
    count, n = elastic_decode(buf, offset)
    offset += n
    # every entry needs at least its length byte
    if count > len(buf) - offset:
        raise InternalInconsistency(f"dictionary declares {count} entries, too few bytes remain")
    entries = []
    for _ in range(count):
        ln, n = elastic_decode(buf, offset)
        offset += n
        end = offset + ln
        if end > len(buf):
            raise MalformedVarint("dictionary entry truncated")
        entries.append(bytes(buf[offset:end]))
        offset = end
    return entries, offset


def encode_ids(ids) -> bytes:
    return pack_uvarints(np.asarray(ids, dtype=np.uint64))


def decode_ids(buf: bytes, count: int, bound: int) -> np.ndarray:
    ids, end = unpack_uvarints(buf, 0, count)
    if end != len(buf):
        raise InternalInconsistency("trailing bytes after id stream")
    if ids.size and int(ids.max()) >= bound:
        raise InternalInconsistency(f"id {int(ids.max())} outside dictionary of {bound}")
    return ids
