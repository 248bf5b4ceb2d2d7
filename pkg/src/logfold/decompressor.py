"""Archive decoding.

Steps, as reported by :func:`decompress_profile`:

1. outer-layer decode   5. string ids
2. unpack               6. matrix streams
3. template ids         7. numeric restoration
4. static sequences     8. final assembly
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import codecs
from .codecs import Mode
from .encoder import (COL_MIXED, COL_NUMERIC, LAYOUT_COLUMNS, LAYOUT_COMBINED, LAYOUT_EMPTY,
                      PLACEHOLDER, tag_length)
from .errors import CorruptArchive, InternalInconsistency, LogFoldError, MalformedVarint
from .model import ArchiveManifest, ChunkRecord
from .packer import decompress_backend, unpack_tar

STEP_NAMES = {
    1: "outer-layer decode",
    2: "unpack",
    3: "template ids",
    4: "static sequences",
    5: "string ids",
    6: "matrix streams",
    7: "numeric restoration",
    8: "final assembly",
}

_WS_SPLIT = re.compile(rb"([ \t\n\r\x0b\x0c]+)")
_ESCAPED = re.compile(rb"\\+(?:<\*>|<[a-z]>|<a[0-9]+>|\|g[0-9]+\|)")

# slot kinds in a compiled template
_STR, _NUM, _GRP = 0, 1, 2


class _Clock:
    def __init__(self):
        self.times = {k: 0.0 for k in STEP_NAMES}
        self._t = time.perf_counter()

    def lap(self, step: int) -> None:
        now = time.perf_counter()
        self.times[step] += now - self._t
        self._t = now


def parse_template(text: bytes) -> Tuple[List[bytes], List[tuple]]:
    """Split a template into literal segments and slots (one more segment than slots)."""
    segs: List[bytes] = []
    slots: List[tuple] = []
    cur = []
    for i, part in enumerate(_WS_SPLIT.split(text)):
        if i % 2 or not part:
            cur.append(part)
            continue
        if PLACEHOLDER.fullmatch(part):
            segs.append(b"".join(cur))
            cur = []
            if part == b"<*>":
                slots.append((_STR, None))
            elif part[:1] == b"<":
                slots.append((_NUM, tag_length(part)))
            else:
                slots.append((_GRP, int(part[2:-1])))
        elif _ESCAPED.fullmatch(part):
            cur.append(part[1:])
        else:
            cur.append(part)
    segs.append(b"".join(cur))
    return segs, slots


def parse_pattern(text: bytes) -> List[bytes]:
    """Literal segments around the open ``<>`` slots of a leaf pattern."""
    segs = []
    cur = bytearray()
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == 0x5C:  # backslash
            if i + 1 >= n:
                raise InternalInconsistency("dangling escape in pattern")
            cur.append(text[i + 1])
            i += 2
        elif c == 0x3C:  # '<'
            if text[i + 1: i + 2] != b">":
                raise InternalInconsistency("unescaped '<' in pattern")
            segs.append(bytes(cur))
            cur = bytearray()
            i += 2
        else:
            cur.append(c)
            i += 1
    segs.append(bytes(cur))
    return segs


@dataclass
class _Leaf:
    segments: List[bytes]
    n_rows: int
    layout: int
    n_cols: int
    kinds: Tuple[int, ...]
    strings: List[List[bytes]]
    raw: list  # RawNumericStream per encoded column (or the single combined one)


class _Reader:
    def __init__(self, rec: ChunkRecord, members: Dict[str, bytes]):
        self.prefix = f"c{rec.index}/"
        self.listed = {s.name for s in rec.streams}
        self.members = members

    def get(self, short: str) -> Optional[bytes]:
        name = self.prefix + short
        if name not in self.listed:
            return None
        return self.members[name]


def _uvarint_seq(buf: bytes, offset: int, count: int) -> Tuple[List[int], int]:
    out = []
    for _ in range(count):
        v, n = codecs.elastic_decode(buf, offset)
        out.append(v)
        offset += n
    return out, offset


def _decode_chunk(rec: ChunkRecord, members: Dict[str, bytes], clock: _Clock) -> bytes:
    rd = _Reader(rec, members)
    n_lines = rec.line_count

    # 3. template ids
    tpl_ids_buf = rd.get("tpl_ids.bin")
    if tpl_ids_buf is None:
        raise CorruptArchive(f"chunk {rec.index} has no template id stream")
    tpl_ids, end = codecs.unpack_uvarints(tpl_ids_buf, 0, n_lines)
    if end != len(tpl_ids_buf):
        raise InternalInconsistency("trailing bytes after template ids")
    clock.lap(3)

    # 4. static sequences
    tdict = rd.get("templates.dict")
    if tdict is None:
        raise CorruptArchive(f"chunk {rec.index} has no template dictionary")
    templates, end = codecs.decode_dictionary(tdict)
    if end != len(tdict):
        raise InternalInconsistency("trailing bytes after template dictionary")
    if n_lines and int(tpl_ids.max()) >= len(templates):
        raise InternalInconsistency("template id outside the dictionary")
    compiled = [parse_template(t) for t in templates]
    usage = np.bincount(tpl_ids.astype(np.int64), minlength=len(templates)) if n_lines else \
        np.zeros(len(templates), dtype=np.int64)
    need_str = 0
    need_num: Dict[int, int] = {}
    need_grp: Dict[int, int] = {}
    for (segs, slots), uses in zip(compiled, usage.tolist()):
        if not uses:
            continue
        for kind, arg in slots:
            if kind == _STR:
                need_str += uses
            elif kind == _NUM:
                need_num[arg] = need_num.get(arg, 0) + uses
            else:
                need_grp[arg] = need_grp.get(arg, 0) + uses
    clock.lap(4)

    # 5. string ids
    tokdict_buf = rd.get("tokens.dict") or codecs.elastic_encode(0)
    token_dict, end = codecs.decode_dictionary(tokdict_buf)
    if end != len(tokdict_buf):
        raise InternalInconsistency("trailing bytes after token dictionary")
    str_buf = rd.get("str_ids.bin") or b""
    str_ids = codecs.decode_ids(str_buf, need_str, len(token_dict))
    strings = [token_dict[i] for i in str_ids.tolist()]
    clock.lap(5)

    # 6. matrix streams
    catalog = rd.get("catalog.bin") or codecs.elastic_encode(0)
    strvals_buf = rd.get("strvals.dict")
    strvals: List[bytes] = []
    if strvals_buf is not None:
        strvals, end = codecs.decode_dictionary(strvals_buf)
        if end != len(strvals_buf):
            raise InternalInconsistency("trailing bytes after string-value dictionary")
    n_groups, pos = codecs.elastic_decode(catalog, 0)
    if n_groups > len(catalog):
        raise InternalInconsistency("catalog declares more groups than it can hold")
    sv_pos = 0
    groups = []
    for k in range(n_groups):
        n_leaves, n = codecs.elastic_decode(catalog, pos)
        pos += n
        if n_leaves < 1 or n_leaves > len(catalog):
            raise InternalInconsistency(f"group {k} declares {n_leaves} leaves")
        payload = rd.get(f"g{k}.bin")
        if payload is None:
            raise CorruptArchive(f"missing stream for group {k}")
        off = 0
        selector = None
        if n_leaves > 1:
            selector, off = codecs.parse_numeric_stream(payload, off)
        leaves = []
        for _ in range(n_leaves):
            (pid, n_rows), pos = _uvarint_seq(catalog, pos, 2)
            if pos >= len(catalog):
                raise MalformedVarint("catalog truncated")
            layout = catalog[pos]
            pos += 1
            n_cols = 0
            kinds: Tuple[int, ...] = ()
            if layout != LAYOUT_EMPTY:
                n_cols, n = codecs.elastic_decode(catalog, pos)
                pos += n
            if layout == LAYOUT_COLUMNS:
                kinds = tuple(catalog[pos:pos + n_cols])
                pos += n_cols
                if len(kinds) != n_cols or any(x not in (COL_NUMERIC, COL_MIXED) for x in kinds):
                    raise InternalInconsistency("bad column kinds in catalog")
            elif layout not in (LAYOUT_EMPTY, LAYOUT_COMBINED):
                raise InternalInconsistency(f"unknown matrix layout {layout}")
            if pid >= len(token_dict):
                raise InternalInconsistency("leaf pattern id outside the token dictionary")
            segments = parse_pattern(token_dict[pid])
            if len(segments) - 1 != n_cols:
                raise InternalInconsistency("pattern slots disagree with matrix columns")
            strs = []
            for kind in kinds:
                if kind == COL_MIXED:
                    cnt, n = codecs.elastic_decode(catalog, pos)
                    pos += n
                    if sv_pos + cnt > len(strvals):
                        raise InternalInconsistency("string-value dictionary too short")
                    strs.append(strvals[sv_pos: sv_pos + cnt])
                    sv_pos += cnt
            raws = []
            n_streams = 1 if layout == LAYOUT_COMBINED else (n_cols if layout == LAYOUT_COLUMNS else 0)
            for _ in range(n_streams):
                raw, off = codecs.parse_numeric_stream(payload, off)
                if raw.count != n_rows:
                    raise InternalInconsistency("matrix stream length differs from leaf rows")
                raws.append(raw)
            leaves.append(_Leaf(segments, n_rows, layout, n_cols, kinds, strs, raws))
        if off != len(payload):
            raise InternalInconsistency(f"trailing bytes in group {k} stream")
        total = sum(lf.n_rows for lf in leaves)
        if selector is not None and selector.count != total:
            raise InternalInconsistency("selector length differs from group rows")
        if total != need_grp.get(k, 0):
            raise InternalInconsistency(f"group {k} has {total} rows, templates use {need_grp.get(k, 0)}")
        groups.append((selector, leaves))
    if pos != len(catalog):
        raise InternalInconsistency("trailing bytes in catalog")
    if sv_pos != len(strvals):
        raise InternalInconsistency("unused string values")
    if set(need_grp) - set(range(n_groups)):
        raise InternalInconsistency("template references an unknown group")
    num_raw = {}
    for length, cnt in need_num.items():
        name = "len_" + (chr(96 + length) if length <= 26 else f"a{length - 26}") + ".bin"
        buf = rd.get(name)
        if buf is None:
            raise CorruptArchive(f"missing numeric stream {name}")
        raw, end = codecs.parse_numeric_stream(buf, 0)
        if end != len(buf) or raw.count != cnt:
            raise InternalInconsistency(f"numeric stream {name} disagrees with templates")
        if raw.encoding.fixed_width != length:
            raise InternalInconsistency(f"numeric stream {name} has the wrong width")
        num_raw[length] = raw
    clock.lap(6)

    # 7. numeric restoration
    numbers = {}
    for length, raw in num_raw.items():
        numbers[length] = codecs.render_numeric(codecs.restore_numeric_stream(raw))
    group_tokens = {}
    for k, (selector, leaves) in enumerate(groups):
        per_leaf = [_leaf_tokens(lf) for lf in leaves]
        if selector is None:
            group_tokens[k] = per_leaf[0]
            continue
        sel = codecs.restore_numeric_stream(selector).values
        if sel.size and int(sel.max()) >= len(leaves):
            raise InternalInconsistency("selector names a missing leaf")
        counts = np.bincount(sel, minlength=len(leaves))
        if counts.tolist() != [lf.n_rows for lf in leaves]:
            raise InternalInconsistency("selector counts differ from leaf rows")
        order = np.argsort(sel, kind="stable").tolist()
        flat = [t for toks in per_leaf for t in toks]
        out: List[bytes] = [b""] * len(flat)
        for p, t in zip(order, flat):
            out[p] = t
        group_tokens[k] = out
    clock.lap(7)

    # 8. final assembly
    str_next = iter(strings).__next__
    num_next = {length: iter(v).__next__ for length, v in numbers.items()}
    grp_next = {k: iter(v).__next__ for k, v in group_tokens.items()}
    plans = []
    for segs, slots in compiled:
        fns: List[Callable[[], bytes]] = []
        for kind, arg in slots:
            if kind == _STR:
                fns.append(str_next)
            elif kind == _NUM:
                fns.append(num_next.get(arg, _exhausted))
            else:
                fns.append(grp_next.get(arg, _exhausted))
        plans.append((segs, fns))
    lines: List[bytes] = []
    append = lines.append
    try:
        for tid in tpl_ids.tolist():
            segs, fns = plans[tid]
            if not fns:
                append(segs[0])
                continue
            parts = [segs[0]]
            for f, s in zip(fns, segs[1:]):
                parts.append(f())
                parts.append(s)
            append(b"".join(parts))
    except StopIteration:
        raise InternalInconsistency("a value stream ran out during assembly") from None

    term = rd.get("lineterm.bin")
    missing = set()
    if term is not None:
        cnt, n = codecs.elastic_decode(term, 0)
        pos_arr, end = codecs.unpack_uvarints(term, n, cnt)
        if end != len(term):
            raise InternalInconsistency("trailing bytes in line terminator stream")
        missing = set(pos_arr.tolist())
        if missing and max(missing) >= n_lines:
            raise InternalInconsistency("terminator position outside the chunk")
    if not n_lines:
        body = b""
    elif not missing:
        body = b"\n".join(lines) + b"\n"
    else:
        body = b"".join(l if i in missing else l + b"\n" for i, l in enumerate(lines))
    clock.lap(8)
    return body


def _exhausted():
    raise StopIteration


def _leaf_tokens(leaf: _Leaf) -> List[bytes]:
    segs = leaf.segments
    if leaf.layout == LAYOUT_EMPTY:
        return [segs[0]] * leaf.n_rows
    if leaf.layout == LAYOUT_COMBINED:
        stream = codecs.restore_numeric_stream(leaf.raw[0])
        if stream.encoding.mode is not Mode.COMBINED or len(stream.encoding.widths) != leaf.n_cols:
            raise InternalInconsistency("combined stream disagrees with its leaf")
        columns = codecs.split_combined(stream)
    else:
        columns = []
        mixed = iter(leaf.strings)
        for kind, raw in zip(leaf.kinds, leaf.raw):
            stream = codecs.restore_numeric_stream(raw)
            if kind == COL_NUMERIC:
                columns.append(codecs.render_numeric(stream))
            else:
                columns.append(_unparity(stream.values, next(mixed)))
    if len(columns) == 1:
        a, b = segs
        return [a + c + b for c in columns[0]]
    out = []
    for row in zip(*columns):
        parts = [segs[0]]
        for c, s in zip(row, segs[1:]):
            parts.append(c)
            parts.append(s)
        out.append(b"".join(parts))
    return out


def _unparity(values: np.ndarray, strings: List[bytes]) -> List[bytes]:
    out = []
    for v in values.tolist():
        if v & 1:
            k = v >> 1
            if not 1 <= k <= len(strings):
                raise InternalInconsistency("mixed-type id outside its column dictionary")
            out.append(strings[k - 1])
        else:
            out.append(b"%d" % (v >> 1))
    return out


def _run(archive: bytes, clock: _Clock) -> bytes:
    tar = decompress_backend(archive)
    clock.lap(1)
    manifest, members = unpack_tar(tar)
    clock.lap(2)
    return decode_manifest_chunks(manifest, members, clock)


def decode_manifest_chunks(manifest: ArchiveManifest, members: Dict[str, bytes], clock=None) -> bytes:
    clock = clock or _Clock()
    out = []
    for rec in manifest.chunks:
        try:
            out.append(_decode_chunk(rec, members, clock))
        except (MalformedVarint, IndexError, ValueError) as exc:
            if isinstance(exc, LogFoldError):
                raise
            raise InternalInconsistency(f"chunk {rec.index}: {exc}") from exc
    return b"".join(out)


def decompress(archive: bytes) -> bytes:
    try:
        return _run(archive, _Clock())
    except MalformedVarint as exc:
        raise CorruptArchive(str(exc)) from exc


def decompress_profile(archive: bytes) -> Tuple[bytes, Dict[int, float], float]:
    """Decode while timing each step; returns (output, step -> seconds, total seconds)."""
    start = time.perf_counter()
    clock = _Clock()
    clock._t = start
    data = _run(archive, clock)
    total = time.perf_counter() - start
    return data, dict(clock.times), total
