"""Type-aware encoding of one chunk into named streams.

Per chunk the encoder writes:

* ``templates.dict`` -- static token sequences with whitespace kept and
  placeholders ``|g<k>|`` (structured token of skeleton group k), a length
  tag such as ``<b>`` (unstructured number), or ``<*>`` (unstructured string);
* ``tpl_ids.bin`` -- one template id per line;
* ``tokens.dict`` -- unique unstructured strings followed by leaf patterns;
* ``str_ids.bin`` -- token-dictionary id per ``<*>`` occurrence;
* ``len_<tag>.bin`` -- one numeric stream per digit length;
* ``catalog.bin`` -- leaves of every skeleton group and their matrix layout;
* ``g<k>.bin`` -- leaf selector plus the matrix streams of group k;
* ``strvals.dict`` -- strings of mixed-type matrix columns;
* ``lineterm.bin`` -- positions of lines without a trailing LF.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import codecs
from .analyzer import DynamicRuleSet, classify, tokenize
from .codecs import Mode, NumericColumnEncoding
from .errors import NumericOverflow
from .model import (TERM_NONE, ClassifiedLine, Config, EncodedStream, LogChunk,
                    SkeletonGroup, StreamKind, TokenClass)
from .processor import extract_skeleton, groups_from_buckets, process_group

STRING_SLOT = b"<*>"
PLACEHOLDER = re.compile(rb"<\*>|<[a-z]>|<a[0-9]+>|\|g[0-9]+\|")
_NEEDS_ESCAPE = re.compile(rb"\\*(?:<\*>|<[a-z]>|<a[0-9]+>|\|g[0-9]+\|)")

# mixed-type numbers stay below this so 2n + 1 fits the signed carrier
MIXED_INT_LIMIT = 1 << 62

LAYOUT_EMPTY = 0
LAYOUT_COMBINED = 1
LAYOUT_COLUMNS = 2

COL_NUMERIC = 0
COL_MIXED = 1


# ---------------------------------------------------------------------------
# Tags and escaping


def length_tag(n: int) -> bytes:
    """``<a>`` for length 1 ... ``<z>`` for 26, then ``<a1>``, ``<a2>`` ..."""
    if n < 1:
        raise ValueError("length must be positive")
    if n <= 26:
        return b"<%c>" % (96 + n)
    return b"<a%d>" % (n - 26)


def tag_length(tag: bytes) -> int:
    body = tag[1:-1]
    if len(body) == 1:
        return body[0] - 96
    return 26 + int(body[1:])


def tag_name(tag: bytes) -> str:
    return tag[1:-1].decode("ascii")


def group_tag(k: int) -> bytes:
    return b"|g%d|" % k


def escape_static(token: bytes) -> bytes:
    return b"\\" + token if _NEEDS_ESCAPE.fullmatch(token) else token


def render_pattern(group: SkeletonGroup) -> bytes:
    """Leaf pattern text: ``<>`` marks an open slot, ``\\`` escapes ``\\`` and ``<``."""
    out = []
    for p in group.pattern_pieces():
        if p is None:
            out.append(b"<>")
        else:
            out.append(p.replace(b"\\", b"\\\\").replace(b"<", b"\\<"))
    return b"".join(out)


# ---------------------------------------------------------------------------
# Unstructured numbers


@dataclass
class LengthGroup:
    length: int
    tag: bytes
    values: List[bytes] = field(default_factory=list)


def numeric_encoding_for(values: np.ndarray, fixed_width: Optional[int]) -> NumericColumnEncoding:
    enc = codecs.dynamic_delta_decide(values[: codecs.SAMPLE_SIZE].tolist())
    return NumericColumnEncoding(enc.mode, fixed_width=fixed_width, base_value=enc.base_value)


def encode_length_group(group: LengthGroup) -> Tuple[bytes, NumericColumnEncoding]:
    try:
        values = codecs.parse_digits(group.values)
    except NumericOverflow:
        enc = NumericColumnEncoding(Mode.RAW, zigzag=False, fixed_width=group.length)
        return codecs.encode_numeric_column(group.values, enc), enc
    enc = numeric_encoding_for(values, group.length)
    return codecs.encode_int_column(values, enc), enc


def encode_unstructured_numbers(tokens: Sequence[Tuple[object, bytes]]):
    """Partition numbers by digit length and encode each length group.

    Returns ``(groups, streams, tags)`` where ``streams`` maps a tag to its
    encoded payload and encoding, and ``tags`` maps each coordinate to its tag.
    """
    groups: Dict[int, LengthGroup] = {}
    tags = {}
    for coord, tok in tokens:
        n = len(tok)
        g = groups.get(n)
        if g is None:
            g = groups[n] = LengthGroup(n, length_tag(n))
        g.values.append(tok)
        tags[coord] = g.tag
    streams = {g.tag: encode_length_group(g) for g in groups.values()}
    return list(groups.values()), streams, tags


# ---------------------------------------------------------------------------
# Matrices


def encode_mixed_column(column: Sequence[bytes]) -> Tuple[bytes, List[bytes], NumericColumnEncoding]:
    """Parity transform: numbers n -> 2n, the k-th new string -> 2k + 1 (k from 1)."""
    ids: Dict[bytes, int] = {}
    strings: List[bytes] = []
    out = np.empty(len(column), dtype=np.int64)
    for i, v in enumerate(column):
        if v.isdigit() and (v[:1] != b"0" or len(v) == 1) and len(v) <= 18 and int(v) < MIXED_INT_LIMIT:
            out[i] = 2 * int(v)
        else:
            k = ids.get(v)
            if k is None:
                strings.append(v)
                k = ids[v] = len(strings)
            out[i] = 2 * k + 1
    enc = numeric_encoding_for(out, None)
    return codecs.encode_int_column(out, enc), strings, enc


def encode_mixed_matrix(columns: Sequence[Sequence[bytes]]):
    """Encode every column with the parity transform.

    Returns ``(streams, dictionary)``: one payload per column and, per column,
    the strings in id order (id 1 first).
    """
    streams, dictionary = [], []
    for col in columns:
        payload, strings, _ = encode_mixed_column(col)
        streams.append(payload)
        dictionary.append(strings)
    return streams, dictionary


def _numeric_column_width(col: Sequence[bytes]) -> Tuple[bool, Optional[int]]:
    """(can go through the numeric path, fixed width or None)."""
    if not b"".join(col).isdigit():
        return False, None
    w = len(col[0])
    uniform = all(len(v) == w for v in col)
    leading = any(codecs.has_leading_zero(v) for v in col)
    if leading and not uniform:
        return False, None
    if max(map(len, col)) >= 19 and any(int(v) >= codecs.INT_LIMIT for v in col):
        return False, None
    return True, (w if leading else None)


@dataclass(frozen=True)
class MatrixPlan:
    layout: int
    column_kinds: Tuple[int, ...] = ()
    widths: Tuple[Optional[int], ...] = ()
    dictionary_only: bool = False

    @property
    def name(self) -> str:
        if self.dictionary_only:
            return "dictionary"
        if self.layout == LAYOUT_EMPTY:
            return "empty"
        if self.layout == LAYOUT_COMBINED:
            return "combined"
        if all(k == COL_MIXED for k in self.column_kinds):
            return "mixed"
        return "columns"


def decide_matrix_encoding(group: SkeletonGroup, cfg: Config) -> MatrixPlan:
    if cfg.disable_hybrid_encoder:
        return MatrixPlan(LAYOUT_EMPTY, dictionary_only=True)
    columns = group.matrix.columns
    if not columns:
        return MatrixPlan(LAYOUT_EMPTY)
    if not all(b"".join(col).isdigit() for col in columns):
        # any non-digit cell: the whole matrix goes through the parity transform
        return MatrixPlan(LAYOUT_COLUMNS, (COL_MIXED,) * len(columns), (None,) * len(columns))
    kinds, widths = [], []
    for col in columns:
        ok, w = _numeric_column_width(col)
        kinds.append(COL_NUMERIC if ok else COL_MIXED)
        widths.append(w)
    if all(k == COL_NUMERIC for k in kinds) and codecs.combined_column_decide(columns):
        return MatrixPlan(LAYOUT_COMBINED, tuple(kinds), tuple(len(c[0]) for c in columns))
    return MatrixPlan(LAYOUT_COLUMNS, tuple(kinds), tuple(widths))


def encode_matrix(group: SkeletonGroup, plan: MatrixPlan) -> Tuple[bytes, List[List[bytes]], str]:
    """Payload, per-mixed-column strings, and a short mode descriptor."""
    columns = group.matrix.columns
    if plan.layout == LAYOUT_EMPTY:
        return b"", [], ""
    if plan.layout == LAYOUT_COMBINED:
        rows = list(zip(*columns))
        values = codecs.parse_digits([b"".join(r) for r in rows])
        enc = NumericColumnEncoding(Mode.COMBINED, widths=plan.widths)
        return codecs.encode_int_column(values, enc), [], "C"
    out = bytearray()
    strings = []
    desc = []
    for col, kind, w in zip(columns, plan.column_kinds, plan.widths):
        if kind == COL_NUMERIC:
            values = codecs.parse_digits(col)
            enc = numeric_encoding_for(values, w)
            out += codecs.encode_int_column(values, enc)
            desc.append("PD"[enc.mode])
        else:
            payload, strs, enc = encode_mixed_column(col)
            out += payload
            strings.append(strs)
            desc.append("pd"[enc.mode])
    return bytes(out), strings, "".join(desc)


# ---------------------------------------------------------------------------
# Dictionaries


def encode_dictionaries(templates: Sequence[bytes], strings: Sequence[bytes],
                        patterns: Sequence[bytes]):
    """Dictionary-encode per-line templates and ``<*>`` string occurrences.

    Returns ``(template_dict, template_ids, token_dict, string_ids, pattern_ids)``
    with ids assigned in first-appearance order.
    """
    tpl_index: Dict[bytes, int] = {}
    tpl_ids = [tpl_index.setdefault(t, len(tpl_index)) for t in templates]
    tok_index: Dict[bytes, int] = {}
    str_ids = [tok_index.setdefault(s, len(tok_index)) for s in strings]
    token_entries = list(tok_index)
    # patterns are not deduplicated against strings: their text space differs
    pattern_ids = list(range(len(token_entries), len(token_entries) + len(patterns)))
    token_entries.extend(patterns)
    return list(tpl_index), tpl_ids, token_entries, str_ids, pattern_ids


# ---------------------------------------------------------------------------
# Chunk encoding


@dataclass
class EncodedChunk:
    index: int
    line_count: int
    streams: List[EncodedStream]
    stats: dict = field(default_factory=dict)


def _stream(idx: int, name: str, kind: StreamKind, payload: bytes, encoding: str = "") -> EncodedStream:
    return EncodedStream(f"c{idx}/{name}", kind, payload, encoding)


def render_template(line: ClassifiedLine, slots: Sequence[bytes], escaped: Optional[dict] = None) -> bytes:
    """Rebuild the line text with static tokens escaped and ``slots`` filling placeholders."""
    if escaped is None:
        escaped = {}
    runs = line.whitespace_runs
    out = [runs[0]]
    fill = iter(slots)
    for item, ws in zip(line.template, runs[1:]):
        if isinstance(item, bytes):
            e = escaped.get(item)
            if e is None:
                e = escaped[item] = escape_static(item)
            out.append(e)
        else:
            out.append(next(fill))
        out.append(ws)
    return b"".join(out)


def scan_lines(lines: Sequence[bytes], rules: DynamicRuleSet, dict_only: bool = False):
    """One pass over a chunk: templates, string tokens, numbers and skeleton groups.

    Gives the same result as ``analyze_lines`` + ``group_by_skeleton`` +
    ``render_template``, without materialising the classified lines.
    """
    kinds: Dict[bytes, tuple] = {}
    tags: Dict[int, bytes] = {}
    buckets: Dict[bytes, list] = {}
    templates: List[bytes] = []
    strings: List[bytes] = []
    numeric: List[tuple] = []
    for i, line in enumerate(lines):
        tokens = line.split()
        pieces = []
        d = 0
        for tok in tokens:
            info = kinds.get(tok)
            if info is None:
                cls = classify(tok, rules)
                if cls is TokenClass.Static:
                    info = (0, escape_static(tok))
                elif dict_only or cls is TokenClass.UnstructuredString:
                    info = (1, STRING_SLOT)
                elif cls is TokenClass.UnstructuredNumeric:
                    info = (2, None)
                else:
                    skel, subs = extract_skeleton(tok)
                    info = (3, skel, tuple(subs))
                kinds[tok] = info
            kind = info[0]
            if kind == 0:
                pieces.append(info[1])
                continue
            if kind == 1:
                pieces.append(STRING_SLOT)
                strings.append(tok)
            elif kind == 2:
                n = len(tok)
                tag = tags.get(n)
                if tag is None:
                    tag = tags[n] = length_tag(n)
                pieces.append(tag)
                numeric.append(((i, d), tok))
            else:
                skel = info[1]
                b = buckets.get(skel.pattern)
                if b is None:
                    b = buckets[skel.pattern] = [skel, [], [], group_tag(len(buckets))]
                b[1].append((i, d))
                b[2].append(info[2])
                pieces.append(b[3])
            d += 1
        if tokens and b" ".join(tokens) == line:
            templates.append(b" ".join(pieces))
        else:
            _, runs = tokenize(line)
            out = [runs[0]]
            for p, ws in zip(pieces, runs[1:]):
                out.append(p)
                out.append(ws)
            templates.append(b"".join(out))
    groups = groups_from_buckets(b[:3] for b in buckets.values())
    return templates, strings, numeric, groups


def encode_chunk(chunk: LogChunk, cfg: Config) -> EncodedChunk:
    rules = DynamicRuleSet.from_strategy(cfg.token_strategy)
    templates, strings, numeric, groups = scan_lines(
        chunk.lines, rules, cfg.disable_hybrid_encoder)
    _, num_streams, _ = encode_unstructured_numbers(numeric)

    # mine each skeleton group and lay out its leaves
    leaves_per_group = [process_group(g, cfg) for g in groups]
    patterns = [render_pattern(leaf) for leaves in leaves_per_group for leaf in leaves]
    tpl_entries, tpl_ids, token_entries, str_ids, pattern_ids = encode_dictionaries(
        templates, strings, patterns)

    idx = chunk.index
    out = [
        _stream(idx, "templates.dict", StreamKind.TemplateDictionary, codecs.encode_dictionary(tpl_entries)),
        _stream(idx, "tpl_ids.bin", StreamKind.IdStream, codecs.encode_ids(tpl_ids), "elastic"),
        _stream(idx, "tokens.dict", StreamKind.TokenDictionary, codecs.encode_dictionary(token_entries)),
    ]
    if str_ids:
        out.append(_stream(idx, "str_ids.bin", StreamKind.IdStream, codecs.encode_ids(str_ids), "elastic"))

    catalog = bytearray(codecs.elastic_encode(len(groups)))
    strvals: List[bytes] = []
    group_streams = []
    pid = iter(pattern_ids)
    plans: Counter = Counter()
    for k, (group, leaves) in enumerate(zip(groups, leaves_per_group)):
        catalog += codecs.elastic_encode(len(leaves))
        payload = bytearray()
        desc = []
        if len(leaves) > 1:
            leaf_of = {}
            for li, leaf in enumerate(leaves):
                for rid in leaf.matrix.row_ids:
                    leaf_of[rid] = li
            sel = np.array([leaf_of[r] for r in group.matrix.row_ids], dtype=np.int64)
            enc = numeric_encoding_for(sel, None)
            payload += codecs.encode_int_column(sel, enc)
            desc.append("S" + "PD"[enc.mode])
        for leaf in leaves:
            plan = decide_matrix_encoding(leaf, cfg)
            plans[plan.name] += 1
            catalog += codecs.elastic_encode(next(pid))
            catalog += codecs.elastic_encode(leaf.n_rows)
            catalog.append(plan.layout)
            if plan.layout != LAYOUT_EMPTY:
                catalog += codecs.elastic_encode(leaf.matrix.n_cols)
            if plan.layout == LAYOUT_COLUMNS:
                catalog.extend(plan.column_kinds)
            body, strs, d = encode_matrix(leaf, plan)
            for s in strs:
                catalog += codecs.elastic_encode(len(s))
                strvals.extend(s)
            payload += body
            desc.append(d or "-")
        group_streams.append(_stream(idx, f"g{k}.bin", StreamKind.NumericStream, bytes(payload), "/".join(desc)))

    out.append(_stream(idx, "catalog.bin", StreamKind.SkeletonCatalog, bytes(catalog)))
    if strvals:
        out.append(_stream(idx, "strvals.dict", StreamKind.StringValueDictionary,
                           codecs.encode_dictionary(strvals)))
    out.extend(group_streams)
    for tag, (payload, enc) in num_streams.items():
        out.append(_stream(idx, f"len_{tag_name(tag)}.bin", StreamKind.NumericStream, payload, enc.describe()))
    missing_lf = [i for i, t in enumerate(chunk.terminators) if t == TERM_NONE]
    if missing_lf:
        out.append(_stream(idx, "lineterm.bin", StreamKind.Metadata,
                           codecs.elastic_encode(len(missing_lf)) + codecs.encode_ids(missing_lf)))

    stats = {
        "lines": len(chunk.lines),
        "templates": len(tpl_entries),
        "structured": sum(g.n_rows for g in groups),
        "numeric": len(numeric),
        "strings": len(strings),
        "skeletons": len(groups),
        "leaves": len(patterns),
        "plans": dict(plans),
    }
    return EncodedChunk(idx, len(chunk.lines), out, stats)
