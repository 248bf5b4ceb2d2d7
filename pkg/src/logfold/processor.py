"""Skeleton grouping and sub-token pattern mining for structured tokens."""

from __future__ import annotations

import math
import operator
import re
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .codecs import SAMPLE_SIZE
from .fpgrowth import fpgrowth
from .model import Config, Coord, DelimiterSkeleton, SkeletonGroup, SubTokenMatrix

_ASCII_SPLIT = re.compile(rb"([A-Za-z0-9]+)")
_UNICODE_SPLIT = re.compile(r"([^\W_]+)")
_ASCII_RUN = re.compile(rb"[A-Za-z0-9]+")

_SKELETONS: Dict[tuple, DelimiterSkeleton] = {}
# ASCII fast path: the token with every alphanumeric run replaced by NUL
_SKELETONS_BY_SHAPE: Dict[bytes, DelimiterSkeleton] = {}


def extract_skeleton(token: bytes) -> Tuple[DelimiterSkeleton, List[bytes]]:
    """Split a token into its delimiter skeleton and alphanumeric sub-tokens."""
    if token.isascii() and b"\0" not in token:
        shape = _ASCII_RUN.sub(b"\0", token)
        skel = _SKELETONS_BY_SHAPE.get(shape)
        if skel is not None:
            return skel, _ASCII_RUN.findall(token)
        skel, subs = _extract(token)
        if len(_SKELETONS_BY_SHAPE) < 65536:
            _SKELETONS_BY_SHAPE[shape] = skel
        return skel, subs
    return _extract(token)


def _extract(token: bytes) -> Tuple[DelimiterSkeleton, List[bytes]]:
    if token.isascii():
        parts = _ASCII_SPLIT.split(token)
    else:
        text = token.decode("utf-8", "surrogateescape")
        parts = [p.encode("utf-8", "surrogateescape") for p in _UNICODE_SPLIT.split(text)]
    subs = parts[1::2]
    if not subs:
        raise ValueError(f"token {token!r} has no alphanumeric sub-token")
    pattern = []
    for i, part in enumerate(parts):
        if i % 2:
            pattern.append(None)
        elif part:
            pattern.append(part)
    key = tuple(pattern)
    skel = _SKELETONS.get(key)
    if skel is None:
        skel = DelimiterSkeleton(key)
        if len(_SKELETONS) < 65536:
            _SKELETONS[key] = skel
    return skel, subs


def group_by_skeleton(tokens: Iterable[Tuple[Coord, bytes]], cache: Optional[dict] = None
                      ) -> List[SkeletonGroup]:
    """One group per distinct skeleton, in order of first appearance.

    ``cache`` maps token -> (skeleton, sub-tokens) and may be shared with the caller.
    """
    if cache is None:
        cache = {}
    buckets: Dict[tuple, list] = {}
    for coord, tok in tokens:
        hit = cache.get(tok)
        if hit is None:
            skel, subs = extract_skeleton(tok)
            hit = cache[tok] = (skel, tuple(subs))
        skel, subs = hit
        b = buckets.get(skel.pattern)
        if b is None:
            b = buckets[skel.pattern] = [skel, [], []]
        b[1].append(coord)
        b[2].append(subs)
    return groups_from_buckets(buckets.values())


def groups_from_buckets(buckets) -> List[SkeletonGroup]:
    """``buckets`` holds ``[skeleton, coords, sub-token rows]`` triples."""
    groups = []
    for skel, coords, rows in buckets:
        columns = tuple(zip(*rows))
        groups.append(SkeletonGroup.open(skel, SubTokenMatrix(columns, tuple(coords))))
    return groups


# ---------------------------------------------------------------------------
# Column statistics and critical positions


@dataclass(frozen=True)
class ColumnStats:
    n_rows: int
    unique_count: int
    representative_values: Dict[bytes, int]
    dominance_ratio: float
    shannon_entropy: float

    @property
    def threshold(self) -> float:
        return self.n_rows / self.unique_count

    @property
    def representative_total(self) -> int:
        return sum(self.representative_values.values())


def column_stats(column: Sequence[bytes]) -> ColumnStats:
    if not column:
        raise ValueError("column must be non-empty")
    n = len(column)
    freq = Counter(column)
    u = len(freq)
    # f >= n / u, kept in integers
    reps = {v: f for v, f in freq.items() if f * u >= n}
    entropy = 0.0
    for f in sorted(freq.values()):
        p = f / n
        entropy -= p * math.log2(p)
    return ColumnStats(n, u, reps, sum(reps.values()) / n, max(entropy, 0.0))


@dataclass(frozen=True)
class CriticalPosition:
    column_index: int
    stats: ColumnStats
    accepted: bool


def rank_candidates(matrix: SubTokenMatrix, cfg: Config,
                    exclude: Iterable[int] = ()) -> List[CriticalPosition]:
    """Variable columns ranked by uniques, dominance, entropy, then index."""
    excluded = set(exclude)
    ranked = []
    for j, col in enumerate(matrix.columns):
        if j in excluded:
            continue
        st = column_stats(col)
        if st.unique_count < 2 or not st.representative_values:
            continue
        key = (st.unique_count, -st.representative_total, st.shannon_entropy, j)
        accepted = len(st.representative_values) < cfg.theta_rv or st.dominance_ratio > cfg.phi_d
        ranked.append((key, CriticalPosition(j, st, accepted)))
    ranked.sort(key=lambda kv: kv[0])
    return [cp for _, cp in ranked]


def select_critical_position(matrix: SubTokenMatrix, cfg: Config,
                             exclude: Iterable[int] = ()) -> Optional[CriticalPosition]:
    if matrix.n_rows < 2 or matrix.n_cols < 1:
        return None
    ranked = rank_candidates(matrix, cfg, exclude)
    if not ranked or not ranked[0].accepted:
        return None
    return ranked[0]


# ---------------------------------------------------------------------------
# Group transformations


def _take(seq: Sequence, rows: Sequence[int]) -> tuple:
    if len(rows) == 1:
        return (seq[rows[0]],)
    if not rows:
        return ()
    return operator.itemgetter(*rows)(seq)


def _embed(group: SkeletonGroup, col_values: Dict[int, bytes], rows: Optional[Sequence[int]] = None
           ) -> SkeletonGroup:
    """Fill the open slots behind matrix columns ``col_values`` and drop those columns."""
    open_slots = group.open_slots
    fills = list(group.fills)
    for j, v in col_values.items():
        fills[open_slots[j]] = v
    m = group.matrix
    keep = [j for j in range(m.n_cols) if j not in col_values]
    if rows is None:
        columns = tuple(m.columns[j] for j in keep)
        row_ids = m.row_ids
    else:
        columns = tuple(_take(m.columns[j], rows) for j in keep)
        row_ids = _take(m.row_ids, rows)
    return SkeletonGroup(group.skeleton, tuple(fills), SubTokenMatrix(columns, row_ids))


def _subset(group: SkeletonGroup, rows: Sequence[int]) -> SkeletonGroup:
    m = group.matrix
    columns = tuple(_take(c, rows) for c in m.columns)
    return SkeletonGroup(group.skeleton, group.fills, SubTokenMatrix(columns, _take(m.row_ids, rows)))


def constant_columns(group: SkeletonGroup) -> Dict[int, bytes]:
    """Single-unique-value column scan."""
    if group.n_rows == 0:
        return {}
    out = {}
    for j, col in enumerate(group.matrix.columns):
        first = col[0]
        if col.count(first) == len(col):
            out[j] = first
    return out


def fold_constant_columns(group: SkeletonGroup) -> SkeletonGroup:
    consts = constant_columns(group)
    return _embed(group, consts) if consts else group


def partition(column: Sequence[bytes], cp: CriticalPosition, cfg: Config) -> List[Tuple[Optional[bytes], list]]:
    """Row indices per subgroup as ``(embedded value or None for the residual, rows)``."""
    rows_by_value: Dict[bytes, list] = {}
    for i, v in enumerate(column):
        rows_by_value.setdefault(v, []).append(i)
    if len(rows_by_value) <= cfg.zeta_uv:
        return list(rows_by_value.items())
    reps = cp.stats.representative_values
    out: list = []
    minor: list = []
    for v, rows in rows_by_value.items():
        if v in reps:
            out.append((v, rows))
        else:
            minor.extend(rows)
    if minor:
        minor.sort()
        out.append((None, minor))
    return out


def regroup(group: SkeletonGroup, cp: CriticalPosition, cfg: Config) -> List[SkeletonGroup]:
    """Split on the critical column: fully when it has at most zeta_uv values,
    otherwise one subgroup per representative value plus a residual group
    that keeps the column open."""
    j = cp.column_index
    return _materialize(group, j, partition(group.matrix.columns[j], cp, cfg))


def _materialize(group: SkeletonGroup, j: int, parts) -> List[SkeletonGroup]:
    return [_subset(group, rows) if v is None else _embed(group, {j: v}, rows) for v, rows in parts]


def mine_constant_items(group: SkeletonGroup) -> Dict[int, bytes]:
    """Constant columns found by frequent itemset mining at 100% support.

    Each row is a transaction whose items are (column, value) pairs.
    """
    m = group.matrix
    n = m.n_rows
    if n == 0 or m.n_cols == 0:
        return {}
    # only an item carried by the first row can reach 100% support, so the
    # first pass counts just those
    counts = {(j, col[0]): col.count(col[0]) for j, col in enumerate(m.columns)}
    hot = [j for j, col in enumerate(m.columns) if counts[(j, col[0])] == n]
    if not hot:
        return {}
    transactions = (tuple((j, m.columns[j][i]) for j in hot) for i in range(n))
    itemsets = fpgrowth(transactions, 1.0, maximal=True, n_transactions=n, item_counts=counts)
    found: Dict[int, bytes] = {}
    for items in itemsets:
        for j, v in items:
            found[j] = v
    return dict(sorted(found.items()))


def refine_patterns(groups: Iterable[SkeletonGroup]) -> List[SkeletonGroup]:
    out = []
    for g in groups:
        consts = mine_constant_items(g)
        out.append(_embed(g, consts) if consts else g)
    return out


# ---------------------------------------------------------------------------
# Split cost model
#
# A rough two-part code length in bits: per-row symbols at their empirical
# entropy plus each distinct symbol spelled out once. Numeric columns take
# plain or zigzag-delta symbols, chosen by the encoder's sampling rule.

GATE_MIN_ROWS = 32
MAX_GATE_CANDIDATES = 4
LEAF_OVERHEAD = 4
_VARINT_EDGES = np.array([1 << (7 * k) for k in range(1, 10)], dtype=np.uint64)


def _symbols_bits(sym: np.ndarray) -> float:
    uniq, counts = np.unique(sym, return_counts=True)
    n = sym.size
    nbytes = 1 + np.searchsorted(_VARINT_EDGES, uniq.astype(np.uint64), side="right")
    return float(-(counts * np.log2(counts / n)).sum() + 8 * nbytes.sum())


def _ints_bits(values: np.ndarray) -> float:
    if values.size == 0:
        return 0.0
    # same plain/delta choice as the encoder: first ten values only
    head = values[:SAMPLE_SIZE]
    if np.abs(np.diff(head, prepend=0)).mean() < np.abs(head).mean():
        d = np.diff(values, prepend=0)
        return _symbols_bits((d << 1) ^ (d >> 63))
    # plain values are zigzagged on the wire too
    return _symbols_bits(values << 1)


class ColumnCodes:
    """A column as integer codes (numbers 2n, strings 2k+1) plus string lengths."""

    __slots__ = ("codes", "str_len")

    def __init__(self, col: Sequence[bytes]):
        self.str_len = None
        if b"".join(col).isdigit() and max(map(len, col)) <= 18:
            self.codes = np.array(list(map(int, col)), dtype=np.int64)
            return
        ids: Dict[bytes, int] = {}
        lens = [0]
        out = np.empty(len(col), dtype=np.int64)
        for i, v in enumerate(col):
            if v.isdigit() and len(v) <= 18 and v[:1] != b"0":
                out[i] = 2 * int(v)
            else:
                k = ids.get(v)
                if k is None:
                    k = ids[v] = len(lens)
                    lens.append(len(v) + 1)
                out[i] = 2 * k + 1
        self.codes = out
        self.str_len = np.array(lens, dtype=np.int64)

    def bits(self, rows: Optional[np.ndarray] = None) -> float:
        if rows is None:
            return self._bits(self.codes)
        codes = self.codes[rows]
        if self.str_len is not None:
            # a leaf numbers its strings afresh in order of first appearance
            odd = codes & 1 == 1
            ids, first, inv = np.unique(codes[odd], return_index=True, return_inverse=True)
            rank = np.empty(ids.size, dtype=np.int64)
            rank[np.argsort(first, kind="stable")] = np.arange(1, ids.size + 1)
            total = 8 * float(self.str_len[ids >> 1].sum())
            codes[odd] = 2 * rank[inv] + 1
            return total + _ints_bits(codes)
        return _ints_bits(codes)

    def _bits(self, codes: np.ndarray) -> float:
        total = _ints_bits(codes)
        if self.str_len is not None:
            odd = np.unique(codes[codes & 1 == 1]) >> 1
            total += 8 * float(self.str_len[odd].sum())
        return total


def column_bits(col: Sequence[bytes]) -> float:
    """Estimated encoded size of one matrix column, in bits."""
    return ColumnCodes(col).bits()


def _pattern_bits(group: SkeletonGroup) -> float:
    pattern = sum(2 if p is None else len(p) for p in group.pattern_pieces())
    return 8.0 * (pattern + LEAF_OVERHEAD)


def group_bits(group: SkeletonGroup) -> float:
    return sum(column_bits(c) for c in group.matrix.columns) + _pattern_bits(group)


def split_bits(subgroups: Sequence[SkeletonGroup]) -> float:
    """Cost of the subgroups plus the per-row selector that interleaves them."""
    owner = {}
    for k, g in enumerate(subgroups):
        for r in g.matrix.row_ids:
            owner[r] = k
    sel = np.array([owner[r] for r in sorted(owner)], dtype=np.int64)
    return _ints_bits(sel) + sum(group_bits(g) for g in subgroups)


def partition_bits(group: SkeletonGroup, codes: Sequence[ColumnCodes], j: int, parts) -> float:
    """``split_bits`` estimated straight from row partitions of ``group``.

    Columns that turn constant inside a part are charged as a one-symbol
    stream, which is about what embedding them in the pattern costs.
    """
    sel = np.empty(group.n_rows, dtype=np.int64)
    base = _pattern_bits(group)
    total = 0.0
    for k, (v, rows) in enumerate(parts):
        idx = np.asarray(rows, dtype=np.int64)
        sel[idx] = k
        for c, cc in enumerate(codes):
            if c != j or v is None:
                total += cc.bits(idx)
        total += base + (8 * len(v) if v is not None else 0)
    return total + _ints_bits(sel)


def split_pays(group: SkeletonGroup, subgroups: Sequence[SkeletonGroup]) -> bool:
    if group.n_rows < GATE_MIN_ROWS:
        return True
    return split_bits(subgroups) < group_bits(group)


def _mine(group: SkeletonGroup, cfg: Config, depth: int, frozen_slots: frozenset) -> List[SkeletonGroup]:
    # a single open column is left to the encoder: splitting it would only
    # turn a numeric column into per-value patterns
    if depth >= cfg.max_mining_depth or group.matrix.n_cols < 2 or group.n_rows < 2:
        return [group]
    open_slots = group.open_slots
    exclude = [j for j, s in enumerate(open_slots) if s in frozen_slots]
    ranked = rank_candidates(group.matrix, cfg, exclude)
    cp = parts = None
    codes = before = None
    for cand in ranked[:MAX_GATE_CANDIDATES]:
        if not cand.accepted:
            break
        trial = partition(group.matrix.columns[cand.column_index], cand, cfg)
        if group.n_rows < GATE_MIN_ROWS:
            cp, parts = cand, trial
            break
        if codes is None:
            codes = [ColumnCodes(c) for c in group.matrix.columns]
            before = sum(c.bits() for c in codes) + _pattern_bits(group)
        if partition_bits(group, codes, cand.column_index, trial) < before:
            cp, parts = cand, trial
            break
    if cp is None:
        return [group]
    subs = refine_patterns(_materialize(group, cp.column_index, parts))
    slot = open_slots[cp.column_index]
    out = []
    for sub in subs:
        residual = sub.fills[slot] is None
        out.extend(_mine(sub, cfg, depth + 1, frozen_slots | {slot} if residual else frozen_slots))
    return out


def process_group(group: SkeletonGroup, cfg: Config) -> List[SkeletonGroup]:
    """Mine one skeleton group into leaves ordered by first row."""
    if cfg.disable_processor:
        return [group]
    leaves = _mine(fold_constant_columns(group), cfg, 0, frozenset())
    leaves.sort(key=lambda g: g.matrix.row_ids[0])
    return leaves


def process(groups: Iterable[SkeletonGroup], cfg: Config) -> List[SkeletonGroup]:
    out = []
    for g in groups:
        out.extend(process_group(g, cfg))
    return out
