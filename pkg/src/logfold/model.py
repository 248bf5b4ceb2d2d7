"""Shared domain types and the configuration record."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple, Union

BACKENDS = ("gzip", "bzip2", "lzma")
TOKEN_STRATEGIES = ("num", "num_path", "num_classpath", "all")

# Levels used when Config.backend_level is None; these match the
# command-line defaults of gzip, bzip2 and xz.
DEFAULT_LEVELS = {"gzip": 6, "bzip2": 9, "lzma": 6}


@dataclass(frozen=True)
class Config:
    chunk_lines: int = 100_000
    theta_rv: int = 40
    phi_d: float = 0.6
    zeta_uv: int = 3
    backend: str = "lzma"
    backend_level: Optional[int] = None
    token_strategy: str = "num_path"
    max_mining_depth: int = 5
    disable_processor: bool = False
    disable_hybrid_encoder: bool = False

    def __post_init__(self):
        if self.chunk_lines < 1:
            raise ValueError(f"chunk_lines must be >= 1, got {self.chunk_lines}")
        if not 0 < self.phi_d <= 1:
            raise ValueError(f"phi_d must be in (0, 1], got {self.phi_d}")
        if self.theta_rv < 1:
            raise ValueError(f"theta_rv must be >= 1, got {self.theta_rv}")
        if self.zeta_uv < 1:
            raise ValueError(f"zeta_uv must be >= 1, got {self.zeta_uv}")
        if self.max_mining_depth < 1:
            raise ValueError("max_mining_depth must be >= 1")
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend_level is not None and not 1 <= self.backend_level <= 9:
            raise ValueError(f"backend_level must be in 1..9, got {self.backend_level}")
        if self.token_strategy not in TOKEN_STRATEGIES:
            raise ValueError(f"unknown token strategy {self.token_strategy!r}")

    @property
    def level(self) -> int:
        if self.backend_level is None:
            return DEFAULT_LEVELS[self.backend]
        return self.backend_level

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)


def default_config() -> Config:
    return Config()


# ---------------------------------------------------------------------------
# Chunking

TERM_LF = 0
TERM_NONE = 1


@dataclass(frozen=True)
class LogChunk:
    """A window of raw lines. ``terminators[i]`` is TERM_LF or TERM_NONE."""

    index: int
    lines: Tuple[bytes, ...]
    terminators: Tuple[int, ...]

    def __post_init__(self):
        if len(self.lines) != len(self.terminators):
            raise ValueError("lines and terminators differ in length")

    def __len__(self):
        return len(self.lines)

    def to_bytes(self) -> bytes:
        if not self.lines:
            return b""
        body = b"\n".join(self.lines)
        if self.terminators[-1] == TERM_LF:
            body += b"\n"
        return body


def split_lines(data: bytes) -> Tuple[list, list]:
    """Split on LF. CR stays in the line body."""
    if not data:
        return [], []
    lines = data.split(b"\n")
    if lines[-1] == b"":
        lines.pop()
        terms = [TERM_LF] * len(lines)
    else:
        terms = [TERM_LF] * len(lines)
        terms[-1] = TERM_NONE
    return lines, terms


def chunk_input(data: bytes, cfg: Config) -> list:
    lines, terms = split_lines(data)
    n = cfg.chunk_lines
    return [
        LogChunk(i, tuple(lines[s:s + n]), tuple(terms[s:s + n]))
        for i, s in enumerate(range(0, len(lines), n))
    ]


def join_chunks(chunks: Sequence[LogChunk]) -> bytes:
    return b"".join(c.to_bytes() for c in chunks)


# ---------------------------------------------------------------------------
# Token-level types


class TokenClass(enum.Enum):
    Static = 0
    StructuredDynamic = 1
    UnstructuredNumeric = 2
    UnstructuredString = 3

    @property
    def placeholder(self) -> bytes:
        if self is TokenClass.StructuredDynamic:
            return b"<->"
        if self is TokenClass.Static:
            raise ValueError("static tokens have no placeholder")
        return b"<*>"


TemplateItem = Union[bytes, TokenClass]


@dataclass(frozen=True)
class ClassifiedLine:
    """Static tokens interleaved with placeholders.

    A placeholder is the TokenClass of the dynamic token it stands for;
    ``whitespace_runs`` has one more entry than ``template``.
    """

    template: Tuple[TemplateItem, ...]
    dynamic_tokens: Tuple[Tuple[TokenClass, bytes], ...]
    whitespace_runs: Tuple[bytes, ...]

    def template_text(self) -> list:
        return [t if isinstance(t, bytes) else t.placeholder for t in self.template]

    def reconstruct(self) -> bytes:
        dyn = iter(self.dynamic_tokens)
        out = [self.whitespace_runs[0]]
        for item, ws in zip(self.template, self.whitespace_runs[1:]):
            out.append(item if isinstance(item, bytes) else next(dyn)[1])
            out.append(ws)
        return b"".join(out)


# A skeleton piece is either a literal delimiter run (bytes) or a slot (None).
Piece = Optional[bytes]


@dataclass(frozen=True)
class DelimiterSkeleton:
    pattern: Tuple[Piece, ...]

    def __post_init__(self):
        prev_slot = None
        for p in self.pattern:
            is_slot = p is None
            if prev_slot is is_slot:
                raise ValueError("skeleton pieces must alternate")
            if not is_slot and not p:
                raise ValueError("empty delimiter run")
            prev_slot = is_slot
        if self.slot_count < 1 or self.slot_count == len(self.pattern):
            raise ValueError("a skeleton needs at least one slot and one delimiter run")

    @property
    def slot_count(self) -> int:
        return sum(1 for p in self.pattern if p is None)

    @property
    def boundary_flags(self) -> Tuple[bool, bool]:
        return self.pattern[0] is None, self.pattern[-1] is None

    def render(self) -> str:
        return "".join("<>" if p is None else p.decode("utf-8", "replace") for p in self.pattern)

    def __str__(self):
        return self.render()


Coord = Tuple[int, int]


@dataclass(frozen=True)
class SubTokenMatrix:
    columns: Tuple[Tuple[bytes, ...], ...]
    row_ids: Tuple[Coord, ...]

    def __post_init__(self):
        for col in self.columns:
            if len(col) != len(self.row_ids):
                raise ValueError("column length differs from row count")

    @property
    def n_rows(self) -> int:
        return len(self.row_ids)

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    def row(self, i: int) -> Tuple[bytes, ...]:
        return tuple(c[i] for c in self.columns)


@dataclass(frozen=True)
class SkeletonGroup:
    """A skeleton with some slots filled by constants and a matrix for the rest.

    ``fills[j]`` is the embedded constant of slot j or None if the slot is
    open; open slots map in order to the matrix columns.
    """

    skeleton: DelimiterSkeleton
    fills: Tuple[Optional[bytes], ...]
    matrix: SubTokenMatrix

    def __post_init__(self):
        if len(self.fills) != self.skeleton.slot_count:
            raise ValueError("fills must cover every slot")
        if sum(f is None for f in self.fills) != self.matrix.n_cols:
            raise ValueError("open slots must equal matrix columns")

    @classmethod
    def open(cls, skeleton: DelimiterSkeleton, matrix: SubTokenMatrix) -> "SkeletonGroup":
        return cls(skeleton, (None,) * skeleton.slot_count, matrix)

    @property
    def open_slots(self) -> Tuple[int, ...]:
        return tuple(j for j, f in enumerate(self.fills) if f is None)

    @property
    def n_rows(self) -> int:
        return self.matrix.n_rows

    def pattern_pieces(self) -> Iterator[Piece]:
        """Skeleton with constants merged into literals; None marks open slots."""
        fills = iter(self.fills)
        for p in self.skeleton.pattern:
            yield next(fills) if p is None else p

    def refined_pattern(self) -> str:
        return "".join("<>" if p is None else p.decode("utf-8", "replace")
                       for p in self.pattern_pieces())

    def rebuild(self, i: int) -> bytes:
        cells = iter(self.matrix.row(i))
        return b"".join(next(cells) if p is None else p for p in self.pattern_pieces())

    def rebuild_all(self) -> list:
        return [self.rebuild(i) for i in range(self.n_rows)]


# ---------------------------------------------------------------------------
# Archive-level types


class StreamKind(enum.IntEnum):
    TokenDictionary = 1
    TemplateDictionary = 2
    StringValueDictionary = 3
    IdStream = 4
    NumericStream = 5
    SkeletonCatalog = 6
    Metadata = 7


@dataclass(frozen=True)
class EncodedStream:
    name: str
    kind: StreamKind
    payload: bytes
    encoding: str = ""


@dataclass(frozen=True)
class StreamRecord:
    name: str
    kind: StreamKind
    size: int
    encoding: str = ""


@dataclass(frozen=True)
class ChunkRecord:
    index: int
    line_count: int
    streams: Tuple[StreamRecord, ...]


FORMAT_VERSION = 1


@dataclass(frozen=True)
class ArchiveManifest:
    config_snapshot: dict
    chunks: Tuple[ChunkRecord, ...] = ()
    format_version: int = FORMAT_VERSION

    @property
    def chunk_count(self) -> int:
        return len(self.chunks)

    def member_names(self) -> list:
        return [s.name for c in self.chunks for s in c.streams]


def config_snapshot(cfg: Config) -> dict:
    return {
        "chunk_lines": cfg.chunk_lines,
        "theta_rv": cfg.theta_rv,
        "phi_d": cfg.phi_d,
        "zeta_uv": cfg.zeta_uv,
        "backend": cfg.backend,
        "backend_level": cfg.level,
        "token_strategy": cfg.token_strategy,
        "max_mining_depth": cfg.max_mining_depth,
        "disable_processor": cfg.disable_processor,
        "disable_hybrid_encoder": cfg.disable_hybrid_encoder,
    }

