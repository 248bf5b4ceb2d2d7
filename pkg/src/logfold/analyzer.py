"""Tokenization and token classification."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Tuple

from .model import ClassifiedLine, LogChunk, TokenClass

NUMERIC_RULE = re.compile(rb"^\S*\d\S*$")
PATH_RULE = re.compile(rb"(/[^/]*)+|([a-zA-Z]:\\(?:[^\\]*\\))")
CLASSPATH_RULE = re.compile(rb"[a-zA-Z_$][a-zA-Z\d_$]*(?:\.[a-zA-Z_$][a-zA-Z\d_$]*)+")

_STRATEGY_RULES = {
    "num": ("numeric",),
    "num_path": ("numeric", "path"),
    "num_classpath": ("numeric", "classpath"),
    "all": ("numeric", "path", "classpath"),
}
_RULES = {"numeric": NUMERIC_RULE, "path": PATH_RULE, "classpath": CLASSPATH_RULE}

_WS_SPLIT = re.compile(rb"([ \t\n\r\x0b\x0c]+)")
_ASCII_ALNUM = re.compile(rb"[A-Za-z0-9]")
_ASCII_NON_ALNUM = re.compile(rb"[^A-Za-z0-9]")
_ALNUM = re.compile(r"[^\W_]")
_NON_ALNUM = re.compile(r"[\W_]")


@dataclass(frozen=True)
class DynamicRuleSet:
    enabled: Tuple[str, ...]

    @classmethod
    def from_strategy(cls, strategy: str) -> "DynamicRuleSet":
        try:
            return cls(_STRATEGY_RULES[strategy])
        except KeyError:
            raise ValueError(f"unknown token strategy {strategy!r}") from None

    @property
    def patterns(self):
        return tuple(_RULES[name] for name in self.enabled)

    def matches(self, token: bytes) -> bool:
        # NUMERIC_RULE is anchored, the others may match anywhere in the token
        for name in self.enabled:
            rule = _RULES[name]
            if (rule.match(token) if rule is NUMERIC_RULE else rule.search(token)):
                return True
        return False


def tokenize(line: bytes) -> Tuple[list, list]:
    """Split on runs of ASCII whitespace.

    Returns ``(tokens, runs)`` with ``len(runs) == len(tokens) + 1``; runs
    at either end may be empty.
    """
    tokens = line.split()
    if not tokens:
        return [], [line]
    if b" ".join(tokens) == line:
        return tokens, [b""] + [b" "] * (len(tokens) - 1) + [b""]
    parts = _WS_SPLIT.split(line)
    runs = parts[1::2]
    if parts[0]:
        runs.insert(0, b"")
    if parts[-1]:
        runs.append(b"")
    return tokens, runs


def alnum_profile(token: bytes) -> Tuple[bool, bool]:
    """(has letter/digit, has anything else). Invalid UTF-8 bytes count as delimiters."""
    if token.isascii():
        return bool(_ASCII_ALNUM.search(token)), bool(_ASCII_NON_ALNUM.search(token))
    text = token.decode("utf-8", "surrogateescape")
    return bool(_ALNUM.search(text)), bool(_NON_ALNUM.search(text))


def classify(token: bytes, rules: DynamicRuleSet) -> TokenClass:
    if not rules.matches(token):
        return TokenClass.Static
    if token.isdigit():
        return TokenClass.UnstructuredNumeric
    has_alnum, has_other = alnum_profile(token)
    if not has_alnum:
        return TokenClass.Static
    if has_other:
        return TokenClass.StructuredDynamic
    return TokenClass.UnstructuredString


_STATIC = TokenClass.Static


def analyze_line(line: bytes, rules: DynamicRuleSet, cache=None) -> ClassifiedLine:
    if cache is None:
        cache = {}
    tokens, runs = tokenize(line)
    classes = []
    for tok in tokens:
        cls = cache.get(tok)
        if cls is None:
            cls = cache[tok] = classify(tok, rules)
        classes.append(cls)
    template = tuple(t if c is _STATIC else c for t, c in zip(tokens, classes))
    dynamic = tuple((c, t) for t, c in zip(tokens, classes) if c is not _STATIC)
    return ClassifiedLine(template, dynamic, tuple(runs))


def analyze_lines(lines: Sequence[bytes], rules: DynamicRuleSet) -> list:
    cache: dict = {}
    return [analyze_line(line, rules, cache) for line in lines]


def analyze_chunk(chunk: LogChunk, rules: DynamicRuleSet) -> list:
    return analyze_lines(chunk.lines, rules)
