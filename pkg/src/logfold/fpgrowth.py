"""A compact FP-Growth frequent itemset miner.

Items may be any hashable values. Ties in item frequency are broken by
first appearance so results are deterministic.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from typing import Dict, FrozenSet, Hashable, Iterable, Mapping, Optional, Sequence


class _Node:
    __slots__ = ("item", "count", "parent", "children")

    def __init__(self, item, parent):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children = {}


class _Tree:
    def __init__(self):
        self.root = _Node(None, None)
        self.header: Dict[Hashable, list] = {}
        self.order: Dict[Hashable, int] = {}

    def insert(self, items: Sequence[Hashable], count: int = 1) -> None:
        node = self.root
        for item in items:
            child = node.children.get(item)
            if child is None:
                child = node.children[item] = _Node(item, node)
                self.header.setdefault(item, []).append(child)
            child.count += count
            node = child

    def single_path(self) -> Optional[list]:
        path = []
        node = self.root
        while node.children:
            if len(node.children) > 1:
                return None
            (node,) = node.children.values()
            path.append(node)
        return path


def _build(weighted: Iterable, min_count: int, counts: Optional[Mapping] = None) -> _Tree:
    weighted = list(weighted) if counts is None else weighted
    if counts is None:
        tally: Counter = Counter()
        for items, w in weighted:
            for it in items:
                tally[it] += w
        counts = tally
    frequent = {it: c for it, c in counts.items() if c >= min_count}
    tree = _Tree()
    if not frequent:
        return tree
    # rank: most frequent first, first-seen order on ties (dicts keep insertion order)
    ranked = sorted(frequent, key=lambda it: -frequent[it])
    tree.order = {it: i for i, it in enumerate(ranked)}
    for items, w in weighted:
        kept = sorted((it for it in items if it in tree.order), key=tree.order.__getitem__)
        if kept:
            tree.insert(kept, w)
    return tree


def _mine(tree: _Tree, suffix: FrozenSet, min_count: int, out: dict, maximal: bool) -> None:
    path = tree.single_path()
    if path is not None:
        if not path:
            return
        if maximal:
            out[suffix | {n.item for n in path}] = path[-1].count
            return
        for r in range(1, len(path) + 1):
            for combo in itertools.combinations(path, r):
                out[suffix | {n.item for n in combo}] = min(n.count for n in combo)
        return
    for item in sorted(tree.header, key=tree.order.__getitem__, reverse=True):
        nodes = tree.header[item]
        support = sum(n.count for n in nodes)
        new_suffix = suffix | {item}
        out[new_suffix] = support
        base = []
        for n in nodes:
            prefix = []
            p = n.parent
            while p.item is not None:
                prefix.append(p.item)
                p = p.parent
            if prefix:
                base.append((prefix[::-1], n.count))
        if base:
            cond = _build(base, min_count)
            if cond.header:
                _mine(cond, new_suffix, min_count, out, maximal)


def fpgrowth(transactions: Iterable[Iterable[Hashable]], min_support: float,
             maximal: bool = False, n_transactions: Optional[int] = None,
             item_counts: Optional[Mapping] = None) -> Dict[FrozenSet, int]:
    """Frequent itemsets with their support counts.

    ``min_support`` is a fraction of the transaction count. With
    ``maximal=True`` only itemsets without a frequent superset are returned.
    ``item_counts`` may carry a precomputed first pass (item -> count); the
    transaction count must then be given as well.
    """
    if not 0 < min_support <= 1:
        raise ValueError("min_support must be in (0, 1]")
    if item_counts is None:
        transactions = [tuple(t) for t in transactions]
        n_transactions = len(transactions)
    elif n_transactions is None:
        raise ValueError("n_transactions is required with item_counts")
    if not n_transactions:
        return {}
    min_count = max(1, math.ceil(min_support * n_transactions - 1e-9))
    tree = _build(((t, 1) for t in transactions), min_count, item_counts)
    out: dict = {}
    _mine(tree, frozenset(), min_count, out, maximal)
    if maximal:
        keys = sorted(out, key=len, reverse=True)
        kept = {}
        for k in keys:
            if not any(k < other for other in kept):
                kept[k] = out[k]
        out = kept
    return out
