"""Words, m-ary trees and forests, and their combinatorial statistics.

A word is a tuple of letters in ``1..m``; the empty tuple is the root word.
A tree is a prefix-closed set of words, stored canonically as a sorted tuple.
Python's tuple ordering coincides with the lexicographic word order used
throughout (a prefix precedes its extensions, otherwise the first differing
letter decides), so words, nodes ``(k, w)`` and trees sort natively.

Forests are ``n``-tuples of trees. The forest order puts the larger first
differing tree first; among equal-size trees the one whose sorted word list
is lexicographically smaller comes first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .errors import CapExceededError, DomainError, ForestParseError

Word = tuple
Tree = tuple
NodeRef = tuple  # (component k in 1..n, word)
DPair = tuple  # (source NodeRef, target NodeRef)
LatticePath = tuple

DEFAULT_MAX_COUNT = 10**7


def forest_count(m: int, n: int, d: int) -> int:
    """Number of m-ary forests with n roots and d nodes (Fuss-Catalan)."""
    _check_params(m, n, d)
    num = n * comb(m * d + n - 1, d)
    den = (m - 1) * d + n
    q, r = divmod(num, den)
    assert r == 0
    return q


def _check_params(m: int, n: int, d: int = 0) -> None:
    if m < 1 or n < 1 or d < 0:
        raise DomainError(f"need m >= 1, n >= 1, d >= 0 (got m={m}, n={n}, d={d})")


def compare_nodes(a: NodeRef, b: NodeRef) -> int:
    """Three-way comparison of nodes ``(k, w)``: component first, then word."""
    return (a > b) - (a < b)


def tree_key(tree: Tree) -> tuple:
    return (-len(tree), tree)


def is_tree(words) -> bool:
    s = set(words)
    return all(w[:-1] in s for w in s if w)


@dataclass(frozen=True)
class Forest:
    """An n-tuple of m-ary trees, each a sorted tuple of words."""

    m: int
    trees: tuple

    @classmethod
    def from_words(cls, m: int, trees: Sequence) -> "Forest":
        if m < 1:
            raise DomainError(f"arity must be >= 1, got {m}")
        if len(trees) < 1:
            raise DomainError("a forest needs at least one root")
        canon = []
        for tree in trees:
            words = sorted({tuple(w) for w in tree})
            for w in words:
                if any(not (1 <= i <= m) for i in w):
                    raise DomainError(f"word {format_word(w)} has a letter outside 1..{m}")
            if not is_tree(words):
                raise DomainError(f"word set {[format_word(w) for w in words]} is not prefix-closed")
            canon.append(tuple(words))
        return cls(m, tuple(canon))

    @classmethod
    def empty(cls, m: int, n: int) -> "Forest":
        _check_params(m, n)
        return cls(m, ((),) * n)

    @property
    def n(self) -> int:
        return len(self.trees)

    @property
    def size(self) -> int:
        return sum(len(t) for t in self.trees)

    def nodes(self) -> list:
        """All nodes ``(k, w)`` in node order."""
        return [(k, w) for k, tree in enumerate(self.trees, 1) for w in tree]

    def __contains__(self, node) -> bool:
        k, w = node
        return 1 <= k <= self.n and w in self.trees[k - 1]

    @property
    def sort_key(self) -> tuple:
        return tuple(tree_key(t) for t in self.trees)

    def __str__(self) -> str:
        return format_forest(self)


def compare_forests(a: Forest, b: Forest) -> int:
    if a.m != b.m or a.n != b.n:
        raise DomainError(f"cannot compare forests with (m,n)=({a.m},{a.n}) and ({b.m},{b.n})")
    ka, kb = a.sort_key, b.sort_key
    return (ka > kb) - (ka < kb)


def _tree_critical(tree: Tree, m: int) -> list:
    if not tree:
        return [()]
    members = set(tree)
    return [w + (i,) for w in tree for i in range(1, m + 1) if w + (i,) not in members]


def critical_set(forest: Forest) -> list:
    """Critical pairs: missing children of nodes, and roots of empty components."""
    out = []
    for k, tree in enumerate(forest.trees, 1):
        out.extend((k, w) for w in sorted(_tree_critical(tree, forest.m)))
    return out


def d_pairs(forest: Forest) -> list:
    """All (node, critical pair) with node < critical, ordered by target then source."""
    nodes = forest.nodes()
    pairs = []
    for c in critical_set(forest):
        for x in nodes:
            if x >= c:
                break
            pairs.append((x, c))
    return pairs


def d_stat(forest: Forest) -> int:
    """Cell dimension: number of (node, critical) pairs with node before critical."""
    events = [(x, 0) for x in forest.nodes()] + [(c, 1) for c in critical_set(forest)]
    events.sort()
    seen = total = 0
    for _, is_critical in events:
        if is_critical:
            total += seen
        else:
            seen += 1
    return total


def d_shift(m: int, size: int) -> int:
    """Quadratic part removed from the cell dimension to normalize it."""
    return (m - 1) * size * (size + 1) // 2 + size


def d_prime(forest: Forest) -> int:
    return d_stat(forest) - d_shift(forest.m, forest.size)


def max_d_prime(m: int, n: int, d: int) -> int:
    return (m - 1) * d * (d - 1) // 2 + (n - 1) * d


def graft(children: Sequence[Tree]) -> Tree:
    """Join the trees ``children`` (one per letter) under a new root."""
    words = [()]
    for i, child in enumerate(children, 1):
        words.extend((i,) + w for w in child)
    return tuple(words)


def ungraft(tree: Tree, m: int) -> list:
    if not tree:
        raise DomainError("cannot ungraft the empty tree")
    return [tuple(w[1:] for w in tree if w and w[0] == i) for i in range(1, m + 1)]


def compositions(total: int, parts: int) -> Iterator[tuple]:
    """Weak compositions of ``total`` into ``parts`` parts, first part descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def trees(m: int, d: int) -> tuple:
    """All m-ary trees with d nodes, sorted in the tree order."""
    if d == 0:
        return ((),)
    out = []
    for sizes in compositions(d - 1, m):
        for children in itertools.product(*(trees(m, s) for s in sizes)):
            out.append(graft(children))
    out.sort()
    return tuple(out)


def forest_blocks(m: int, n: int, d: int) -> list:
    """Component-size vectors partitioning F_{d,n}; listed in forest order.

    Each block is a contiguous run of ``enumerate_forests``, so blocks can be
    processed independently and concatenated.
    """
    _check_params(m, n, d)
    return list(compositions(d, n))


def iter_forests(m: int, n: int, d: int, block: tuple | None = None) -> Iterator[Forest]:
    """Lazily yield forests in increasing order (optionally a single block)."""
    blocks = forest_blocks(m, n, d) if block is None else [tuple(block)]
    for sizes in blocks:
        for combo in itertools.product(*(trees(m, s) for s in sizes)):
            yield Forest(m, combo)


def enumerate_forests(m: int, n: int, d: int, max_count: int = DEFAULT_MAX_COUNT) -> list:
    count = forest_count(m, n, d)
    if count > max_count:
        raise CapExceededError(f"enumerating F_{{{d},{n}}}^({m})", count, max_count)
    return list(iter_forests(m, n, d))


def to_plane_forest(forest: Forest) -> Forest:
    """Add every critical pair as a leaf: a plane forest with m*d + n nodes."""
    crit = critical_set(forest)
    grown = [list(t) for t in forest.trees]
    for k, w in crit:
        grown[k - 1].append(w)
    return Forest(forest.m, tuple(tuple(sorted(t)) for t in grown))


def is_plane(forest: Forest) -> bool:
    m = forest.m
    for tree in forest.trees:
        members = set(tree)
        for w in tree:
            kids = sum(w + (i,) in members for i in range(1, m + 1))
            if kids not in (0, m):
                return False
    return True


def from_plane_forest(plane: Forest) -> Forest:
    """Keep the nodes with all m children; inverse of ``to_plane_forest``."""
    if not is_plane(plane):
        raise DomainError(f"forest {format_forest(plane)} is not plane")
    if any(not t for t in plane.trees):
        raise DomainError("plane forest with an empty component is not the image of any forest")
    m = plane.m
    kept = []
    for tree in plane.trees:
        members = set(tree)
        kept.append(tuple(w for w in tree if w + (1,) in members))
    return Forest(m, tuple(kept))


def iter_paths(m: int, n: int, d: int) -> Iterator[LatticePath]:
    """Nondecreasing sequences with 0 <= h_i <= (m-1)(i-1) + n-1, i = 1..d."""
    _check_params(m, n, d)

    def rec(prefix: tuple, low: int) -> Iterator[tuple]:
        i = len(prefix) + 1
        if i > d:
            yield prefix
            return
        for h in range(low, (m - 1) * (i - 1) + n):
            yield from rec(prefix + (h,), h)

    yield from rec((), 0)


def enumerate_paths(m: int, n: int, d: int, max_count: int = DEFAULT_MAX_COUNT) -> list:
    count = forest_count(m, n, d)
    if count > max_count:
        raise CapExceededError(f"enumerating lattice paths ({m},{n},{d})", count, max_count)
    return list(iter_paths(m, n, d))


def coarea(path: LatticePath, m: int, n: int) -> int:
    return max_d_prime(m, n, len(path)) - sum(path)


def format_word(w: Word) -> str:
    return ".".join(map(str, w)) if w else "e"


def format_forest(forest: Forest) -> str:
    return ";".join(",".join(format_word(w) for w in sorted(t)) if t else "-" for t in forest.trees)


def _parse_word(text: str, m: int) -> Word:
    if text == "e":
        return ()
    letters = []
    for part in text.split("."):
        if not part.isdigit() or not part.isascii():
            raise ForestParseError(f"bad letter {part!r} in word {text!r}")
        i = int(part)
        if not 1 <= i <= m:
            raise ForestParseError(f"letter {i} in word {text!r} outside 1..{m}")
        letters.append(i)
    return tuple(letters)


def parse_forest(text: str, m: int, n: int | None = None) -> Forest:
    """Parse ``tree;tree;...`` where a tree is ``-`` or comma-separated words."""
    if not text or any(c.isspace() for c in text):
        raise ForestParseError(f"empty text or whitespace in forest {text!r}")
    trees_ = []
    for part in text.split(";"):
        if part == "-":
            trees_.append(())
            continue
        if not part:
            raise ForestParseError(f"empty tree field in {text!r} (use '-')")
        words = [_parse_word(t, m) for t in part.split(",")]
        if len(set(words)) != len(words):
            raise ForestParseError(f"duplicate word in tree {part!r}")
        members = set(words)
        for w in sorted(words):
            if w and w[:-1] not in members:
                raise ForestParseError(
                    f"word {format_word(w)} lacks its prefix {format_word(w[:-1])}"
                )
        trees_.append(tuple(sorted(words)))
    if n is not None and len(trees_) != n:
        raise ForestParseError(f"expected {n} trees, got {len(trees_)}")
    return Forest(m, tuple(trees_))
