"""Brute-force point counts over prime fields.

Every tuple (f, phi_1..phi_m) over F_p is enumerated, the stable ones are
counted, and the count is divided by |GL_d(F_p)| (the action on stable
tuples is free). The arithmetic here is deliberately self-contained and does
not reuse the chart machinery it is meant to check.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .errors import CapExceededError, DomainError
from .forest_core import format_forest, iter_forests

DEFAULT_MAX_SPACE = 2**26
MAX_DEFAULT_PRIME = 7


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p**0.5) + 1))


def gl_order(d: int, p: int) -> int:
    """Order of GL_d(F_p)."""
    if d < 0 or not _is_prime(p):
        raise DomainError(f"need d >= 0 and p prime (got d={d}, p={p})")
    out = 1
    for i in range(d):
        out *= p**d - p**i
    return out


def search_space(m: int, n: int, d: int, p: int) -> int:
    return p ** (n * d + m * d * d)


@dataclass
class CensusReport:
    m: int
    n: int
    d: int
    p: int
    stable_tuples: int
    gl_order: int
    point_count: int | None
    per_cell: dict | None = field(default=None)

    @property
    def free_action(self) -> bool:
        return self.stable_tuples % self.gl_order == 0

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "stableTupleCount": str(self.stable_tuples),
            "glOrder": str(self.gl_order),
            "pointCount": None if self.point_count is None else str(self.point_count),
        }
        if self.per_cell is not None:
            out["perCell"] = {k: None if v is None else str(v) for k, v in self.per_cell.items()}
        return out


def _reduce(v, basis, p):
    v = list(v)
    for piv, row in basis:
        c = v[piv]
        if c:
            v = [(x - c * y) % p for x, y in zip(v, row)]
    return v


def _insert(v, basis, p) -> bool:
    r = _reduce(v, basis, p)
    for piv, x in enumerate(r):
        if x:
            inv = pow(x, -1, p)
            basis.append((piv, [(y * inv) % p for y in r]))
            return True
    return False


def _apply(a, v, p):
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in a)


def _stable(cols, phis, p, d) -> bool:
    basis = []
    queue = list(cols)
    while queue and len(basis) < d:
        v = queue.pop()
        if _insert(v, basis, p):
            queue.extend(_apply(a, v, p) for a in phis)
    return len(basis) == d


def _matrices(d: int, p: int, count: int):
    """All tuples of ``count`` d x d matrices, entries row-major."""
    for flat in itertools.product(range(p), repeat=count * d * d):
        yield tuple(
            tuple(tuple(flat[(k * d + r) * d:(k * d + r + 1) * d]) for r in range(d))
            for k in range(count)
        )


def _check_budget(m, n, d, p, max_space, max_prime):
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p > max_prime:
        raise CapExceededError(f"prime {p}", p, max_prime)
    if m < 1 or n < 1 or d < 0:
        raise DomainError(f"need m >= 1, n >= 1, d >= 0 (got {m}, {n}, {d})")
    space = search_space(m, n, d, p)
    if space > max_space:
        raise CapExceededError(f"brute force over F_{p}^{n * d + m * d * d}", space, max_space)


def _f_blocks(n: int, d: int, p: int, parts: int, part: int):
    """Nonzero f matrices (as column tuples) assigned to one partition."""
    for idx, flat in enumerate(itertools.product(range(p), repeat=n * d)):
        if idx % parts != part or not any(flat):
            continue
        # flat is row-major d x n; return columns f(v_1)..f(v_n)
        yield tuple(tuple(flat[r * n + k] for r in range(d)) for k in range(n))


def _word_vector(cols, phis, k, w, p, cache):
    key = (k, w)
    if key not in cache:
        if w:
            cache[key] = _apply(phis[w[-1] - 1], _word_vector(cols, phis, k, w[:-1], p, cache), p)
        else:
            cache[key] = cols[k - 1]
    return cache[key]


def _first_chart(cols, phis, forests, p):
    cache = {}
    for forest in forests:
        basis = []
        if all(
            _insert(_word_vector(cols, phis, k, w, p, cache), basis, p)
            for k, tree in enumerate(forest.trees, 1)
            for w in tree
        ):
            return forest
    raise AssertionError("stable point outside every chart")


def _run(m, n, d, p, max_space, max_prime, parts, part, census):
    _check_budget(m, n, d, p, max_space, max_prime)
    if not 0 <= part < parts:
        raise DomainError(f"part {part} out of range for {parts} parts")
    order = gl_order(d, p)
    if d == 0:
        per = {format_forest(next(iter_forests(m, n, 0))): 1} if census else None
        return CensusReport(m, n, d, p, 1 if part == 0 else 0, order, 1 if part == 0 else 0, per)
    forests = list(iter_forests(m, n, d)) if census else None
    stable = 0
    per_cell = Counter()
    phi_tuples = list(_matrices(d, p, m))
    for cols in _f_blocks(n, d, p, parts, part):
        for phis in phi_tuples:
            if _stable(cols, phis, p, d):
                stable += 1
                if census:
                    per_cell[_first_chart(cols, phis, forests, p)] += 1
    if parts > 1:
        # a slice is not GL-stable; divisibility only holds for the combined count
        return CensusReport(m, n, d, p, stable, order, None, None)
    # a count that GL does not divide is reported as None instead of being rounded
    per = None
    if census:
        per = {}
        for forest in forests:
            c = per_cell.get(forest, 0)
            per[format_forest(forest)] = None if c % order else c // order
    return CensusReport(m, n, d, p, stable, order, None if stable % order else stable // order, per)


def brute_force_count(m: int, n: int, d: int, p: int, max_space: int = DEFAULT_MAX_SPACE,
                      max_prime: int = MAX_DEFAULT_PRIME, parts: int = 1, part: int = 0) -> CensusReport:
    """Count F_p-points of H_{d,n}^(m) by testing every tuple for stability.

    With ``parts > 1`` only the slice ``part`` of the search space (split on
    the f block) is visited; slice counts add up to the full count.
    """
    return _run(m, n, d, p, max_space, max_prime, parts, part, census=False)


def combine_slices(slices: list) -> CensusReport:
    """Merge the partial reports of every slice of one search space."""
    first = slices[0]
    stable = sum(s.stable_tuples for s in slices)
    order = first.gl_order
    return CensusReport(first.m, first.n, first.d, first.p, stable, order,
                        None if stable % order else stable // order)


def cell_census(m: int, n: int, d: int, p: int, max_space: int = DEFAULT_MAX_SPACE,
                max_prime: int = MAX_DEFAULT_PRIME) -> CensusReport:
    """Like ``brute_force_count`` but also sorts points into cells.

    A stable tuple belongs to the cell of the first forest (in forest order)
    whose node vectors form a basis.
    """
    return _run(m, n, d, p, max_space, max_prime, 1, 0, census=True)
