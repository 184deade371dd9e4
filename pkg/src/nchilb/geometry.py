"""Cells, charts and normal forms of points (f, phi_1..phi_m), plus the
variety-level counts they imply.

A point consists of a d x n matrix ``f`` whose k-th column is f(v_k), and m
square matrices ``phi``. For a word w = (i_1 ... i_s) the vector
phi_w f(v_k) is obtained by applying phi_{i_1} first. Basis vectors of a
normal form are indexed by the nodes of the forest in node order.
"""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field as dc_field

from .errors import CapExceededError, DomainError, NotInChartError, UnstablePointError
from .forest_core import (
    DEFAULT_MAX_COUNT,
    Forest,
    critical_set,
    d_pairs,
    d_stat,
    forest_count,
    format_word,
    iter_forests,
)
from .linalg import QQ, Span, field_from_name, mat_vec, solve
from .qseries import QPolynomial


def ambient_dimension(m: int, n: int, d: int) -> int:
    return n * d + (m - 1) * d * d


def euler_closed_form(m: int, n: int, d: int) -> int:
    """n/((m-1)d+n) * binom(md+n-1, d), divided last."""
    return forest_count(m, n, d)


def _guard(m: int, n: int, d: int, max_count: int) -> None:
    count = forest_count(m, n, d)
    if count > max_count:
        raise CapExceededError(f"cells of H_{{{d},{n}}}^({m})", count, max_count)


def cell_dimensions(m: int, n: int, d: int, max_count: int = DEFAULT_MAX_COUNT) -> Counter:
    _guard(m, n, d, max_count)
    return Counter(d_stat(F) for F in iter_forests(m, n, d))


@dataclass
class BettiTable:
    m: int
    n: int
    d: int
    betti: list
    intersection: QPolynomial

    @property
    def euler(self) -> int:
        return sum(self.betti)

    @property
    def poincare(self) -> QPolynomial:
        return QPolynomial(self.betti)

    def rows(self) -> list:
        return [(self.d, k, b) for k, b in enumerate(self.betti)]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "d": self.d,
            "rows": [{"d": d, "k": k, "b_k": str(b)} for d, k, b in self.rows()],
            "intersection": [str(c) for c in self.intersection.coeffs],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d", "k", "b_k"])
        w.writerows(self.rows())
        return buf.getvalue()


def betti_numbers(m: int, n: int, d: int, max_count: int = DEFAULT_MAX_COUNT) -> BettiTable:
    """Cohomology Betti numbers: each cell of dimension c adds 1 to b_{2(N-c)}."""
    dims = cell_dimensions(m, n, d, max_count)
    top = ambient_dimension(m, n, d)
    betti = [0] * (2 * top + 1)
    inter = [0] * (top + 1)
    for c, mult in dims.items():
        betti[2 * (top - c)] += mult
        inter[c] += mult
    return BettiTable(m, n, d, betti, QPolynomial(inter))


def predicted_point_count(m: int, n: int, d: int, q: int, max_count: int = DEFAULT_MAX_COUNT) -> int:
    """Number of F_q-points: each cell is an affine space of dimension d(F)."""
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    return sum(mult * q**c for c, mult in cell_dimensions(m, n, d, max_count).items())


@dataclass
class CellPoint:
    m: int
    n: int
    d: int
    field: object
    f: list
    phi: list

    def __post_init__(self):
        if len(self.f) != self.d or any(len(r) != self.n for r in self.f):
            raise DomainError(f"f must be {self.d} x {self.n}")
        if len(self.phi) != self.m or any(
            len(a) != self.d or any(len(r) != self.d for r in a) for a in self.phi
        ):
            raise DomainError(f"phi must be {self.m} matrices of size {self.d} x {self.d}")
        F = self.field
        self.f = [[F(x) for x in row] for row in self.f]
        self.phi = [[[F(x) for x in row] for row in a] for a in self.phi]

    def f_column(self, k: int) -> list:
        return [row[k - 1] for row in self.f]

    def word_vector(self, k: int, w: tuple) -> list:
        v = self.f_column(k)
        for i in w:
            v = mat_vec(self.phi[i - 1], v, self.field)
        return v

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "m": self.m,
            "n": self.n,
            "d": self.d,
            "field": self.field.name,
            "f": [[fmt(x) for x in row] for row in self.f],
            "phi": [[[fmt(x) for x in row] for row in a] for a in self.phi],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CellPoint":
        F = field_from_name(data["field"])
        return cls(
            int(data["m"]), int(data["n"]), int(data["d"]), F,
            [[F.parse(str(x)) for x in row] for row in data["f"]],
            [[[F.parse(str(x)) for x in row] for row in a] for a in data["phi"]],
        )


class _Vectors:
    """Memoized phi_w f(v_k) for one point."""

    def __init__(self, p: CellPoint):
        self.p = p
        self.cache = {}

    def __call__(self, k: int, w: tuple) -> list:
        key = (k, w)
        v = self.cache.get(key)
        if v is None:
            if w:
                v = mat_vec(self.p.phi[w[-1] - 1], self(k, w[:-1]), self.p.field)
            else:
                v = self.p.f_column(k)
            self.cache[key] = v
        return v


@dataclass(frozen=True)
class NormalFormTemplate:
    """Entries are 0, 1, or a D-pair whose lambda value goes there."""

    f: tuple
    phi: tuple

    def free_entries(self) -> list:
        out = [e for row in self.f for e in row if isinstance(e, tuple)]
        out += [e for a in self.phi for row in a for e in row if isinstance(e, tuple)]
        return out


def normal_form_template(forest: Forest) -> NormalFormTemplate:
    m, n = forest.m, forest.n
    nodes = forest.nodes()
    d = len(nodes)
    index = {x: i for i, x in enumerate(nodes)}

    def spread(target, mat, col):
        for x in nodes:
            if x >= target:
                break
            mat[index[x]][col] = (x, target)

    f = [[0] * n for _ in range(d)]
    for k, tree in enumerate(forest.trees, 1):
        if tree:
            f[index[(k, ())]][k - 1] = 1
        else:
            spread((k, ()), f, k - 1)
    phi = [[[0] * d for _ in range(d)] for _ in range(m)]
    for (k, w), col in index.items():
        for i in range(1, m + 1):
            child = (k, w + (i,))
            if child in index:
                phi[i - 1][index[child]][col] = 1
            else:
                spread(child, phi[i - 1], col)
    return NormalFormTemplate(
        tuple(tuple(r) for r in f), tuple(tuple(tuple(r) for r in a) for a in phi)
    )


def cell_pattern(forest: Forest) -> tuple:
    """The normal form with every free entry shown as a box."""
    t = normal_form_template(forest)
    show = lambda e: "□" if isinstance(e, tuple) else str(e)
    return (
        [[show(e) for e in row] for row in t.f],
        [[[show(e) for e in row] for row in a] for a in t.phi],
    )


def _check_lambda(forest: Forest, lam: dict) -> None:
    expected = set(d_pairs(forest))
    if set(lam) != expected:
        missing = expected - set(lam)
        extra = set(lam) - expected
        raise DomainError(
            f"lambda domain mismatch: {len(missing)} missing, {len(extra)} unexpected pairs"
        )


def random_lambda(forest: Forest, field, rng) -> dict:
    return {pair: field.random(rng) for pair in d_pairs(forest)}


def normal_form_from_cell(forest: Forest, lam: dict, field=QQ) -> CellPoint:
    _check_lambda(forest, lam)
    t = normal_form_template(forest)
    val = lambda e: lam[e] if isinstance(e, tuple) else e
    return CellPoint(
        forest.m, forest.n, forest.size, field,
        [[val(e) for e in row] for row in t.f],
        [[[val(e) for e in row] for row in a] for a in t.phi],
    )


def _node_basis(p: CellPoint, forest: Forest, vec: _Vectors) -> list:
    if (forest.m, forest.n, forest.size) != (p.m, p.n, p.d):
        raise DomainError("forest parameters do not match the point")
    return [vec(k, w) for k, w in forest.nodes()]


def in_chart(p: CellPoint, forest: Forest, _vec: _Vectors | None = None) -> bool:
    vec = _vec or _Vectors(p)
    s = Span(p.field, p.d)
    return all(s.add(v) for v in _node_basis(p, forest, vec))


def chart_coordinates(p: CellPoint, forest: Forest) -> dict:
    """All coefficients of phi_w' f(v_l), (l,w') critical, in the node basis."""
    vec = _Vectors(p)
    nodes = forest.nodes()
    basis = _node_basis(p, forest, vec)
    out = {}
    for c in critical_set(forest):
        coords = solve(basis, vec(*c), p.field)
        if coords is None:
            raise NotInChartError(f"point is not in the chart of {forest}")
        for x, a in zip(nodes, coords):
            out[(x, c)] = a
    return out


def in_cell(p: CellPoint, forest: Forest) -> bool:
    """Chart membership plus: each critical vector lies in the span of earlier node vectors."""
    try:
        coords = chart_coordinates(p, forest)
    except NotInChartError:
        return False
    return all(not a for (x, c), a in coords.items() if x >= c)


def lambda_coordinates(p: CellPoint, forest: Forest) -> dict:
    """Chart coordinates of p; restricted to D(forest) when p lies in the cell."""
    coords = chart_coordinates(p, forest)
    if all(not a for (x, c), a in coords.items() if x >= c):
        return {(x, c): a for (x, c), a in coords.items() if x < c}
    return coords


def is_stable(p: CellPoint) -> bool:
    """Whether the columns of f generate W under phi_1..phi_m."""
    span = Span(p.field, p.d)
    frontier = [v for v in (p.f_column(k) for k in range(1, p.n + 1)) if span.add(v)]
    while frontier and span.rank < p.d:
        nxt = []
        for v in frontier:
            for a in p.phi:
                u = mat_vec(a, v, p.field)
                if span.add(u):
                    nxt.append(u)
        frontier = nxt
    return span.rank == p.d


def greedy_forest(p: CellPoint) -> Forest:
    """Grow a forest in node order, keeping each word whose vector is new.

    Words are visited depth-first, which is exactly the lexicographic order;
    a rejected word's descendants are never visited.
    """
    vec = _Vectors(p)
    span = Span(p.field, p.d)
    trees = []
    for k in range(1, p.n + 1):
        kept = []
        stack = [()]
        while stack:
            w = stack.pop()
            if span.rank < p.d and span.add(vec(k, w)):
                kept.append(w)
                stack.extend(w + (i,) for i in range(p.m, 0, -1))
        trees.append(tuple(sorted(kept)))
    if span.rank < p.d:
        raise UnstablePointError("point is unstable")
    return Forest(p.m, tuple(trees))


def classify_cell(p: CellPoint, max_count: int = DEFAULT_MAX_COUNT) -> Forest:
    """The forest F with p in Z_F: the first forest in order whose chart holds p."""
    if not is_stable(p):
        raise UnstablePointError("point is unstable: f does not generate W")
    _guard(p.m, p.n, p.d, max_count)
    vec = _Vectors(p)
    for forest in iter_forests(p.m, p.n, p.d):
        if in_chart(p, forest, vec):
            return forest
    raise UnstablePointError("no chart contains the point")


@dataclass
class SubmoduleGenerator:
    lead: tuple
    tail: dict = dc_field(default_factory=dict)

    def format(self, field=QQ) -> str:
        def term(node):
            k, w = node
            return f"x_{format_word(w)}*v{k}" if w else f"v{k}"

        s = term(self.lead)
        for node, c in self.tail.items():
            if not c:
                continue
            neg = field is QQ and c < 0
            text = field.format(-c if neg else c)
            coeff = "" if text == "1" else text + "*"
            s += f" {'+' if neg else '-'} {coeff}{term(node)}"
        return s


def submodule_generators(forest: Forest, lam: dict) -> list:
    """One generator x_{w'} v_l - sum lambda x_w v_k per critical pair (l, w')."""
    _check_lambda(forest, lam)
    gens = {c: SubmoduleGenerator(c) for c in critical_set(forest)}
    for (x, c) in d_pairs(forest):
        gens[c].tail[x] = lam[(x, c)]
    return list(gens.values())


def apply_generator(p: CellPoint, gen: SubmoduleGenerator) -> list:
    """Image of a generator under A (x) V -> W; zero when it lies in the kernel."""
    vec = _Vectors(p)
    out = vec(*gen.lead)
    for node, c in gen.tail.items():
        out = [p.field(a - c * b) for a, b in zip(out, vec(*node))]
    return out


def point_to_json(p: CellPoint) -> str:
    return json.dumps(p.to_json(), sort_keys=True)


def lambda_to_json(lam: dict, field) -> list:
    return [
        {"source": [x[0], format_word(x[1])], "target": [c[0], format_word(c[1])], "value": field.format(a)}
        for (x, c), a in sorted(lam.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    ]
