"""Exact dense linear algebra over prime fields and the rationals."""
from __future__ import annotations

import random
from fractions import Fraction

from .errors import DomainError


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.name = f"Fp:{p}"

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def parse(self, text: str) -> int:
        return self(Fraction(text))

    def format(self, x) -> str:
        return str(self(x))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class RationalField:
    name = "Q"

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, x: Fraction) -> Fraction:
        return 1 / Fraction(x)

    def random(self, rng: random.Random) -> Fraction:
        # small heights keep elimination cheap; zero is deliberately possible
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def parse(self, text: str) -> Fraction:
        return Fraction(text)

    def format(self, x) -> str:
        return str(Fraction(x))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "RationalField()"


QQ = RationalField()


def field_from_name(name: str):
    if name == "Q":
        return QQ
    if name.startswith("Fp:"):
        return PrimeField(int(name[3:]))
    raise DomainError(f"unknown field {name!r} (use 'Q' or 'Fp:<p>')")


def mat_vec(a: list, v: list, field) -> list:
    return [field(sum(x * y for x, y in zip(row, v))) for row in a]


def column(a: list, j: int) -> list:
    return [row[j] for row in a]


class Span:
    """Incrementally grown subspace kept in reduced echelon form."""

    def __init__(self, field, dim: int):
        self.field = field
        self.dim = dim
        self.rows = []  # (pivot index, normalized vector)

    def reduce(self, v: list) -> list:
        f = self.field
        v = [f(x) for x in v]
        for piv, row in self.rows:
            c = v[piv]
            if c:
                v = [f(x - c * y) for x, y in zip(v, row)]
        return v

    def contains(self, v: list) -> bool:
        return not any(self.reduce(v))

    def add(self, v: list) -> bool:
        """Add v; return True if it was independent of the span."""
        r = self.reduce(v)
        piv = next((i for i, x in enumerate(r) if x), None)
        if piv is None:
            return False
        inv = self.field.inv(r[piv])
        r = [self.field(x * inv) for x in r]
        reduced = []
        for p, row in self.rows:
            c = row[piv]
            if c:
                row = [self.field(x - c * y) for x, y in zip(row, r)]
            reduced.append((p, row))
        reduced.append((piv, r))
        self.rows = reduced
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def solve(cols: list, v: list, field) -> list | None:
    """Coordinates x with sum_j x_j cols[j] = v, or None when cols are dependent."""
    n = len(cols)
    dim = len(v)
    # augmented matrix with unknowns as columns
    aug = [[field(cols[j][i]) for j in range(n)] + [field(v[i])] for i in range(dim)]
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, dim) if aug[i][c]), None)
        if pr is None:
            return None
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = field.inv(aug[r][c])
        aug[r] = [field(x * inv) for x in aug[r]]
        for i in range(dim):
            if i != r and aug[i][c]:
                k = aug[i][c]
                aug[i] = [field(x - k * y) for x, y in zip(aug[i], aug[r])]
        r += 1
    if any(aug[i][n] for i in range(r, dim)):
        raise DomainError("vector is not in the span of the columns")
    return [aug[i][n] for i in range(n)]


def rank(vectors: list, field, dim: int) -> int:
    s = Span(field, dim)
    for v in vectors:
        s.add(v)
    return s.rank
