"""Truncated power series in t whose coefficients are exact polynomials in q.

The normalized generating function ``zeta_bar(m, n)`` counts forests by
size (power of t) and normalized cell dimension d' (power of q). For n = 1 it
is the unique solution of ``Z(t) = 1 + t * prod_{i<m} Z(q^i t)``, which is
solved here degree by degree. No series is ever divided: identities that
involve quotients are checked after clearing denominators.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .errors import DomainError
from .forest_core import d_shift, forest_count
from .report import Report


class QPolynomial:
    """Immutable polynomial in q with exact (int or Fraction) coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, k: int, c=1) -> "QPolynomial":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QPolynomial([other])
        return isinstance(other, QPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"QPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if mon and c == 1:
                terms.append(mon)
            elif mon and c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{c}{'*' + mon if mon else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPolynomial(out)

    def __neg__(self) -> "QPolynomial":
        return QPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "QPolynomial":
        if not isinstance(other, QPolynomial):
            return QPolynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPolynomial(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "QPolynomial":
        """Multiply by q^k."""
        if not self.coeffs or k == 0:
            return self
        return QPolynomial((0,) * k + self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def taylor_at_one(self, jmax: int) -> "MomentJet":
        return MomentJet(
            tuple(sum(comb(k, j) * c for k, c in enumerate(self.coeffs)) for j in range(jmax + 1))
        )


ZERO = QPolynomial()
ONE = QPolynomial([1])


def q_pochhammer(lo: int, hi: int) -> QPolynomial:
    """prod_{i=lo}^{hi} (1 - q^i); empty product is 1."""
    out = ONE
    for i in range(lo, hi + 1):
        out = out * QPolynomial([1] + [0] * (i - 1) + [-1])
    return out


@dataclass(frozen=True)
class QFraction:
    """Exact quotient of two q-polynomials; compared by cross-multiplication."""

    num: QPolynomial
    den: QPolynomial

    def __eq__(self, other) -> bool:
        if not isinstance(other, QFraction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):  # equality is up to scaling
        raise TypeError("QFraction is unhashable")

    def __str__(self) -> str:
        return f"({self.num})/({self.den})"


@dataclass(frozen=True)
class TSeries:
    """Power series in t truncated after t^dmax; coefficients are QPolynomials."""

    dmax: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.dmax + 1:
            raise DomainError(f"TSeries needs {self.dmax + 1} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_list(cls, coeffs: Sequence, dmax: int | None = None) -> "TSeries":
        if dmax is None:
            dmax = len(coeffs) - 1
        c = [x if isinstance(x, QPolynomial) else QPolynomial(x) for x in coeffs[: dmax + 1]]
        c += [ZERO] * (dmax + 1 - len(c))
        return cls(dmax, tuple(c))

    def __getitem__(self, d: int) -> QPolynomial:
        return self.coeffs[d]

    def __add__(self, other: "TSeries") -> "TSeries":
        dmax = min(self.dmax, other.dmax)
        return TSeries(dmax, tuple(self[d] + other[d] for d in range(dmax + 1)))

    def __mul__(self, other: "TSeries") -> "TSeries":
        dmax = min(self.dmax, other.dmax)
        out = []
        for d in range(dmax + 1):
            acc = ZERO
            for a in range(d + 1):
                if self[a] and other[d - a]:
                    acc = acc + self[a] * other[d - a]
            out.append(acc)
        return TSeries(dmax, tuple(out))

    def substitute_qt(self, i: int) -> "TSeries":
        """The series Z(q, q^i t)."""
        return TSeries(self.dmax, tuple(c.shift(i * d) for d, c in enumerate(self.coeffs)))

    def at_q1(self) -> list:
        return [c(1) for c in self.coeffs]

    def to_json(self, m: int, n: int) -> dict:
        return {
            "m": m,
            "n": n,
            "dmax": self.dmax,
            "coeffs": [[str(c) for c in p.coeffs] for p in self.coeffs],
        }


def series_to_json(series: TSeries, m: int, n: int) -> str:
    return json.dumps(series.to_json(m, n), sort_keys=True)


def series_to_csv(series: TSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "k", "coefficient"])
    for d, p in enumerate(series.coeffs):
        for k, c in enumerate(p.coeffs):
            if c:
                w.writerow([d, k, c])
    return buf.getvalue()


def _check(m: int, n: int, dmax: int) -> None:
    if m < 1 or n < 1 or dmax < 0:
        raise DomainError(f"need m >= 1, n >= 1, dmax >= 0 (got {m}, {n}, {dmax})")


def _solve_tree_equation(m: int, dmax: int, one, mul, add, scale):
    """Degree-by-degree solution of Z = 1 + t * prod_{i<m} Z(q^i t).

    ``scale(x, i, b)`` multiplies a coefficient by q^(i*b). Partial products
    ``prod_{j<=i} Z(q^j t)`` are extended by one degree per step, so each new
    coefficient costs m convolutions.
    """
    f = [one]
    partial = [[] for _ in range(m)]
    scaled = [[] for _ in range(m)]
    for d in range(1, dmax + 1):
        b_new = d - 1
        for i in range(m):
            scaled[i].append(scale(f[b_new], i, b_new))
        partial[0].append(f[b_new])
        for i in range(1, m):
            acc = None
            prev = partial[i - 1]
            sc = scaled[i]
            for a in range(d):
                term = mul(prev[a], sc[d - 1 - a])
                acc = term if acc is None else add(acc, term)
            partial[i].append(acc)
        f.append(partial[m - 1][d - 1])
    return f


def zeta_bar_tree(m: int, dmax: int) -> TSeries:
    _check(m, 1, dmax)
    f = _solve_tree_equation(
        m, dmax, ONE, lambda x, y: x * y, lambda x, y: x + y, lambda x, i, b: x.shift(i * b)
    )
    return TSeries(dmax, tuple(f))


def zeta_bar(m: int, n: int, dmax: int) -> TSeries:
    """Sum of q^{d'(F)} t^{|F|} over all m-ary forests with n roots."""
    _check(m, n, dmax)
    tree = zeta_bar_tree(m, dmax)
    out = tree
    for i in range(1, n):
        out = out * tree.substitute_qt(i)
    return out


def zeta_unmodified(m: int, n: int, dmax: int) -> TSeries:
    """Sum of q^{d(F)} t^{|F|}: the intersection-theory Poincare polynomials."""
    zb = zeta_bar(m, n, dmax)
    return TSeries(dmax, tuple(c.shift(d_shift(m, d)) for d, c in enumerate(zb.coeffs)))


def gamma_coefficient(m: int, d: int) -> QFraction:
    sign = -1 if d % 2 else 1
    return QFraction(QPolynomial.monomial(m * d * (d - 1) // 2, sign), q_pochhammer(1, d))


def gamma_series(m: int, dmax: int) -> list:
    """Coefficients of sum_d (-1)^d q^{m d(d-1)/2} t^d / ((1-q)...(1-q^d))."""
    if m < 1 or dmax < 0:
        raise DomainError(f"need m >= 1 and dmax >= 0 (got {m}, {dmax})")
    return [gamma_coefficient(m, d) for d in range(dmax + 1)]


def verify_gamma_identity(m: int, n: int, dmax: int) -> Report:
    """gamma(q, q^n t) = zeta_bar_n(q, t) * gamma(q, t), checked per degree.

    Degree d is multiplied through by (q;q)_d, which turns every term into a
    polynomial: the j-th term of the product contributes
    z_{d-j} (-1)^j q^{m j(j-1)/2} prod_{i=j+1}^{d} (1 - q^i).
    """
    z = zeta_bar(m, n, dmax)
    rep = Report(f"gamma identity m={m} n={n}")
    for d in range(dmax + 1):
        lhs = QPolynomial.monomial(m * d * (d - 1) // 2 + n * d, -1 if d % 2 else 1)
        rhs = ZERO
        for j in range(d + 1):
            term = q_pochhammer(j + 1, d).shift(m * j * (j - 1) // 2)
            rhs = rhs + (z[d - j] * term) * (-1 if j % 2 else 1)
        rep.add("gamma-ratio", ("gamma(q,q^n t)", "zeta_bar*gamma"), {"m": m, "n": n, "d": d},
                str(lhs), str(rhs), lhs == rhs)
    return rep


def continued_fraction_convergent(depth: int) -> tuple:
    """Numerator and denominator (t-polynomials with q-coefficients) of
    1/(1 - t/(1 - q t/(... /(1 - q^{depth-1} t))))."""
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    num, den = [ONE], [ONE]
    for j in range(depth - 1, -1, -1):
        new_den = list(den) + [ZERO] * (len(num) + 1 - len(den))
        for e, c in enumerate(num):
            new_den[e + 1] = new_den[e + 1] - c.shift(j)
        num, den = den, new_den
    return num, den


def continued_fraction_check(depth: int, dmax: int | None = None) -> Report:
    """zeta_bar(2,1) * den == num through t^depth."""
    dmax = depth if dmax is None else dmax
    num, den = continued_fraction_convergent(depth)
    z = zeta_bar_tree(2, dmax)
    rep = Report(f"continued fraction depth={depth}")
    for d in range(dmax + 1):
        lhs = ZERO
        for e in range(min(d, len(den) - 1) + 1):
            lhs = lhs + z[d - e] * den[e]
        rhs = num[d] if d < len(num) else ZERO
        rep.add("continued-fraction", ("zeta_bar*denominator", "numerator"),
                {"depth": depth, "d": d}, str(rhs), str(lhs), lhs == rhs)
    return rep


def _int_tree_numbers(m: int, dmax: int) -> list:
    return _solve_tree_equation(m, dmax, 1, lambda x, y: x * y, lambda x, y: x + y, lambda x, i, b: x)


def _int_series_power(u: list, n: int) -> list:
    out = [1] + [0] * (len(u) - 1)
    for _ in range(n):
        out = [sum(out[a] * u[d - a] for a in range(d + 1)) for d in range(len(u))]
    return out


def euler_numbers(m: int, n: int, dmax: int) -> list:
    """Euler characteristics chi(H_{d,n}) for d = 0..dmax from the q = 1 recursion."""
    _check(m, n, dmax)
    return _int_series_power(_int_tree_numbers(m, dmax), n)


@dataclass(frozen=True)
class MomentJet:
    """Taylor coefficients at q = 1 (value, f'(1), f''(1)/2!, ...) of a q-polynomial.

    For f = sum_F q^{s(F)} entry j equals sum_F binom(s(F), j).
    """

    values: tuple

    def __mul__(self, other: "MomentJet") -> "MomentJet":
        a, b = self.values, other.values
        return MomentJet(tuple(sum(a[i] * b[j - i] for i in range(j + 1)) for j in range(len(a))))

    def __add__(self, other: "MomentJet") -> "MomentJet":
        return MomentJet(tuple(x + y for x, y in zip(self.values, other.values)))

    @classmethod
    def of_monomial(cls, s: int, jmax: int) -> "MomentJet":
        return cls(tuple(comb(s, j) for j in range(jmax + 1)))

    def power_sums(self) -> list:
        """sum_F s(F)^j from the binomial sums, via Stirling numbers of the 2nd kind."""
        jmax = len(self.values) - 1
        return [
            sum(stirling2(j, i) * factorial(i) * self.values[i] for i in range(j + 1))
            for j in range(jmax + 1)
        ]


def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    row = [1] + [0] * k
    for i in range(1, n + 1):
        for j in range(min(i, k), 0, -1):
            row[j] = j * row[j] + row[j - 1]
        row[0] = 0
    return row[k]


def moment_jets(m: int, dmax: int, jmax: int) -> list:
    """Taylor jets at q = 1 of the coefficients of zeta_bar(m, 1)."""
    if m < 1 or dmax < 0 or jmax < 0:
        raise DomainError(f"bad arguments m={m}, dmax={dmax}, jmax={jmax}")
    one = MomentJet((1,) + (0,) * jmax)
    return _solve_tree_equation(
        m, dmax, one, lambda x, y: x * y, lambda x, y: x + y,
        lambda x, i, b: x * MomentJet.of_monomial(i * b, jmax),
    )


def moment_sums(m: int, dmax: int, jmax: int) -> list:
    """Table ``M[d][j] = sum over trees F with d nodes of d'(F)^j``."""
    if m < 2:
        raise DomainError("moment sums are only meaningful for m >= 2")
    return [jet.power_sums() for jet in moment_jets(m, dmax, jmax)]


def special_value_partial_sum(m: int, n: int, D: int) -> Fraction:
    """sum_{d<=D} chi(H_{d,n}) r^d with r = (m-1)^(m-1)/m^m; tends to (m/(m-1))^n."""
    if m < 2:
        raise DomainError("special value needs m >= 2")
    a, b = (m - 1) ** (m - 1), m**m
    total = 0
    for d in range(D + 1):
        total += forest_count(m, n, d) * a**d * b ** (D - d)
    return Fraction(total, b**D)
