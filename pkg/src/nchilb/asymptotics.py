"""Growth of the Euler characteristics and the Airy limit law of Betti numbers."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath

from .errors import DomainError
from .forest_core import forest_count
from .qseries import moment_sums


def _need_m(m: int) -> None:
    if m < 2:
        raise DomainError("asymptotics need m >= 2 (m = 1 grows polynomially)")


def growth_base(m: int) -> Fraction:
    """Exponential growth rate m^m / (m-1)^(m-1) of chi(H_{d,n}^(m))."""
    _need_m(m)
    return Fraction(m**m, (m - 1) ** (m - 1))


def asymptotic_constant(m: int, n: int) -> mpmath.mpf:
    """Prefactor A with chi ~ A d^(-3/2) growth_base^d."""
    _need_m(m)
    return n * mpmath.mpf(m) ** (n - mpmath.mpf(1) / 2) / (
        mpmath.sqrt(2 * mpmath.pi) * mpmath.mpf(m - 1) ** (n + mpmath.mpf(1) / 2)
    )


def asymptotic_chi(m: int, n: int, d: int) -> mpmath.mpf:
    if d < 1:
        raise DomainError("asymptotic estimate needs d >= 1")
    g = growth_base(m)
    return asymptotic_constant(m, n) * mpmath.mpf(d) ** -1.5 * (
        mpmath.mpf(g.numerator) / g.denominator
    ) ** d


def chi_ratio(m: int, n: int, d: int) -> float:
    """Exact chi divided by its first-order asymptotic estimate."""
    return float(mpmath.mpf(forest_count(m, n, d)) / asymptotic_chi(m, n, d))


def _gamma_half_odd(k: int) -> tuple:
    """Gamma((3k-1)/2) as (rational, power of sqrt(pi))."""
    twice = 3 * k - 1
    if twice % 2 == 0:
        return Fraction(factorial(twice // 2 - 1)), 0
    j = (twice - 1) // 2  # argument is j + 1/2, possibly negative
    if j >= 0:
        return Fraction(factorial(2 * j), 4**j * factorial(j)), 1
    j = -j
    return Fraction((-4) ** j * factorial(j), factorial(2 * j)), 1


@dataclass(frozen=True)
class AiryMoments:
    omegas: tuple
    exact: tuple  # E(X^k) = coefficient * sqrt(pi)^power
    moments: tuple


def airy_omegas(K: int) -> list:
    om = [Fraction(-1)]
    for k in range(1, K + 1):
        s = (3 * k - 4) * k * om[k - 1] + sum(comb(k, i) * om[i] * om[k - i] for i in range(1, k))
        om.append(s / 2)
    return om


def airy_moments(K: int) -> AiryMoments:
    """Moments of the Airy (Brownian excursion area) law for k = 0..K."""
    if K < 1:
        raise DomainError("need K >= 1")
    om = airy_omegas(K)
    exact = []
    for k, w in enumerate(om):
        g, g_pow = _gamma_half_odd(k)
        exact.append((2 * w / g, 1 - g_pow))
    moments = tuple(float(c) * math.sqrt(math.pi) ** p for c, p in exact)
    return AiryMoments(tuple(om), tuple(exact), moments)


def normalization(m: int, d: int) -> float:
    return math.sqrt(8 / (m * (m - 1))) * d**-1.5


@dataclass(frozen=True)
class LimitLawRow:
    d: int
    j: int
    mean: Fraction  # E[X_d^j]
    normalized: float
    target: float

    @property
    def gap(self) -> float:
        return self.normalized - self.target


@dataclass(frozen=True)
class LimitLawTrace:
    m: int
    rows: tuple

    def series(self, j: int) -> list:
        return [r for r in self.rows if r.j == j]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d", "j", "numerator", "denominator", "normalized", "airy", "gap"])
        for r in self.rows:
            w.writerow([r.d, r.j, r.mean.numerator, r.mean.denominator,
                        f"{r.normalized:.12g}", f"{r.target:.12g}", f"{r.gap:.12g}"])
        return buf.getvalue()


def limit_law_check(m: int, dlist, jmax: int = 2, table: list | None = None) -> LimitLawTrace:
    """Normalized moments of X_d (the normalized cell statistic of a random tree).

    ``table`` may supply precomputed ``moment_sums`` rows covering max(dlist).
    """
    _need_m(m)
    dlist = list(dlist)
    if any(b <= a for a, b in zip(dlist, dlist[1:])) or not dlist or dlist[0] < 1:
        raise DomainError("dlist must be increasing positive integers")
    if table is None or len(table) <= dlist[-1] or len(table[0]) <= jmax:
        table = moment_sums(m, dlist[-1], jmax)
    airy = airy_moments(max(jmax, 1)).moments
    rows = []
    for d in dlist:
        sums = table[d]
        c = normalization(m, d)
        for j in range(jmax + 1):
            mean = Fraction(sums[j], sums[0])
            rows.append(LimitLawRow(d, j, mean, float(mean) * c**j, airy[j]))
    return LimitLawTrace(m, tuple(rows))
