import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nchilb import asymptotics as asy
from nchilb.errors import DomainError


def test_growth_base():
    assert asy.growth_base(2) == 4
    assert asy.growth_base(3) == Fraction(27, 4)


def test_constant_matches_catalan_asymptotics():
    # Catalan numbers ~ 4^d / (sqrt(pi) d^(3/2))
    assert float(asy.asymptotic_constant(2, 1)) == pytest.approx(1 / math.sqrt(math.pi))


@pytest.mark.parametrize("m", [2, 3])
def test_chi_ratio(m):
    ratios = [asy.chi_ratio(m, 1, d) for d in (50, 100, 200, 500)]
    assert 0.99 <= ratios[-1] <= 1.01
    assert ratios == sorted(ratios)


def test_airy_exact():
    am = asy.airy_moments(4)
    assert am.omegas[:3] == (Fraction(-1), Fraction(1, 2), Fraction(5, 4))
    assert am.exact[1] == (Fraction(1), 1)
    assert am.exact[2] == (Fraction(10, 3), 0)
    assert am.moments[1] == pytest.approx(math.sqrt(math.pi))


@given(st.integers(1, 12))
def test_airy_moments_positive(K):
    am = asy.airy_moments(K)
    assert all(x > 0 for x in am.moments)
    assert all(p in (0, 1) for _, p in am.exact)


def test_limit_law_trend():
    tr = asy.limit_law_check(2, [50, 100, 200], jmax=2)
    firsts = [r.normalized for r in tr.series(1)]
    assert firsts == sorted(firsts)
    assert all(r.gap < 0 for r in tr.series(1))
    assert tr.to_csv().splitlines()[0] == "d,j,numerator,denominator,normalized,airy,gap"


def test_domain():
    with pytest.raises(DomainError):
        asy.growth_base(1)
    with pytest.raises(DomainError):
        asy.limit_law_check(2, [100, 50])
    with pytest.raises(DomainError):
        asy.airy_moments(0)
