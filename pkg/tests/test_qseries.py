from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nchilb import forest_core as fc
from nchilb import qseries as qs
from nchilb.qseries import QPolynomial as P
from nchilb.errors import DomainError

polys = st.lists(st.integers(-5, 5), max_size=6).map(P)


def test_zeta_bar_binary_tree_start():
    z = qs.zeta_bar(2, 1, 4)
    assert z[0] == P([1]) and z[1] == P([1])
    assert z[2] == P([1, 1])
    assert z[3] == P([1, 2, 1, 1])
    assert z[4] == P([1, 3, 3, 3, 2, 1, 1])


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)])
def test_zeta_bar_is_the_dprime_distribution(m, n):
    z = qs.zeta_bar(m, n, 6)
    for d in range(7):
        dist = Counter(fc.d_prime(F) for F in fc.enumerate_forests(m, n, d))
        assert z[d] == P([dist[k] for k in range(max(dist) + 1)])


def test_unmodified_zeta_uses_d():
    z = qs.zeta_unmodified(2, 2, 4)
    for d in range(5):
        dist = Counter(fc.d_stat(F) for F in fc.enumerate_forests(2, 2, d))
        assert z[d] == P([dist[k] for k in range(max(dist) + 1)])


def test_values_at_one_are_euler_numbers():
    for m, n in [(2, 1), (3, 2), (4, 3)]:
        z = qs.zeta_bar(m, n, 7)
        assert z.at_q1() == qs.euler_numbers(m, n, 7) == [fc.forest_count(m, n, d) for d in range(8)]


@pytest.mark.parametrize("m,n", [(1, 1), (1, 3), (2, 1), (2, 3), (3, 2)])
def test_gamma_identity(m, n):
    rep = qs.verify_gamma_identity(m, n, 8)
    assert rep.passed, rep.first_failure


def test_m1_product():
    # each tree is a path, so zeta_bar(1, n) = prod_{i<n} 1/(1 - q^i t)
    z = qs.zeta_bar(1, 3, 6)
    for d in range(7):
        dist = Counter(fc.d_prime(F) for F in fc.enumerate_forests(1, 3, d))
        assert z[d] == P([dist[k] for k in range(max(dist) + 1)])
    assert z[2] == P([1, 1, 2, 1, 1])


def test_continued_fraction():
    assert qs.continued_fraction_check(8).passed


def test_qpolynomial_basics():
    p = P([1, 2, 0, 0])
    assert p.coeffs == (1, 2) and p.degree == 1
    assert str(P([1, 2, 1])) == "1 + 2*q + q^2"
    assert str(P([0, -1, 0, 3])) == "-q + 3*q^3"
    assert p(2) == 5 and P([])(7) == 0
    assert p.shift(2) == P([0, 0, 1, 2])
    assert qs.q_pochhammer(1, 2) == P([1, -1, -1, 1])


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a - a == qs.ZERO


@given(polys, polys, st.integers(-3, 3))
def test_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b)(x) == a(x) * b(x)


def test_qfraction_equality():
    assert qs.QFraction(P([1, -1]), P([1, -2, 1])) == qs.QFraction(P([1]), P([1, -1]))


def test_moment_sums_match_enumeration():
    table = qs.moment_sums(2, 8, 3)
    for d in range(9):
        vals = [fc.d_prime(F) for F in fc.enumerate_forests(2, 1, d)]
        assert table[d] == [sum(v**j for v in vals) for j in range(4)]


def test_stirling2():
    assert [qs.stirling2(4, k) for k in range(5)] == [0, 1, 7, 6, 1]


def test_special_value_partial_sum():
    s = qs.special_value_partial_sum(2, 1, 200)
    assert isinstance(s, Fraction) and Fraction(19, 10) < s < 2


def test_tseries_csv_and_json():
    z = qs.zeta_bar(2, 1, 2)
    assert qs.series_to_csv(z).splitlines()[0] == "d,k,coefficient"
    assert '"dmax": 2' in qs.series_to_json(z, 2, 1)


def test_bad_arguments():
    with pytest.raises(DomainError):
        qs.zeta_bar(0, 1, 3)
    with pytest.raises(DomainError):
        qs.moment_sums(1, 3, 2)
    with pytest.raises(DomainError):
        qs.continued_fraction_convergent(0)
