import math

import pytest
from hypothesis import given, strategies as st

from nchilb import forest_core as fc
from nchilb.errors import CapExceededError, DomainError, ForestParseError

from conftest import small_forests

BINARY_FOUR = [
    ((), (1,), (1, 1), (1, 1, 1)), ((), (1,), (1, 1), (1, 1, 2)), ((), (1,), (1, 1), (1, 2)),
    ((), (1,), (1, 1), (2,)), ((), (1,), (1, 2), (1, 2, 1)), ((), (1,), (1, 2), (1, 2, 2)),
    ((), (1,), (1, 2), (2,)), ((), (1,), (2,), (2, 1)), ((), (1,), (2,), (2, 2)),
    ((), (2,), (2, 1), (2, 1, 1)), ((), (2,), (2, 1), (2, 1, 2)), ((), (2,), (2, 1), (2, 2)),
    ((), (2,), (2, 2), (2, 2, 1)), ((), (2,), (2, 2), (2, 2, 2)),
]


@pytest.mark.parametrize("m,n,d,expected", [
    (2, 1, 4, 14), (3, 1, 3, 12), (3, 3, 6, 7752), (1, 1, 5, 1), (1, 3, 2, 6), (2, 2, 0, 1), (4, 2, 3, 52),
])
def test_forest_count(m, n, d, expected):
    assert fc.forest_count(m, n, d) == expected


def test_forest_count_matches_closed_form():
    for m in range(1, 5):
        for n in range(1, 4):
            for d in range(7):
                c = (m - 1) * d + n
                assert fc.forest_count(m, n, d) * c == n * math.comb(m * d + n - 1, d)
                assert len(fc.enumerate_forests(m, n, d)) == fc.forest_count(m, n, d)


def test_binary_trees_with_four_nodes_in_order():
    got = [F.trees[0] for F in fc.enumerate_forests(2, 1, 4)]
    assert got == BINARY_FOUR


def test_enumeration_is_sorted_and_distinct():
    forests = fc.enumerate_forests(3, 2, 4)
    keys = [F.sort_key for F in forests]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    assert list(fc.iter_forests(3, 2, 4)) == forests


def test_blocks_concatenate_to_the_full_list():
    whole = fc.enumerate_forests(2, 3, 4)
    parts = [F for b in fc.forest_blocks(2, 3, 4) for F in fc.iter_forests(2, 3, 4, b)]
    assert parts == whole


def test_running_example():
    F = fc.parse_forest("e,1,1.3,2;-;e,3", 3, 3)
    crit = fc.critical_set(F)
    assert len(crit) == 15
    assert (2, ()) in crit and (1, (1, 1)) in crit and (3, (3, 3)) in crit
    assert fc.d_stat(F) == 61
    assert fc.d_prime(F) == 13
    assert str(F) == "e,1,1.3,2;-;e,3"


def test_node_order():
    assert fc.compare_nodes((1, (2,)), (2, ())) == -1
    assert fc.compare_nodes((1, (1, 3)), (1, (2,))) == -1
    assert fc.compare_nodes((1, ()), (1, ())) == 0


def test_forest_order_prefers_larger_first_tree():
    a = fc.parse_forest("e,1;-", 2)
    b = fc.parse_forest("e;e", 2)
    assert fc.compare_forests(a, b) == -1


@given(small_forests())
def test_critical_set_size(F):
    assert len(fc.critical_set(F)) == (F.m - 1) * F.size + F.n


@given(small_forests())
def test_d_prime_range(F):
    assert 0 <= fc.d_prime(F) <= fc.max_d_prime(F.m, F.n, F.size)
    assert fc.d_stat(F) == len(fc.d_pairs(F))


@given(small_forests())
def test_plane_round_trip(F):
    P = fc.to_plane_forest(F)
    assert fc.is_plane(P)
    assert P.size == F.m * F.size + F.n
    assert fc.from_plane_forest(P) == F


@given(small_forests())
def test_format_parse_round_trip(F):
    assert fc.parse_forest(fc.format_forest(F), F.m, F.n) == F


@given(st.integers(1, 3), st.integers(1, 5), st.data())
def test_graft_ungraft(m, d, data):
    t = data.draw(st.sampled_from(fc.trees(m, d)))
    kids = fc.ungraft(t, m)
    assert fc.graft(kids) == t
    assert sum(len(k) for k in kids) == d - 1


def test_compositions():
    assert list(fc.compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert sum(1 for _ in fc.compositions(5, 3)) == math.comb(7, 2)


def test_lattice_paths_count_and_coarea():
    paths = fc.enumerate_paths(2, 1, 3)
    assert len(paths) == 5
    assert sorted(fc.coarea(p, 2, 1) for p in paths) == sorted(fc.d_prime(F) for F in fc.enumerate_forests(2, 1, 3))


@pytest.mark.parametrize("text,msg", [
    ("e,1.3", "lacks its prefix 1"),
    ("e,4", "outside 1..3"),
    ("e;;e", "use '-'"),
    ("e,1,1", "duplicate"),
    ("e, 1", "whitespace"),
    ("e,x", "bad letter"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ForestParseError, match=msg):
        fc.parse_forest(text, 3)


def test_parse_wrong_root_count():
    with pytest.raises(ForestParseError, match="expected 2 trees"):
        fc.parse_forest("e", 2, 2)


def test_not_plane_rejected():
    with pytest.raises(DomainError):
        fc.from_plane_forest(fc.parse_forest("e,1", 2))


def test_cap():
    with pytest.raises(CapExceededError, match="raise the cap"):
        fc.enumerate_forests(3, 3, 8, max_count=1000)


def test_bad_params():
    with pytest.raises(DomainError):
        fc.forest_count(0, 1, 2)
    with pytest.raises(DomainError):
        fc.forest_count(2, 1, -1)
