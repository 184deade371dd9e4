import random

import pytest
from hypothesis import given, strategies as st

from nchilb import forest_core as fc
from nchilb import geometry as geo
from nchilb.errors import DomainError, NotInChartError, UnstablePointError
from nchilb.linalg import QQ, PrimeField
from nchilb.verify import EXAMPLE_FOREST, EXAMPLE_PATTERN

from conftest import small_forests

F101 = PrimeField(101)


def test_example_box_pattern():
    F = fc.parse_forest(EXAMPLE_FOREST, 3, 3)
    assert geo.cell_pattern(F) == EXAMPLE_PATTERN
    assert len(geo.normal_form_template(F).free_entries()) == fc.d_stat(F) == 61


@given(small_forests(max_d=4), st.integers(0, 2**32), st.sampled_from([QQ, F101]))
def test_round_trip(F, seed, field):
    lam = geo.random_lambda(F, field, random.Random(seed))
    p = geo.normal_form_from_cell(F, lam, field)
    assert geo.is_stable(p)
    assert geo.classify_cell(p) == F == geo.greedy_forest(p)
    assert geo.in_cell(p, F)
    assert geo.lambda_coordinates(p, F) == lam


@given(small_forests(max_d=4), st.integers(0, 2**32))
def test_generators_vanish_on_the_point(F, seed):
    lam = geo.random_lambda(F, F101, random.Random(seed))
    p = geo.normal_form_from_cell(F, lam, F101)
    gens = geo.submodule_generators(F, lam)
    assert len(gens) == len(fc.critical_set(F))
    assert all(not any(geo.apply_generator(p, g)) for g in gens)


@given(small_forests(max_d=4))
def test_free_parameters(F):
    assert len(geo.normal_form_template(F).free_entries()) == fc.d_stat(F)


def test_point_json_round_trip():
    F = fc.parse_forest("e,1;e", 2, 2)
    p = geo.normal_form_from_cell(F, geo.random_lambda(F, QQ, random.Random(1)), QQ)
    q = geo.CellPoint.from_json(p.to_json())
    assert q.to_json() == p.to_json() and q.field == QQ


def test_unstable_point():
    p = geo.CellPoint(1, 1, 2, QQ, [[1], [0]], [[[1, 0], [0, 1]]])
    assert not geo.is_stable(p)
    with pytest.raises(UnstablePointError):
        geo.classify_cell(p)


def test_outside_chart():
    # phi_1 kills f(v_1), so the word 1 never spans
    p = geo.CellPoint(2, 1, 2, QQ, [[1], [0]], [[[0, 0], [0, 0]], [[0, 0], [1, 0]]])
    F = fc.parse_forest("e,1", 2)
    assert not geo.in_chart(p, F)
    with pytest.raises(NotInChartError):
        geo.chart_coordinates(p, F)
    assert geo.classify_cell(p) == fc.parse_forest("e,2", 2)


def test_point_in_a_later_chart_gets_full_coordinates():
    first, later = fc.parse_forest("e,1", 2), fc.parse_forest("e,2", 2)
    rng = random.Random(5)
    for _ in range(20):
        p = geo.normal_form_from_cell(first, geo.random_lambda(first, F101, rng), F101)
        if geo.in_chart(p, later):
            break
    assert geo.in_chart(p, later) and not geo.in_cell(p, later)
    coords = geo.lambda_coordinates(p, later)
    assert len(coords) == later.size * len(fc.critical_set(later))


def test_lambda_domain_checked():
    F = fc.parse_forest("e,1", 2)
    with pytest.raises(DomainError, match="lambda domain"):
        geo.normal_form_from_cell(F, {}, QQ)


def test_bad_shapes():
    with pytest.raises(DomainError):
        geo.CellPoint(2, 1, 2, QQ, [[1]], [[[0, 0], [0, 0]]] * 2)


@pytest.mark.parametrize("m,n,d,betti", [
    (2, 1, 2, [1, 0, 1]),
    (2, 1, 3, [1, 0, 1, 0, 2, 0, 1]),
])
def test_betti(m, n, d, betti):
    t = geo.betti_numbers(m, n, d)
    top = max(i for i, b in enumerate(t.betti) if b)
    assert t.betti[: top + 1] == betti
    assert t.euler == fc.forest_count(m, n, d)


def test_betti_shape_everywhere():
    for m in range(1, 4):
        for n in range(1, 3):
            for d in range(5):
                b = geo.betti_numbers(m, n, d).betti
                assert b[0] == 1 and not any(b[1::2])


def test_predicted_point_count():
    assert geo.predicted_point_count(2, 1, 2, 2) == 96
    assert geo.predicted_point_count(1, 2, 1, 2) == 6
    assert geo.betti_numbers(2, 1, 3).to_csv().startswith("d,k,b_k\n")
