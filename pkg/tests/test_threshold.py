import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from pcspkit.boolean_core import BooleanFunction, MinorMap
from pcspkit.errors import ParameterError, TotalityError
from pcspkit.minions import st_generator
from pcspkit.threshold import (
    ANTIMONOTONE,
    BOTH,
    MONOTONE,
    STRICT,
    WEAK,
    LtfPresentation,
    approximate_generator,
    as_rational,
    at_generator,
    canonical_presentation,
    compute_preorder,
    convert_form,
    domination_propagates,
    evaluate,
    find_fixing_pairs,
    grouping,
    is_total,
    linf_distance,
    minor_map_properties,
    monotonicity,
    presentation_minor,
    scale,
    truth_table,
)

P = LtfPresentation([1, 2, -2], 0)


def test_rationals_are_exact():
    assert as_rational("2/6") == F(1, 3)
    with pytest.raises(ParameterError):
        as_rational(0.5)
    with pytest.raises(ParameterError):
        as_rational("2/0")


def test_evaluate():
    assert evaluate(P, (0, 0, 1)) == 0
    assert evaluate(LtfPresentation([F(1, 2), F(1, 2)], 0, STRICT), (0, 0)) is None
    assert evaluate(LtfPresentation([1], 0), (1,)) == 1
    with pytest.raises(ParameterError):
        evaluate(P, (0, 1))


def test_convert_form():
    assert convert_form(P, STRICT) == LtfPresentation([1, 2, -2], F(1, 2), STRICT)
    assert convert_form(LtfPresentation([1], 0), STRICT).threshold == F(1, 2)
    assert convert_form(LtfPresentation([1], 1), STRICT).threshold == 2
    with pytest.raises(TotalityError):
        convert_form(LtfPresentation([1, 1], 1, STRICT), WEAK)


def test_presentation_minor():
    merged = presentation_minor(st_generator(2), MinorMap(5, 4, [1, 2, 3, 4, 4]))
    assert merged.weights == (1, 2, -2, 0) and merged.threshold == 0
    assert presentation_minor(P, MinorMap.identity(3)) == P
    assert presentation_minor(P, MinorMap(3, 2, [1, 2, 1])).weights == (-1, 2)
    with pytest.raises(ParameterError):
        presentation_minor(P, MinorMap.identity(4))


def test_scale():
    assert scale(P, 2).weights == (2, 4, -4)
    assert scale(LtfPresentation([F(1, 3)] * 3, F(1, 2)), 3) == LtfPresentation([1, 1, 1], F(3, 2))
    assert scale(P, 1) == P
    with pytest.raises(ParameterError):
        scale(P, 0)


def test_truth_tables():
    ones = {i for i, b in enumerate(truth_table(P).table) if b}
    # little-endian: input 100 (x1=1) is index 1
    assert ones == {0b001, 0b010, 0b011, 0b111}
    assert list(truth_table(LtfPresentation([1], 0)).table) == [0, 1]
    assert not truth_table(LtfPresentation([1, 1], 2)).table.any()
    with pytest.raises(TotalityError):
        truth_table(LtfPresentation([1, 1], 1, STRICT))


def test_monotonicity():
    assert monotonicity(truth_table(P), 3) == ANTIMONOTONE
    assert monotonicity(BooleanFunction.constant(2, 1), 1) == BOTH
    assert monotonicity(BooleanFunction.projection(1, 1), 1) == MONOTONE


def test_preorder_examples():
    order = compute_preorder(truth_table(P))
    assert all(order.equiv(i, j) for i in range(1, 4) for j in range(1, 4))
    alt = compute_preorder(truth_table(LtfPresentation([2, 2, -2], 1)))
    assert alt.le == order.le
    dummy = compute_preorder(truth_table(LtfPresentation([1, 3], 2)))
    assert dummy.less(1, 2)
    majority = compute_preorder(truth_table(LtfPresentation([1, 1, 1], F(3, 2))))
    assert len(majority.classes()) == 1


def test_presentation_and_table_preorders_agree():
    for m in range(1, 4):
        p = st_generator(m)
        assert compute_preorder(p).le == compute_preorder(truth_table(p)).le


def test_canonical_examples():
    c = canonical_presentation(P)
    assert c.form == STRICT
    assert c.weights == (F(5, 3), F(5, 3), F(-5, 3))
    assert truth_table(c) == truth_table(P)
    # the ledger records why the threshold is 5/6; the reference value 1/3 is equally valid
    assert c.threshold == F(5, 6)
    assert truth_table(LtfPresentation(c.weights, F(1, 3), STRICT)) == truth_table(P)
    majority = LtfPresentation([1, 1, 1], F(3, 2))
    assert canonical_presentation(majority).weights == majority.weights
    assert canonical_presentation(majority).threshold == F(3, 2)
    single = LtfPresentation([1], F(1, 2))
    assert canonical_presentation(single).weights == (1,)


def _random_total(draw_weights, t2):
    p = LtfPresentation(draw_weights, F(t2, 2))
    return convert_form(p, STRICT)


@settings(max_examples=120, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.integers(-30, 30))
def test_canonical_respects_preorder(weights, t2):
    p = _random_total(weights, t2)
    c = canonical_presentation(p)
    f = truth_table(p)
    assert truth_table(c) == f
    order = compute_preorder(f)
    for i, j in itertools.product(range(1, p.arity + 1), repeat=2):
        assert (abs(c.weights[i - 1]) < abs(c.weights[j - 1])) == order.less(i, j)


def test_fixing_pair_examples():
    assert (2, 3) in find_fixing_pairs(truth_table(P))
    assert find_fixing_pairs(P) == [(1, 3), (2, 3)]
    assert (1, 2) in find_fixing_pairs(BooleanFunction.projection(2, 1))
    assert find_fixing_pairs(truth_table(LtfPresentation([1, 1, 1], F(3, 2)))) == []


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.data())
def test_fixing_pairs_from_sums_match_tables(m, data):
    n = 2 * m + 1
    k = data.draw(st.integers(2, n))
    images = data.draw(st.lists(st.integers(1, k), min_size=n, max_size=n))
    p = presentation_minor(st_generator(m), MinorMap(n, k, images))
    assert find_fixing_pairs(p) == find_fixing_pairs(truth_table(p))


def test_minor_map_properties():
    g = st_generator(2)
    assert minor_map_properties(MinorMap.identity(5), g, {4, 5}) == (True, True, True)
    assert minor_map_properties(MinorMap.identity(5), g, {1})[2] is False
    merge = MinorMap(5, 4, [1, 2, 3, 4, 4])
    assert minor_map_properties(merge, g, {4, 5})[0] is False


def test_grouping_examples():
    assert grouping([F(1, 4)] * 4, 4, F(1, 4)).map == (1, 2, 3, 4)
    pi = grouping([F(3, 10), F(3, 10), F(1, 5), F(1, 5)], 2, F(3, 10))
    assert pi.map == (1, 2, 1, 2)
    assert grouping([1], 1, 1).map == (1,)
    with pytest.raises(ParameterError):
        grouping([F(1, 2), F(1, 2)], 2, F(1, 4))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.lists(st.integers(1, 20), min_size=1, max_size=12))
def test_grouping_bins_within_eps(m, raw):
    total = sum(raw)
    a = [F(x, total) for x in raw]
    eps = max(a)
    if abs(1 - sum(a)) > eps:
        return
    pi = grouping(a, m, eps)
    sums = [sum(x for x, g in zip(a, pi.map) if g == b) for b in range(1, m + 1)]
    assert all(abs(s - F(1, m)) <= eps for s in sums)


def test_approximate_thr_example():
    p = LtfPresentation([F(1, 6)] * 6, F(1, 2))
    result = approximate_generator(p, ("thr", 3, F(1, 2)), F(1, 6))
    assert not result.constant
    assert result.presentation == LtfPresentation([F(1, 3)] * 3, F(1, 2))
    assert result.distance == 0


def test_approximate_at_example():
    p = LtfPresentation([F(1, 4)] * 4 + [F(-1, 2), F(1, 2)], 0)
    eps = F(1, 2)
    result = approximate_generator(p, ("at", 2), eps)
    assert linf_distance(result.presentation, at_generator(2)) == result.distance <= eps


def test_approximate_reports_constants():
    p = LtfPresentation([F(1, 3)] * 3, 1)
    assert approximate_generator(p, ("thr", 3), F(1, 2)).constant


def test_domination_examples():
    g = st_generator(4)
    top = {6, 7, 8, 9}
    assert domination_propagates(g, MinorMap.identity(9), top, F(1, 2))
    merge = MinorMap(9, 7, [1, 2, 3, 5, 4, 4, 5, 6, 7])
    assert domination_propagates(g, merge, top, F(1, 2))
    not_covered = MinorMap(9, 7, [1, 2, 2, 3, 3, 4, 5, 6, 7])
    with pytest.raises(ParameterError):
        domination_propagates(g, not_covered, {6, 7, 8, 9}, F(1, 2))


def test_generator_is_total_strictly():
    assert is_total(LtfPresentation([1, 2, -2], F(1, 2), STRICT))
    assert not is_total(LtfPresentation([F(1, 2), F(1, 2)], 0, STRICT))
