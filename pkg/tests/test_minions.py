import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from pcspkit.boolean_core import BooleanFunction, MinorMap
from pcspkit.conditions import ChoiceFunction, check_condition, compose, function_digest
from pcspkit.errors import CapacityError, ConstructionError
from pcspkit.minions import (
    build_layered_refutation,
    build_multichoice_refutation,
    heavy_coordinate_bound,
    st_generator,
    st_generator_choice_table,
    st_membership,
    st_shaped,
    symmetric_minor_search,
    wp_generator,
)
from pcspkit.threshold import LtfPresentation, canonical_presentation, presentation_minor, truth_table


def test_generators():
    assert st_generator(0) == LtfPresentation([1], 0)
    assert st_generator(1) == LtfPresentation([1, 2, -2], 0)
    assert st_generator(2) == LtfPresentation([1, 2, -2, 4, -4], 0)
    assert wp_generator(1) == LtfPresentation([F(1, 3)] * 3, F(1, 2))
    assert wp_generator(2) == LtfPresentation([F(1, 3)] + [F(1, 6)] * 4, F(1, 2))
    assert wp_generator(3) == LtfPresentation([F(1, 3)] + [F(1, 9)] * 6, F(1, 2))
    majority = truth_table(LtfPresentation([1, 1, 1], F(3, 2)))
    assert truth_table(wp_generator(1)) == majority


@pytest.mark.parametrize("method", ["recursive", "template", "bruteforce"])
def test_membership_examples(method):
    identity = BooleanFunction.projection(1, 1)
    gen1 = truth_table(st_generator(1))
    majority = truth_table(LtfPresentation([1, 1, 1], F(3, 2)))
    assert st_membership(identity, method) is not None
    assert st_membership(gen1, method) is not None
    assert st_membership(majority, method) is None
    if method != "template":
        assert st_membership(identity, method).m == 0
        assert st_membership(gen1, method).m == 1


def test_bruteforce_is_capped():
    with pytest.raises(CapacityError):
        st_membership(truth_table(st_generator(3)), "bruteforce")


def test_recursive_handles_large_generators():
    w = st_membership(truth_table(st_generator(4)), "recursive")
    assert w.m == 4


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_generator_minors_are_members_and_folded(m, data):
    n = 2 * m + 1
    k = data.draw(st.integers(1, 5))
    images = data.draw(st.lists(st.integers(1, k), min_size=n, max_size=n))
    f = truth_table(st_generator(m)).minor(MinorMap(n, k, images))
    assert f.is_folded()
    assert st_membership(f, "template") is not None
    assert st_membership(f, "recursive") is not None


def test_symmetric_minor_examples():
    assert symmetric_minor_search(wp_generator(3), 5) is None
    assert symmetric_minor_search(wp_generator(1), 3) is not None
    assert symmetric_minor_search(st_generator(2), 1) is not None


def test_heavy_coordinate_examples():
    assert not heavy_coordinate_bound(LtfPresentation([F(1, 5)] * 5, F(1, 2)), F(1, 4))
    assert heavy_coordinate_bound(st_generator(3), F(1, 8))
    g = presentation_minor(wp_generator(4), MinorMap(9, 4, [1, 2, 2, 3, 3, 4, 4, 1, 2]))
    assert heavy_coordinate_bound(canonical_presentation(g), F(1, 80))


def test_multichoice_top3n():
    f, pi, g = build_multichoice_refutation(ChoiceFunction.top3n(1), 3)
    chosen_f = ChoiceFunction.top3n(1)(f)
    chosen_g = ChoiceFunction.top3n(1)(g)
    assert not pi.image(chosen_f) & chosen_g


def test_multichoice_dictator_aborts():
    with pytest.raises(ConstructionError):
        build_multichoice_refutation(ChoiceFunction.dictator(), 1)


def test_multichoice_table_choice():
    table = {function_digest(wp_generator(4)): [1, 2],
             function_digest(BooleanFunction.projection(4, 1)): [1]}
    f, pi, g = build_multichoice_refutation(ChoiceFunction.from_table(table), 2)
    assert pi.image({1, 2}) == {2}
    assert truth_table(g) == BooleanFunction.projection(4, 1)


@pytest.mark.parametrize("M", [1, 2, 3])
def test_layered_refutation(M):
    choice = st_generator_choice_table(1, M, 10)
    chain = build_layered_refutation(choice, M)
    assert len(chain) == M
    chosen = [choice(f) for f in chain.functions]
    for i, j in itertools.combinations(range(1, M + 1), 2):
        assert not compose(chain, i, j).image(chosen[i - 1]) & chosen[j - 1]
    for f in chain.functions:
        assert st_shaped(f, (f.arity - 1) // 2)
    if M > 1:
        verdict = check_condition([chain], choice, M, "layered")[0]
        assert verdict == {"chain": 1, "variant": "layered", "satisfied": False, "witness": None}
