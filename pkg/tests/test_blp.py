import random
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from pcspkit.acceptance import one_in_three_templates, random_one_in_three
from pcspkit.blp import EQ, GE, LE, RationalLP, build_blp, round_search, round_solution, solve_lp
from pcspkit.boolean_core import BooleanRelation, BooleanStructure, Instance, is_homomorphism


def test_build_blp_counts():
    A, _ = one_in_three_templates()
    lp = build_blp(Instance(3, (((1, 2, 3), 0),)), A)
    assert lp.num_vars == 6
    assert sum(sense == EQ for _, sense, _ in lp.constraints) == 4
    boxes = build_blp(Instance(2, ()), A)
    assert boxes.num_vars == 2 and all(sense == LE for _, sense, _ in boxes.constraints)


def test_singleton_hull_forces_values():
    A = BooleanStructure((BooleanRelation(2, ((0, 1),)),))
    sol = solve_lp(build_blp(Instance(2, (((1, 2), 0),)), A))
    assert sol.feasible and sol.values[:2] == (0, 1)


def test_empty_relation_is_infeasible():
    A = BooleanStructure((BooleanRelation(2, ()),))
    assert not solve_lp(build_blp(Instance(2, (((1, 2), 0),)), A)).feasible


def test_solve_lp_examples():
    hull = RationalLP(3, (
        (((0, F(1)),), LE, F(1)),
        (((1, F(1)), (2, F(1))), EQ, F(1)),
        (((0, F(1)), (2, F(-1))), EQ, F(0)),
    ))
    sol = solve_lp(hull)
    assert sol.feasible and hull.violated(sol.values) is None
    contradiction = RationalLP(1, ((((0, F(1)),), LE, F(0)), (((0, F(1)),), GE, F(1))))
    assert not solve_lp(contradiction).feasible
    A, _ = one_in_three_templates()
    lp = build_blp(Instance(3, (((1, 2, 3), 0),)), A).with_constraint(((0, F(1)),), EQ, 0)
    sol = solve_lp(lp)
    assert sol.values[0] == 0 and sol.values[1] + sol.values[2] == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.sampled_from([LE, GE, EQ]),
                          st.integers(-4, 4)), min_size=1, max_size=5))
def test_solutions_are_exactly_feasible(rows):
    lp = RationalLP(2, tuple((((0, F(a)), (1, F(b))), s, F(r)) for a, b, s, r in rows))
    sol = solve_lp(lp)
    if sol.feasible:
        assert lp.violated(sol.values) is None
    else:
        # no small rational point satisfies the system either
        grid = [F(p, 4) for p in range(0, 33)]
        assert all(lp.violated((x, y)) is not None for x in grid for y in grid)


def test_rounding_trace():
    _, B = one_in_three_templates()
    inst = Instance(3, (((1, 2, 3), 0),))
    h, q, strict = round_solution(inst, B, (F(0), F(1, 2), F(1, 2)))
    assert h == (0, 0, 0) and q == F(1, 2) and strict


def test_round_search_examples():
    A, B = one_in_three_templates()
    h = round_search(Instance(3, (((1, 2, 3), 0),)), A, B)
    assert h is not None and is_homomorphism(h, Instance(3, (((1, 2, 3), 0),)), B)
    forced = BooleanStructure((BooleanRelation(1, ((1,),)),))
    assert round_search(Instance(1, (((1,), 0),)), forced, forced) == (1,)
    clash = BooleanStructure((BooleanRelation(1, ((0,),)), BooleanRelation(1, ((1,),))))
    assert round_search(Instance(1, (((1,), 0), ((1,), 1))), clash, clash) is None


def test_round_search_on_random_instances():
    A, B = one_in_three_templates()
    rng = random.Random(0)
    for _ in range(15):
        inst, planted = random_one_in_three(rng, max_vars=15, max_constraints=15)
        assert is_homomorphism(planted, inst, A)
        h = round_search(inst, A, B)
        assert h is not None and is_homomorphism(h, inst, B)
