import itertools

import pytest
from hypothesis import given, settings, strategies as st

from pcspkit.boolean_core import (
    BooleanFunction,
    BooleanRelation,
    BooleanStructure,
    Instance,
    MinorMap,
    close_relation,
    identify_coordinates,
    is_homomorphism,
    is_polymorphism,
    make_relation,
    st_left,
    st_right,
)
from pcspkit.errors import ParameterError, StructuralError
from pcspkit.threshold import LtfPresentation, truth_table


def one(rel):
    return BooleanStructure((rel,))


def test_nae_relations():
    assert len(make_relation("nae", 3)) == 6
    assert (0, 0, 0) not in make_relation("nae", 3)
    assert len(make_relation("nae", 1)) == 0


def test_builtin_r():
    rows = {"101010", "010101", "110000", "001100", "000011"}
    got = {"".join(map(str, t)) for t in make_relation("builtin_R").tuples}
    assert got == rows


def test_k_in_l_rejects_k_above_l():
    with pytest.raises(ParameterError):
        make_relation("k_in_l", 4, 3)


def test_relation_rejects_wrong_length():
    with pytest.raises(ParameterError, match="tuple 1"):
        BooleanRelation(2, ((0, 1), (1,)))


def test_homomorphism_examples():
    nae2 = one(make_relation("nae", 2))
    inst = Instance(2, (((1, 2), 0),))
    assert is_homomorphism({1: 0, 2: 1}, inst, nae2)
    assert not is_homomorphism({1: 0, 2: 0}, inst, nae2)
    three = Instance(3, (((1, 2, 3), 0),))
    assert is_homomorphism({1: 1, 2: 0, 3: 0}, three, one(make_relation("k_in_l", 1, 3)))


def test_homomorphism_signature_mismatch():
    inst = Instance(2, (((1, 2), 0),))
    with pytest.raises(StructuralError):
        is_homomorphism((0, 1), inst, one(make_relation("nae", 3)))


def test_projections_preserve_included_relations():
    a = one(make_relation("k_in_l", 1, 3))
    b = one(make_relation("nae", 3))
    for n in (1, 2, 3):
        for i in range(1, n + 1):
            assert is_polymorphism(BooleanFunction.projection(n, i), a, b)


def test_negation_and_ternary_threshold_are_st_polymorphisms():
    negation = BooleanFunction(1, [1, 0])
    assert is_polymorphism(negation, st_left(), st_right())
    f = truth_table(LtfPresentation([1, 2, -2], 0))
    assert "".join(map(str, f.table)) == "01110001"
    assert is_polymorphism(f, st_left(), st_right())


def test_identification_gadgets():
    nae2 = identify_coordinates(make_relation("builtin_2in4"), MinorMap(4, 2, [1, 1, 2, 2]))
    assert nae2 == make_relation("nae", 2)
    one_in_three = identify_coordinates(make_relation("builtin_R"), MinorMap(6, 3, [1, 1, 2, 2, 3, 3]))
    assert one_in_three == make_relation("k_in_l", 1, 3)
    r = make_relation("builtin_R")
    assert identify_coordinates(r, MinorMap.identity(6)) == r


def test_bijective_identification_permutes():
    r = make_relation("builtin_R")
    perm = MinorMap(6, 6, [3, 1, 2, 6, 5, 4])
    out = identify_coordinates(r, perm)
    assert len(out) == len(r)


def test_closure_examples():
    a = make_relation("k_in_l", 1, 3)
    projections = [BooleanFunction.projection(3, i) for i in (1, 2, 3)]
    assert close_relation(a, projections) == a
    majorities = [BooleanFunction.from_callable(n, lambda x, n=n: int(2 * sum(x) > n)) for n in (1, 3, 5)]
    assert set(close_relation(a, majorities).tuples) == set(a.tuples) | {(0, 0, 0)}
    nae2 = make_relation("nae", 2)
    assert close_relation(nae2, [BooleanFunction(1, [1, 0])]) == nae2


tables3 = st.integers(0, 255).map(lambda c: BooleanFunction.from_code(3, c))


@settings(max_examples=60, deadline=None)
@given(tables3)
def test_minors_of_polymorphisms_are_polymorphisms(f):
    a = one(make_relation("k_in_l", 1, 3))
    if not is_polymorphism(f, a, a):
        return
    for images in itertools.product(range(1, 3), repeat=3):
        assert is_polymorphism(f.minor(MinorMap(3, 2, images)), a, a)


def test_homomorphism_composition():
    nae2 = one(make_relation("nae", 2))
    inst = Instance(3, (((1, 2), 0), ((2, 3), 0)))
    negation = {0: 1, 1: 0}
    for h in itertools.product((0, 1), repeat=3):
        if is_homomorphism(h, inst, nae2):
            assert is_homomorphism([negation[b] for b in h], inst, nae2)


def test_minor_map_composition():
    pi = MinorMap(3, 2, [1, 2, 2])
    rho = MinorMap(2, 1, [1, 1])
    assert pi.then(rho).map == (1, 1, 1)
    f = BooleanFunction.from_code(3, 0b10010110)
    assert f.minor(pi).minor(rho) == f.minor(pi.then(rho))
