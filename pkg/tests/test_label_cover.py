import itertools
import random
from fractions import Fraction as F

import pytest

from pcspkit import label_cover as lc
from pcspkit.boolean_core import MinorMap
from pcspkit.errors import StructuralError


def complete(left, right, l, r, maps):
    edges = [(y, z, maps(y, z)) for y in range(1, left + 1) for z in range(1, right + 1)]
    return lc.BipartiteLC(left, right, l, r, tuple(edges))


def smoothness_oracle(gamma, s):
    best = F(0)
    for y in range(1, gamma.left + 1):
        maps = [pi for _, pi in gamma.neighbours(y)]
        for k in range(2, s + 1):
            for S in itertools.combinations(range(1, gamma.l + 1), k):
                shrink = sum(len({pi(a) for a in S}) < k for pi in maps)
                best = max(best, F(shrink, len(maps) * k * k))
    return best


def test_biregularity_is_enforced():
    pi = MinorMap.identity(2)
    with pytest.raises(StructuralError):
        lc.BipartiteLC(2, 2, 2, 2, ((1, 1, pi), (1, 2, pi), (2, 1, pi)))


def test_smoothness_examples():
    swap = complete(2, 2, 2, 2, lambda y, z: MinorMap(2, 2, [2, 1]))
    assert lc.measure_smoothness(swap, 2) == 0
    const = complete(2, 2, 2, 2, lambda y, z: MinorMap(2, 2, [1, 1]))
    assert lc.measure_smoothness(const, 2) >= F(1, 4)
    rng = random.Random(3)
    for _ in range(10):
        gamma, _ = lc.random_instance(rng)
        assert lc.measure_smoothness(gamma, 3) == smoothness_oracle(gamma, 3)


def test_layerize_sizes():
    gamma = complete(2, 2, 2, 2, lambda y, z: MinorMap(2, 2, [y % 2 + 1, z]))
    phi = lc.layerize(gamma, 2)
    assert [len(layer) for layer in phi.layers] == [4, 4]
    assert phi.domains == (4, 4)
    assert phi.layers[0][0] == "z1.y1"
    assert phi.check_transitive() and phi.check_biregular()


def test_lifted_assignment_satisfies_everything():
    rng = random.Random(11)
    for _ in range(20):
        gamma, planted = lc.random_instance(rng)
        assert gamma.satisfies(*planted)
        for L in (2, 3):
            phi = lc.layerize(gamma, L)
            sigma = lc.lift_assignment(gamma, L, *planted)
            assert lc.fully_satisfies(phi, sigma)
            assert lc.weak_sat_fraction(phi, sigma) == 1


def test_chains():
    rng = random.Random(2)
    gamma, _ = lc.random_instance(rng)
    phi = lc.layerize(gamma, 2)
    chains = lc.enumerate_chains(phi)
    assert sorted(chains) == sorted(phi.edges[(1, 2)])
    for L in (2, 3):
        assert len(lc.enumerate_chains(lc.layerize(gamma, L))) == lc.chain_count_formula(gamma, L)
    empty = lc.LayeredLC((("a",), ("b",)), (1, 1), {(1, 2): {}})
    assert lc.enumerate_chains(empty) == []


def test_weak_sat_fraction_zero_and_exact():
    gamma = complete(1, 1, 2, 2, lambda y, z: MinorMap(2, 2, [1, 1]))
    phi = lc.layerize(gamma, 2)
    bad = tuple(tuple(2 for _ in layer) for layer in phi.layers)
    assert lc.weak_sat_fraction(phi, bad) == 0
    rng = random.Random(4)
    gamma, _ = lc.random_instance(rng, max_side=2, max_label=2)
    phi = lc.layerize(gamma, 3)
    sigma = tuple(tuple(rng.randint(1, c) for _ in layer) for layer, c in zip(phi.layers, phi.domains))
    chains = lc.enumerate_chains(phi)
    good = sum(any(phi.edges[(i, j)][(ch[i - 1], ch[j - 1])](sigma[i - 1][ch[i - 1] - 1]) == sigma[j - 1][ch[j - 1] - 1]
                   for i, j in itertools.combinations(range(1, 4), 2)) for ch in chains)
    assert lc.weak_sat_fraction(phi, sigma) == F(good, len(chains))


def test_layered_smoothness_with_source_delta():
    rng = random.Random(8)
    for _ in range(10):
        gamma, _ = lc.random_instance(rng)
        delta = lc.measure_smoothness(gamma, 3)
        for L in (2, 3):
            assert lc.layered_smoothness_holds(lc.layerize(gamma, L), delta, 3)


def test_minor_condition_generation():
    gamma = complete(1, 1, 2, 2, lambda y, z: MinorMap.identity(2))
    phi = lc.layerize(gamma, 2)
    cond = lc.to_minor_condition(phi)
    assert len(cond.identities) == 1 == len(phi.edges[(1, 2)])
    assert cond.identities[0][4] == MinorMap.identity(4)
    rng = random.Random(6)
    gamma, _ = lc.random_instance(rng, max_side=2, max_label=2)
    phi = lc.layerize(gamma, 2)
    assert len(lc.to_minor_condition(phi).identities) == len(phi.edges[(1, 2)])


def test_triviality_examples():
    empty = lc.MinorCondition(((("f", 3),), (("g", 2),)), ())
    assert lc.minor_condition_trivial(empty) == ((1,), (1,))
    rng = random.Random(9)
    gamma, planted = lc.random_instance(rng, max_side=2, max_label=2)
    phi = lc.layerize(gamma, 2)
    witness = lc.minor_condition_trivial(lc.to_minor_condition(phi))
    assert witness is not None and lc.fully_satisfies(phi, witness)
    # g is forced to be both its first and its second coordinate
    clash = lc.MinorCondition(((("f", 2),), (("g", 2),)),
                              ((1, 1, 2, 1, MinorMap(2, 2, [1, 1])), (1, 1, 2, 1, MinorMap(2, 2, [2, 2]))))
    assert lc.minor_condition_trivial(clash) is None


def test_triviality_matches_bruteforce():
    rng = random.Random(10)
    for k in range(30):
        gamma, _ = lc.random_instance(rng, max_side=2, max_label=2, satisfiable=k % 3 == 0)
        phi = lc.layerize(gamma, 2)
        trivial = lc.minor_condition_trivial(lc.to_minor_condition(phi)) is not None
        assert trivial == lc.layered_satisfiable_bruteforce(phi)
