"""The ST and WP minions: generators, membership, refutations, weight bounds."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .boolean_core import (
    BooleanFunction,
    MinorMap,
    constant_structure,
    is_polymorphism,
    st_left,
    st_right,
)
from .conditions import (
    TABLE_ARITY_CAP,
    ChoiceFunction,
    MinorChain,
    compose,
    function_digest,
    ranked_coordinates,
)
from .errors import CapacityError, ConstructionError, InvariantError, ParameterError
from .threshold import (
    WEAK,
    LtfPresentation,
    as_rational,
    find_fixing_pairs,
    presentation_minor,
    truth_table,
)

# Maps enumerated by one exhaustive minor search.
SEARCH_CAP = 20_000_000


def st_generator(m):
    if m < 0:
        raise ParameterError("m must be nonnegative")
    weights = [1]
    for k in range(1, m + 1):
        weights += [2**k, -(2**k)]
    return LtfPresentation(weights, 0, WEAK)


def wp_generator(m):
    if m < 1:
        raise ParameterError("m must be positive")
    return LtfPresentation([Fraction(1, 3)] + [Fraction(1, 3 * m)] * (2 * m), Fraction(1, 2), WEAK)


@dataclass(frozen=True)
class StWitness:
    """f is the ``rho``-minor of the generator with parameter ``m``.

    The template method proves membership without a witness; then both
    fields are None.
    """

    m: int = None
    rho: MinorMap = None


def _lift(pi, j):
    """For each coordinate of the identified minor, a coordinate of f mapping to it."""
    back = {}
    for k, v in enumerate(pi.map, start=1):
        if k != j:
            back.setdefault(v, k)
    return back


def _recursive(f):
    """Strip dummy coordinates for free; otherwise split off a fixing pair.

    Each fixing pair (i, j) becomes the top pair of the generator: on inputs
    with x_i = x_j the pair cancels and f agrees with its identified minor.
    """
    if f.arity == 1:
        if f == BooleanFunction.projection(1, 1):
            return StWitness(0, MinorMap.identity(1))
        return None
    t = f.table.reshape(-1)
    for d in range(1, f.arity + 1):
        t0, t1 = t.reshape(1 << (f.arity - d), 2, 1 << (d - 1)).transpose(1, 0, 2)
        if np.array_equal(t0, t1):
            keep = 2 if d == 1 else 1
            g, pi = f.identify(keep, d)
            inner = _recursive(g)
            if inner is None:
                return None
            back = _lift(pi, d)
            return StWitness(inner.m, MinorMap(inner.rho.from_arity, f.arity,
                                               [back[v] for v in inner.rho.map]))
    pairs = find_fixing_pairs(f)
    if not pairs:
        return None
    i, j = pairs[0]
    g, pi = f.identify(i, j)
    inner = _recursive(g)
    if inner is None:
        return None
    back = _lift(pi, j)
    rho = MinorMap(2 * inner.m + 3, f.arity,
                   [back[v] for v in inner.rho.map] + [i, j])
    return StWitness(inner.m + 1, rho)


@lru_cache(maxsize=None)
def _generator_minor_codes(m, n):
    """Sorted distinct minor codes of gen(m) onto arity n, with first map numbers."""
    source = 2 * m + 1
    if n**source > SEARCH_CAP:
        raise CapacityError(f"{n}**{source} maps exceed cap {SEARCH_CAP}")
    table = truth_table(st_generator(m)).table
    codes = kernels.all_minor_codes(table, source, n)
    uniq, first = np.unique(codes, return_index=True)
    return uniq, first


def _bruteforce(f):
    """Smallest generator having f as a minor; gen(n-1) always suffices."""
    n = f.arity
    if n > 5:
        raise CapacityError("brute-force membership is limited to arity 5")
    code = np.uint64(f.code)
    for m in range(n):
        uniq, first = _generator_minor_codes(m, n)
        pos = int(np.searchsorted(uniq, code))
        if pos < len(uniq) and uniq[pos] == code:
            digits = kernels.decode_map(int(first[pos]), 2 * m + 1, n)
            return StWitness(m, MinorMap(2 * m + 1, n, [d + 1 for d in digits]))
    return None


def in_st_template(f):
    """Idempotent and a polymorphism of (STl, STr)."""
    return (is_polymorphism(f, constant_structure(0), constant_structure(0))
            and is_polymorphism(f, constant_structure(1), constant_structure(1))
            and is_polymorphism(f, st_left(), st_right()))


def st_membership(f, method="recursive"):
    """A witness that f is in ST, or None."""
    if method == "recursive":
        found = _recursive(f)
    elif method == "bruteforce":
        found = _bruteforce(f)
    elif method == "template":
        return StWitness() if in_st_template(f) else None
    else:
        raise ParameterError(f"unknown method {method!r}")
    if found is not None:
        gen = truth_table(st_generator(found.m))
        if gen.minor(found.rho) != f:
            raise InvariantError(f"witness for {f} does not reproduce it")
    return found


def symmetric_minor_search(p, k, cap=SEARCH_CAP):
    """First map (in enumeration order) whose k-ary minor is symmetric, or None."""
    n = p.arity
    if not 1 <= k <= n:
        raise ParameterError("target arity must be between 1 and the arity")
    if k**n > cap:
        raise CapacityError(f"{k}**{n} maps exceed cap {cap}")
    table = truth_table(p).table
    found = kernels.first_symmetric_map(table, n, k)
    if found < 0:
        return None
    return MinorMap(n, k, [d + 1 for d in kernels.decode_map(found, n, k)])


def heavy_coordinate_bound(p, bound):
    bound = as_rational(bound)
    return max(abs(w) for w in p.weights) > bound * p.total_weight()


# ------------------------------------------------------------------ refutations


def _choose(choice, h, M, name):
    try:
        chosen = frozenset(choice(h))
    except ParameterError as exc:
        raise ConstructionError(f"choice undefined on {name}: {exc}") from exc
    if not chosen or len(chosen) > M:
        raise ConstructionError(f"|I({name})| = {len(chosen)} is outside [1, {M}]")
    return chosen


def build_multichoice_refutation(choice, M):
    """(f, pi, g) in WP with pi(I(f)) disjoint from I(g)."""
    if M < 1:
        raise ParameterError("M must be positive")
    f = wp_generator(2 * M)
    chosen_f = _choose(choice, f, M, "f")
    proj = BooleanFunction.projection(M + 2, 1)
    chosen_g = _choose(choice, proj, M, "g")
    j = min(c for c in range(2, M + 3) if c not in chosen_g)
    pi = MinorMap(f.arity, M + 2, [j if i in chosen_f else 1 for i in range(1, f.arity + 1)])
    g = presentation_minor(f, pi)
    if truth_table(g) != proj:
        raise ConstructionError(f"the minor {g} is not the projection on 1")
    if _choose(choice, g, M, "g") != chosen_g:
        raise ConstructionError("choice differs between g and its projection table")
    if pi.image(chosen_f) & chosen_g:
        raise ConstructionError("images of the chosen sets intersect")
    return f, pi, g


def _opposite(c):
    if c == 1:
        return None
    return c + 1 if c % 2 == 0 else c - 1


def _pair_of(c):
    return c // 2


def st_shaped(p, m):
    """Sufficient test that a weak presentation computes gen(m).

    The bottom triple must agree with gen(1) on all 8 inputs, every higher
    pair must be (w, -w), and each w must outweigh everything below it.
    """
    if p.form != WEAK or p.arity != 2 * m + 1 or p.threshold != 0:
        return False
    a = p.weights
    if m == 0:
        return a[0] > 0
    bottom = LtfPresentation(a[:3], 0, WEAK)
    if truth_table(bottom) != truth_table(st_generator(1)):
        return False
    lo = sum(x for x in a[:3] if x < 0)
    hi = sum(x for x in a[:3] if x > 0)
    below = Fraction(0)
    for k in range(2, m + 1):
        w = a[2 * k - 1]
        if w <= 0 or a[2 * k] != -w:
            return False
        if not (w > below - lo and w >= below + hi):
            return False
        below += w
    return True


def _step_targets(chosen_next):
    """Preferred zero-weight target in the next generator: an opposite of a chosen one."""
    opp = sorted(c for c in (_opposite(x) for x in chosen_next)
                 if c is not None and c not in chosen_next)
    if opp:
        return opp[0]
    n = max(chosen_next | {3})
    return min(c for c in range(2, n + 3) if c not in chosen_next)


def _step_map(m_from, m_to, carry, chosen_next):
    """Map gen(m_from) onto gen(m_to) sending ``carry`` to one coordinate.

    Returns (map, target). ``carry`` plus the opposites of its members form
    one block. Without coordinate 1 the block weighs 0 and may join any
    coordinate; with it, the block weighs 1 and replaces coordinate 1 or 2.
    """
    block = set(carry)
    block |= {_opposite(c) for c in carry if c != 1}
    used = {_pair_of(c) for c in block if c != 1}
    free = [k for k in range(1, m_from + 1) if k not in used]
    images = {}
    if 1 in block:
        if 1 not in chosen_next:
            target, start = 1, 0
            slots = list(range(1, m_to + 1))
        elif 2 not in chosen_next:
            if not free:
                raise ConstructionError("no pair left to rebuild the bottom")
            target, low = 2, free[0]
            images[2 * low], images[2 * low + 1] = 1, 3
            start = 1
            slots = list(range(2, m_to + 1))
        else:
            raise ConstructionError("coordinates 1 and 2 are both chosen in the next generator")
    else:
        target = _step_targets(chosen_next)
        images[1] = 1
        start = 0
        slots = list(range(1, m_to + 1))
    rest = free[start:]
    if len(rest) < len(slots):
        raise ConstructionError(f"gen({m_from}) has too few free pairs for gen({m_to})")
    for k, slot in zip(rest, slots):
        images[2 * k], images[2 * k + 1] = 2 * slot, 2 * slot + 1
    for k in rest[len(slots):]:
        block |= {2 * k, 2 * k + 1}
    for c in block:
        images[c] = target
    n_from = 2 * m_from + 1
    return MinorMap(n_from, 2 * m_to + 1, [images[c] for c in range(1, n_from + 1)]), target


def _pairs_needed(chosen, carry_options):
    worst = 0
    for extra in carry_options:
        carry = set(chosen) | {extra}
        block = carry | {_opposite(c) for c in carry if c != 1}
        used = len({_pair_of(c) for c in block if c != 1})
        if 1 in block:
            used += 1
        worst = max(worst, used)
    return worst


def _chain_sizes(choice, M):
    sizes = [M + 1]
    while len(sizes) < M:
        m_next = sizes[0]
        m = m_next + 1
        while True:
            if 2 * m + 1 > TABLE_ARITY_CAP:
                raise ConstructionError("generators needed exceed the truth-table cap")
            chosen = _choose(choice, st_generator(m), M, f"gen({m})")
            options = {_step_targets(chosen), 1, 2} - chosen
            if m - _pairs_needed(chosen, options) >= m_next:
                break
            m += 1
        sizes.insert(0, m)
    return sizes


def build_layered_refutation(choice, M):
    """A verified chain of M generators whose chosen sets never meet downstream."""
    if M < 1:
        raise ParameterError("M must be positive")
    sizes = _chain_sizes(choice, M)
    gens = [st_generator(m) for m in sizes]
    chosen = [_choose(choice, g, M, f"gen({m})") for g, m in zip(gens, sizes)]
    maps = []
    carry_extra = _step_targets(chosen[0]) if M > 1 else None
    for i in range(M - 1):
        carry = set(chosen[i]) | {carry_extra}
        pi, carry_extra = _step_map(sizes[i], sizes[i + 1], carry, chosen[i + 1])
        minor = presentation_minor(gens[i], pi)
        if not st_shaped(minor, sizes[i + 1]):
            raise ConstructionError(f"step {i + 1} does not produce gen({sizes[i + 1]})")
        maps.append(pi)
    chain = MinorChain(gens, maps)
    chain.verify()
    for i in range(1, M):
        for j in range(i + 1, M + 1):
            if compose(chain, i, j).image(chosen[i - 1]) & chosen[j - 1]:
                raise ConstructionError(f"chosen sets of f_{i} and f_{j} meet")
    return chain


def restricted_top_choice(N, M, functions):
    """Table choice: the first M of the top-3N ranking, for the given functions."""
    table = {}
    for h in functions:
        ranked = ranked_coordinates(h)
        table[function_digest(h)] = ranked[:min(3 * N, M, len(ranked))]
    return ChoiceFunction.from_table(table)


def st_generator_choice_table(N, M, largest):
    """Restricted top-3N table over gen(0..largest) and the projections used above."""
    return restricted_top_choice(N, M, [st_generator(m) for m in range(largest + 1)])
