"""Bipartite and layered Label Cover, smoothness, chains and minor conditions.

Vertices and labels are 1-based. A constraint is a MinorMap ``[l] -> [r]``.
Layered variables are tuples of bipartite vertices, written ``z1.y2.y3``.
"""

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod

import numpy as np

from .boolean_core import MinorMap
from .errors import CapacityError, ParameterError, StructuralError

ENUMERATION_CAP = 2_000_000


@dataclass(frozen=True)
class BipartiteLC:
    """Left vertices 1..left, right vertices 1..right, one constraint per edge."""

    left: int
    right: int
    l: int
    r: int
    edges: tuple  # of (y, z, MinorMap [l] -> [r])

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(
            ((int(y), int(z), pi) for y, z, pi in self.edges), key=lambda e: (e[0], e[1]))))
        seen = set()
        for y, z, pi in self.edges:
            if not (1 <= y <= self.left and 1 <= z <= self.right):
                raise StructuralError(f"edge ({y}, {z}) leaves the vertex sets")
            if (y, z) in seen:
                raise StructuralError(f"edge ({y}, {z}) appears twice")
            seen.add((y, z))
            if pi.from_arity != self.l or pi.to_arity != self.r:
                raise StructuralError(f"constraint on ({y}, {z}) is not [l] -> [r]")
        ydeg = {y: 0 for y in range(1, self.left + 1)}
        zdeg = {z: 0 for z in range(1, self.right + 1)}
        for y, z, _ in self.edges:
            ydeg[y] += 1
            zdeg[z] += 1
        if len(set(ydeg.values())) > 1 or len(set(zdeg.values())) > 1:
            raise StructuralError("graph is not biregular")

    @property
    def y_degree(self):
        return len(self.edges) // self.left

    def neighbours(self, y):
        return [(z, pi) for yy, z, pi in self.edges if yy == y]

    def constraint(self, y, z):
        for yy, zz, pi in self.edges:
            if (yy, zz) == (y, z):
                return pi
        raise KeyError((y, z))

    def satisfies(self, sigma_y, sigma_z):
        return all(pi(sigma_y[y - 1]) == sigma_z[z - 1] for y, z, pi in self.edges)


def _collision_counts(maps, labels, s):
    """For each set size k in 2..s, per subset, how many maps shrink it."""
    arr = np.array([pi.zero_based() for pi in maps], dtype=np.int64).reshape(len(maps), labels)
    eq = arr[:, :, None] == arr[:, None, :]  # (maps, labels, labels)
    out = {}
    for k in range(2, s + 1):
        subsets = np.array(list(itertools.combinations(range(labels), k)), dtype=np.int64)
        if subsets.size == 0:
            continue
        hit = np.zeros((len(maps), len(subsets)), dtype=np.bool_)
        for a, b in itertools.combinations(range(k), 2):
            hit |= eq[:, subsets[:, a], subsets[:, b]]
        out[k] = hit.sum(axis=0)
    return out


def measure_smoothness(gamma, max_set_size):
    """Least delta with Pr_z[|pi(S)| < |S|] <= delta |S|^2 for all y and 2 <= |S| <= s."""
    s = int(max_set_size)
    if s < 2:
        raise ParameterError("set size bound must be at least 2")
    work = gamma.left * sum(comb(gamma.l, k) for k in range(2, s + 1)) * max(gamma.y_degree, 1)
    if work > ENUMERATION_CAP:
        raise CapacityError(f"smoothness enumeration of {work} cases exceeds cap")
    delta = Fraction(0)
    for y in range(1, gamma.left + 1):
        maps = [pi for _, pi in gamma.neighbours(y)]
        if not maps:
            continue
        for k, counts in _collision_counts(maps, gamma.l, s).items():
            delta = max(delta, Fraction(int(counts.max()), len(maps) * k * k))
    return delta


# ------------------------------------------------------------------ layered instances


@dataclass(frozen=True)
class LayeredLC:
    """Layers of named variables, label counts, and constraints per (i, j) edge.

    ``edges[(i, j)]`` maps ``(a, b)`` (1-based positions in layers i, j) to the
    constraint ``[c_i] -> [c_j]``. Layers are numbered from 1.
    """

    layers: tuple
    domains: tuple
    edges: dict

    @property
    def L(self):
        return len(self.layers)

    def neighbours(self, i, a, j):
        return [b for (aa, b) in self.edges.get((i, j), {}) if aa == a]

    def check_transitive(self):
        for i in range(1, self.L + 1):
            for j in range(i + 1, self.L + 1):
                for k in range(j + 1, self.L + 1):
                    ik = self.edges.get((i, k), {})
                    for (a, b) in self.edges.get((i, j), {}):
                        for c in self.neighbours(j, b, k):
                            if (a, c) not in ik:
                                return False
        return True

    def check_biregular(self):
        for (i, j), es in self.edges.items():
            left = [0] * len(self.layers[i - 1])
            right = [0] * len(self.layers[j - 1])
            for a, b in es:
                left[a - 1] += 1
                right[b - 1] += 1
            if len(set(left)) > 1 or len(set(right)) > 1:
                return False
        return True


def _label_codec(sizes):
    """1-based label of a tuple of 1-based coordinates (first coordinate most significant)."""
    def encode(values):
        code = 0
        for v, size in zip(values, sizes):
            code = code * size + (v - 1)
        return code + 1

    def decode(label):
        label -= 1
        out = []
        for size in reversed(sizes):
            label, v = divmod(label, size)
            out.append(v + 1)
        return tuple(reversed(out))

    return encode, decode


def layerize(gamma, L, cap=ENUMERATION_CAP):
    """The layered instance built from tuples of bipartite vertices."""
    if L < 2:
        raise ParameterError("layered instances need L >= 2")
    sizes = [gamma.right**i * gamma.left**(L - i) for i in range(1, L + 1)]
    labels = [gamma.r**i * gamma.l**(L - i) for i in range(1, L + 1)]
    if sum(sizes) * max(labels) > cap:
        raise CapacityError("layered instance exceeds cap")
    adj = {}
    for y, z, pi in gamma.edges:
        adj.setdefault(y, []).append((z, pi))

    def name(vs, i):
        return ".".join((f"z{v}" if k < i else f"y{v}") for k, v in enumerate(vs))

    layers, index = [], []
    for i in range(1, L + 1):
        members = list(itertools.product(range(1, gamma.right + 1), repeat=i))
        tails = list(itertools.product(range(1, gamma.left + 1), repeat=L - i))
        tuples = [head + tail for head in members for tail in tails]
        layers.append(tuple(name(t, i) for t in tuples))
        index.append({t: pos for pos, t in enumerate(tuples, start=1)})
    codecs = [_label_codec([gamma.r] * i + [gamma.l] * (L - i)) for i in range(1, L + 1)]
    edges = {}
    for i in range(1, L + 1):
        for j in range(i + 1, L + 1):
            es = {}
            enc_j = codecs[j - 1][0]
            dec_i = codecs[i - 1][1]
            for t, a in index[i - 1].items():
                swapped = [adj.get(t[k], []) for k in range(i, j)]
                for choice in itertools.product(*swapped):
                    target = t[:i] + tuple(z for z, _ in choice) + t[j:]
                    maps = [pi for _, pi in choice]
                    images = []
                    for label in range(1, labels[i - 1] + 1):
                        vals = list(dec_i(label))
                        for off, pi in enumerate(maps):
                            vals[i + off] = pi(vals[i + off])
                        images.append(enc_j(vals))
                    es[(a, index[j - 1][target])] = MinorMap(labels[i - 1], labels[j - 1], images)
            edges[(i, j)] = es
    phi = LayeredLC(tuple(layers), tuple(labels), edges)
    if not phi.check_transitive():
        raise StructuralError("layered construction is not transitive")
    return phi


def lift_assignment(gamma, L, sigma_y, sigma_z):
    """x -> (sigma(x_1), ..., sigma(x_L)) encoded as layer labels."""
    out = []
    for i in range(1, L + 1):
        enc = _label_codec([gamma.r] * i + [gamma.l] * (L - i))[0]
        values = []
        for head in itertools.product(range(1, gamma.right + 1), repeat=i):
            for tail in itertools.product(range(1, gamma.left + 1), repeat=L - i):
                values.append(enc([sigma_z[z - 1] for z in head] + [sigma_y[y - 1] for y in tail]))
        out.append(tuple(values))
    return tuple(out)


def enumerate_chains(phi, cap=ENUMERATION_CAP):
    """All (x_1, ..., x_L) with every pair joined by an edge, positions 1-based."""
    chains = []
    partial = [(a,) for a in range(1, len(phi.layers[0]) + 1)]
    for k in range(2, phi.L + 1):
        grown = []
        for prefix in partial:
            for b in phi.neighbours(k - 1, prefix[-1], k):
                if all((prefix[i - 1], b) in phi.edges.get((i, k), {}) for i in range(1, k - 1)):
                    grown.append(prefix + (b,))
                    if len(grown) > cap:
                        raise CapacityError(f"more than {cap} chains")
        partial = grown
    chains = partial
    return chains


def weak_sat_fraction(phi, sigma, cap=ENUMERATION_CAP):
    """Fraction of chains with at least one satisfied constraint."""
    chains = enumerate_chains(phi, cap)
    if not chains:
        return Fraction(0)
    good = 0
    for chain in chains:
        for i, j in itertools.combinations(range(1, phi.L + 1), 2):
            a, b = chain[i - 1], chain[j - 1]
            if phi.edges[(i, j)][(a, b)](sigma[i - 1][a - 1]) == sigma[j - 1][b - 1]:
                good += 1
                break
    return Fraction(good, len(chains))


def fully_satisfies(phi, sigma):
    return all(pi(sigma[i - 1][a - 1]) == sigma[j - 1][b - 1]
               for (i, j), es in phi.edges.items() for (a, b), pi in es.items())


def layered_smoothness_holds(phi, delta, max_set_size=3):
    """Adjacent-layer smoothness: every x_i, every S with |S| <= s, every i < L."""
    s = int(max_set_size)
    for i in range(1, phi.L):
        es = phi.edges.get((i, i + 1), {})
        by_source = {}
        for (a, b), pi in es.items():
            by_source.setdefault(a, []).append(pi)
        for maps in by_source.values():
            for k, counts in _collision_counts(maps, phi.domains[i - 1], s).items():
                if Fraction(int(counts.max()), len(maps)) > delta * k * k:
                    return False
    return True


def chain_count_formula(gamma, L):
    return gamma.right * len(gamma.edges) ** (L - 1)


# ------------------------------------------------------------------ minor conditions


@dataclass(frozen=True)
class MinorCondition:
    """Symbols per layer (name, arity) and identities (i, a, j, b, pi).

    An identity says the symbol at position b of layer j is the pi-minor of
    the symbol at position a of layer i.
    """

    symbols: tuple
    identities: tuple

    def __post_init__(self):
        for i, a, j, b, pi in self.identities:
            if not i < j:
                raise StructuralError("identities must go from a lower to a higher layer")
            if (pi.from_arity != self.symbols[i - 1][a - 1][1]
                    or pi.to_arity != self.symbols[j - 1][b - 1][1]):
                raise StructuralError(f"identity ({i}, {a}) -> ({j}, {b}) has wrong arities")


def to_minor_condition(phi):
    symbols = tuple(tuple((f"f_{x}", c) for x in layer)
                    for layer, c in zip(phi.layers, phi.domains))
    identities = tuple((i, a, j, b, pi) for (i, j), es in sorted(phi.edges.items())
                       for (a, b), pi in sorted(es.items(), key=lambda e: e[0]))
    return MinorCondition(symbols, identities)


def minor_condition_trivial(sigma_cond, cap=ENUMERATION_CAP):
    """A coordinate per symbol making every identity hold for projections, or None.

    Depth-first search in layer order; each identity is checked as soon as
    both of its symbols carry a coordinate.
    """
    order = [(i, a) for i, layer in enumerate(sigma_cond.symbols, start=1)
             for a in range(1, len(layer) + 1)]
    pos = {v: k for k, v in enumerate(order)}
    checks = [[] for _ in order]
    for i, a, j, b, pi in sigma_cond.identities:
        checks[max(pos[(i, a)], pos[(j, b)])].append((pos[(i, a)], pos[(j, b)], pi))
    arity = [sigma_cond.symbols[i - 1][a - 1][1] for i, a in order]
    value = [0] * len(order)
    nodes = 0

    def consistent(k):
        return all(pi(value[src]) == value[dst] for src, dst, pi in checks[k])

    def search(k):
        nonlocal nodes
        if k == len(order):
            return True
        for v in range(1, arity[k] + 1):
            nodes += 1
            if nodes > cap:
                raise CapacityError(f"projection search exceeded {cap} nodes")
            value[k] = v
            if consistent(k) and search(k + 1):
                return True
        return False

    if not search(0):
        return None
    out = [[0] * len(layer) for layer in sigma_cond.symbols]
    for (i, a), v in zip(order, value):
        out[i - 1][a - 1] = v
    return tuple(map(tuple, out))


def layered_satisfiable_bruteforce(phi, cap=ENUMERATION_CAP):
    """Exhaustive check for an assignment satisfying every constraint."""
    sizes = [(len(layer), c) for layer, c in zip(phi.layers, phi.domains)]
    total = prod(c**n for n, c in sizes)
    if total > cap:
        raise CapacityError(f"{total} assignments exceed cap {cap}")
    offsets, width = [], 0
    for n, _ in sizes:
        offsets.append(width)
        width += n
    grids = [np.arange(1, c + 1) for n, c in sizes for _ in range(n)]
    assign = np.stack(np.meshgrid(*grids, indexing="ij"), axis=-1).reshape(-1, width)
    ok = np.ones(len(assign), dtype=np.bool_)
    for (i, j), es in phi.edges.items():
        for (a, b), pi in es.items():
            lut = np.array((0,) + pi.map)
            ok &= lut[assign[:, offsets[i - 1] + a - 1]] == assign[:, offsets[j - 1] + b - 1]
    return bool(ok.any())


# ------------------------------------------------------------------ random instances


def random_biregular(rng, left, right, y_degree, l, r, planted=None):
    """Biregular instance with random constraints.

    ``planted`` = (sigma_y, sigma_z) forces every constraint to respect it.
    """
    if (left * y_degree) % right or y_degree > right:
        raise ParameterError("degrees do not admit a simple biregular graph")
    ys = list(range(1, left + 1))
    zs = list(range(1, right + 1))
    rng.shuffle(ys)
    rng.shuffle(zs)
    edges = []
    for k in range(left * y_degree):
        y, z = ys[k // y_degree], zs[k % right]
        images = [rng.randint(1, r) for _ in range(l)]
        if planted is not None:
            images[planted[0][y - 1] - 1] = planted[1][z - 1]
        edges.append((y, z, MinorMap(l, r, images)))
    return BipartiteLC(left, right, l, r, tuple(edges))


def random_instance(rng, max_side=4, max_label=3, satisfiable=True):
    """A random small instance and, when satisfiable, its planted assignment."""
    while True:
        left = rng.randint(1, max_side)
        right = rng.randint(1, max_side)
        degrees = [d for d in range(1, right + 1) if (left * d) % right == 0]
        if degrees:
            break
    d = rng.choice(degrees)
    l, r = rng.randint(1, max_label), rng.randint(1, max_label)
    planted = None
    if satisfiable:
        planted = (tuple(rng.randint(1, l) for _ in range(left)),
                   tuple(rng.randint(1, r) for _ in range(right)))
    return random_biregular(rng, left, right, d, l, r, planted), planted


def default_rng(seed):
    return random.Random(seed)
