"""Boolean relations, structures, instances, functions and minor maps.

Everything here is immutable. Variables and coordinates are 1-based in the
public API; truth tables are little-endian (coordinate 1 is bit 0 of the
input index).
"""

import hashlib
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import CapacityError, ParameterError, StructuralError

# Tuple choices enumerated by one exhaustive polymorphism check.
POLYMORPHISM_CAP = 5_000_000


def _bits(index, n):
    return tuple((index >> i) & 1 for i in range(n))


def _index(bits):
    return sum(b << i for i, b in enumerate(bits))


# ------------------------------------------------------------------ minor maps


@dataclass(frozen=True)
class MinorMap:
    """A map ``[from_arity] -> [to_arity]`` stored as the 1-based tuple of images."""

    from_arity: int
    to_arity: int
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))
        if self.from_arity < 1 or self.to_arity < 1:
            raise ParameterError("minor map arities must be positive")
        if len(self.map) != self.from_arity:
            raise ParameterError(
                f"map has {len(self.map)} entries, expected {self.from_arity}")
        for pos, v in enumerate(self.map, start=1):
            if not 1 <= v <= self.to_arity:
                raise ParameterError(f"pi({pos}) = {v} outside [1, {self.to_arity}]")

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(range(1, n + 1)))

    @classmethod
    def from_images(cls, images, to_arity=None):
        images = tuple(images)
        return cls(len(images), to_arity or max(images), images)

    def __call__(self, i):
        return self.map[i - 1]

    def __len__(self):
        return self.from_arity

    def image(self, coords=None):
        """Image of a coordinate set (of the whole domain when omitted)."""
        if coords is None:
            return frozenset(self.map)
        return frozenset(self.map[i - 1] for i in coords)

    def preimage(self, j):
        return frozenset(i for i, v in enumerate(self.map, start=1) if v == j)

    def then(self, other):
        """The composite ``other o self``: apply self first."""
        if other.from_arity != self.to_arity:
            raise ParameterError("minor maps do not compose")
        return MinorMap(self.from_arity, other.to_arity,
                        tuple(other.map[v - 1] for v in self.map))

    def is_injective_on(self, coords):
        return len(self.image(coords)) == len(set(coords))

    def is_surjective(self):
        return len(set(self.map)) == self.to_arity

    def zero_based(self):
        return np.array(self.map, dtype=np.int64) - 1


# ------------------------------------------------------------------ functions


class BooleanFunction:
    """A total function ``{0,1}^n -> {0,1}`` given by its little-endian table."""

    __slots__ = ("arity", "table", "_bytes")

    def __init__(self, arity, table):
        arity = int(arity)
        if arity < 1:
            raise ParameterError("arity must be positive")
        arr = np.array(table, dtype=np.uint8).reshape(-1)
        if arr.size != 1 << arity:
            raise ParameterError(f"table has {arr.size} entries, expected {1 << arity}")
        if np.any(arr > 1):
            raise ParameterError("table entries must be 0 or 1")
        arr.setflags(write=False)
        self.arity = arity
        self.table = arr
        self._bytes = arr.tobytes()

    @classmethod
    def from_callable(cls, arity, fn):
        return cls(arity, [int(fn(_bits(x, arity))) for x in range(1 << arity)])

    @classmethod
    def from_code(cls, arity, code):
        return cls(arity, [(code >> x) & 1 for x in range(1 << arity)])

    @classmethod
    def projection(cls, arity, i):
        return cls(arity, (np.arange(1 << arity) >> (i - 1)) & 1)

    @classmethod
    def constant(cls, arity, value):
        return cls(arity, np.full(1 << arity, value, dtype=np.uint8))

    def __call__(self, x):
        if len(x) != self.arity:
            raise ParameterError(f"expected {self.arity} inputs, got {len(x)}")
        return int(self.table[_index(x)])

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.arity == other.arity and self._bytes == other._bytes

    def __hash__(self):
        return hash((self.arity, self._bytes))

    def __repr__(self):
        return f"BooleanFunction({self.arity}, {''.join(map(str, self.table))})"

    @property
    def code(self):
        """The table packed into an int, bit x holding f(x)."""
        return int.from_bytes(np.packbits(self.table, bitorder="little").tobytes(), "little")

    @property
    def digest(self):
        """Hex sha256 of arity and table; the key used by table choice functions."""
        h = hashlib.sha256(f"{self.arity}:".encode())
        h.update(self._bytes)
        return h.hexdigest()

    def minor(self, pi):
        """The pi-minor ``g(y) = f(y_pi(1), ..., y_pi(n))``."""
        if pi.from_arity != self.arity:
            raise ParameterError(
                f"minor map starts at arity {pi.from_arity}, function has {self.arity}")
        idx = kernels.minor_indices(pi.zero_based(), pi.to_arity)
        return BooleanFunction(pi.to_arity, self.table[idx])

    def identify(self, i, j):
        """Merge coordinate j into i and drop j. Returns (minor, map)."""
        if i == j or not (1 <= i <= self.arity and 1 <= j <= self.arity):
            raise ParameterError("identify needs two distinct coordinates")
        images = []
        for k in range(1, self.arity + 1):
            src = i if k == j else k
            images.append(src - (1 if src > j else 0))
        pi = MinorMap(self.arity, self.arity - 1, images)
        return self.minor(pi), pi

    def negate_inputs(self):
        return BooleanFunction(self.arity, self.table[::-1])

    def is_idempotent(self):
        return self.table[0] == 0 and self.table[-1] == 1

    def is_folded(self):
        return bool(np.all(self.table == 1 - self.table[::-1]))

    def is_symmetric(self):
        pop = np.array([bin(x).count("1") for x in range(1 << self.arity)])
        return bool(np.all(self.table == self.table[(1 << pop) - 1]))

    def unary_minor(self):
        return self.minor(MinorMap(self.arity, 1, (1,) * self.arity))


# ------------------------------------------------------------------ relations


@dataclass(frozen=True)
class BooleanRelation:
    arity: int
    tuples: tuple

    def __post_init__(self):
        if self.arity < 1:
            raise ParameterError("relation arity must be positive")
        seen = set()
        for pos, t in enumerate(self.tuples):
            t = tuple(int(b) for b in t)
            if len(t) != self.arity:
                raise ParameterError(f"tuple {pos} has length {len(t)}, expected {self.arity}")
            if any(b not in (0, 1) for b in t):
                raise ParameterError(f"tuple {pos} is not a 0/1 tuple")
            seen.add(t)
        object.__setattr__(self, "tuples", tuple(sorted(seen)))

    def __contains__(self, t):
        return tuple(t) in self._lookup

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    @property
    def _lookup(self):
        return _tuple_set(self)

    def accept_mask(self):
        """Boolean array over packed tuples (bit c = column c)."""
        mask = np.zeros(1 << self.arity, dtype=np.bool_)
        for t in self.tuples:
            mask[_index(t)] = True
        return mask


@lru_cache(maxsize=None)
def _tuple_set(rel):
    return frozenset(rel.tuples)


@dataclass(frozen=True)
class BooleanStructure:
    relations: tuple

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))

    @property
    def signature(self):
        return tuple(r.arity for r in self.relations)


@dataclass(frozen=True)
class Instance:
    """Variables ``1..variable_count`` and constraints ``(scope, relation_index)``.

    ``relation_index`` is 0-based into the template's relation list.
    """

    variable_count: int
    constraints: tuple

    def __post_init__(self):
        if self.variable_count < 1:
            raise ParameterError("an instance needs at least one variable")
        cons = []
        for pos, (scope, rel) in enumerate(self.constraints):
            scope = tuple(int(v) for v in scope)
            for v in scope:
                if not 1 <= v <= self.variable_count:
                    raise ParameterError(f"constraint {pos} uses variable {v} out of range")
            cons.append((scope, int(rel)))
        object.__setattr__(self, "constraints", tuple(cons))

    def check_against(self, template):
        sig = template.signature
        for pos, (scope, rel) in enumerate(self.constraints):
            if not 0 <= rel < len(sig):
                raise StructuralError(f"constraint {pos} references relation {rel}")
            if len(scope) != sig[rel]:
                raise StructuralError(
                    f"constraint {pos} has scope length {len(scope)}, relation arity {sig[rel]}")


def _assignment(h, n):
    if isinstance(h, dict):
        missing = [v for v in range(1, n + 1) if v not in h]
        if missing:
            raise ParameterError(f"assignment misses variables {missing}")
        values = [h[v] for v in range(1, n + 1)]
    else:
        values = list(h)
        if len(values) != n:
            raise ParameterError(f"assignment has {len(values)} values, expected {n}")
    if any(v not in (0, 1) for v in values):
        raise ParameterError("assignment values must be 0 or 1")
    return values


def is_homomorphism(h, inst, target):
    """Does ``h`` (dict var -> bit, or sequence for vars 1..n) satisfy every constraint?"""
    inst.check_against(target)
    values = _assignment(h, inst.variable_count)
    for scope, rel in inst.constraints:
        if tuple(values[v - 1] for v in scope) not in target.relations[rel]:
            return False
    return True


def _check_similar(a, b):
    if a.signature != b.signature:
        raise StructuralError(f"signatures differ: {a.signature} vs {b.signature}")


@lru_cache(maxsize=256)
def choice_indices(rel, n):
    """Inputs read per column for every choice of n tuples of ``rel``.

    Row c, column col holds the index whose bit i is column col of the i-th
    chosen tuple, so applying a function is a table lookup.
    """
    count = len(rel) ** n
    if count > POLYMORPHISM_CAP:
        raise CapacityError(f"{count} tuple choices exceed cap {POLYMORPHISM_CAP}")
    tuples = np.array(rel.tuples, dtype=np.int64).reshape(len(rel), rel.arity)
    idx = np.zeros((count, rel.arity), dtype=np.int64)
    if count == 0:
        return idx
    rows = np.array(list(itertools.product(range(len(rel)), repeat=n)),
                    dtype=np.int64).reshape(count, n)
    for i in range(n):
        idx |= tuples[rows[:, i]] << i
    idx.setflags(write=False)
    return idx


def polymorphism_mask(tables, arity, a, b):
    """Vectorised ``is_polymorphism`` over many same-arity tables."""
    _check_similar(a, b)
    tables = np.atleast_2d(np.asarray(tables, dtype=np.uint8))
    ok = np.ones(tables.shape[0], dtype=np.bool_)
    for ra, rb in zip(a.relations, b.relations):
        if len(ra) == 0:
            continue
        ok &= kernels.polymorphism_batch(tables, choice_indices(ra, arity), rb.accept_mask())
    return ok


def is_polymorphism(f, a, b):
    return bool(polymorphism_mask(f.table, f.arity, a, b)[0])


def identify_coordinates(rel, pattern):
    """Relation defined by ``R(x_pattern(1), ..., x_pattern(k))`` on the codomain.

    Codomain positions outside the image are unconstrained.
    """
    if pattern.from_arity != rel.arity:
        raise ParameterError("pattern domain must equal the relation arity")
    m = pattern.to_arity
    free = [j for j in range(1, m + 1) if j not in pattern.image()]
    out = set()
    for t in rel:
        img = [None] * m
        consistent = True
        for i, v in enumerate(t):
            j = pattern.map[i] - 1
            if img[j] is None:
                img[j] = v
            elif img[j] != v:
                consistent = False
                break
        if not consistent:
            continue
        for fill in itertools.product((0, 1), repeat=len(free)):
            for j, v in zip(free, fill):
                img[j - 1] = v
            out.add(tuple(img))
    return BooleanRelation(m, tuple(out))


def close_relation(rel, fns):
    """Smallest superset of ``rel`` closed under every function in ``fns``."""
    if len(rel) == 0:
        raise ParameterError("closure needs a nonempty relation")
    current = set(rel.tuples)
    shifts = np.arange(rel.arity, dtype=np.int64)
    while True:
        snapshot = BooleanRelation(rel.arity, tuple(current))
        new = set()
        for f in fns:
            idx = choice_indices(snapshot, f.arity)
            codes = (f.table[idx].astype(np.int64) << shifts).sum(axis=1)
            for code in np.unique(codes):
                t = _bits(int(code), rel.arity)
                if t not in current:
                    new.add(t)
        if not new:
            return snapshot
        current |= new


# ------------------------------------------------------------------ templates


def make_relation(kind, *params):
    """Named relations: ``nae k``, ``k_in_l k l``, ``builtin_R``, ``builtin_2in4``."""
    if kind == "nae":
        (k,) = params
        if k < 1:
            raise ParameterError("NAE arity must be at least 1")
        tuples = [t for t in itertools.product((0, 1), repeat=k) if 0 < sum(t) < k]
        return BooleanRelation(k, tuple(tuples))
    if kind == "k_in_l":
        k, l = params
        if l < 1 or not 0 <= k <= l:
            raise ParameterError(f"k_in_l needs 0 <= k <= l, l >= 1 (got {k}, {l})")
        tuples = [t for t in itertools.product((0, 1), repeat=l) if sum(t) == k]
        return BooleanRelation(l, tuple(tuples))
    if kind == "builtin_R":
        rows = ("101010", "010101", "110000", "001100", "000011")
        return BooleanRelation(6, tuple(tuple(int(c) for c in r) for r in rows))
    if kind == "builtin_2in4":
        return make_relation("k_in_l", 2, 4)
    raise ParameterError(f"unknown relation kind {kind!r}")


def st_left():
    """Source template of the ST characterization: (R, 2-in-4)."""
    return BooleanStructure((make_relation("builtin_R"), make_relation("builtin_2in4")))


def st_right():
    """Target template: (NAE_6, NAE_4)."""
    return BooleanStructure((make_relation("nae", 6), make_relation("nae", 4)))


def constant_structure(value):
    """The one-element template ``({value})`` used to test idempotency."""
    return BooleanStructure((BooleanRelation(1, ((value,),)),))
