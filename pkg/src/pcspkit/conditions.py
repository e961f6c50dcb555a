"""Choice functions, chains of minors, and the four choice conditions.

The conditions quantify over whole (infinite) minions in general. Here they
are evaluated on explicit, finite chain families only: a verdict says whether
a given chain meets the requirement, never whether a minion does.
"""

from dataclasses import dataclass, field

from .boolean_core import BooleanFunction
from .errors import CapacityError, ParameterError, StructuralError
from .threshold import (
    LtfPresentation,
    compute_preorder,
    presentation_minor,
    truth_table,
)

# Largest arity whose truth table is materialised for digests and checks.
TABLE_ARITY_CAP = 22

VARIANTS = ("single", "multiple", "layered", "injective_layered")


def as_function(h):
    if isinstance(h, BooleanFunction):
        return h
    if h.arity > TABLE_ARITY_CAP:
        raise CapacityError(f"arity {h.arity} exceeds the truth-table cap {TABLE_ARITY_CAP}")
    return truth_table(h)


def function_digest(h):
    return as_function(h).digest


def take_minor(h, pi):
    if isinstance(h, LtfPresentation):
        return presentation_minor(h, pi)
    return h.minor(pi)


def ltf_choice(p, N):
    """The min(3N, n) coordinates highest in the preorder, ties by lower index."""
    if N < 1:
        raise ParameterError("N must be positive")
    order = compute_preorder(p)
    n = order.arity
    ranked = sorted(range(1, n + 1), key=lambda i: (-order.below_count(i), i))
    chosen = frozenset(ranked[:min(3 * N, n)])
    partial = [c for c in order.classes() if c & chosen and not c <= chosen]
    if len(partial) > 1:
        raise AssertionError(f"choice cuts {len(partial)} classes")
    return chosen


def ranked_coordinates(p):
    order = compute_preorder(p)
    return sorted(range(1, order.arity + 1), key=lambda i: (-order.below_count(i), i))


def _projection_coordinate(f):
    for i in range(1, f.arity + 1):
        if f == BooleanFunction.projection(f.arity, i):
            return i
    return None


@dataclass(frozen=True)
class ChoiceFunction:
    """``dictator``, ``top3N`` (with ``N``) or ``table`` (digest -> coordinates)."""

    kind: str
    N: int = None
    table: dict = field(default=None, hash=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("dictator", "top3N", "table"):
            raise ParameterError(f"unknown choice kind {self.kind!r}")
        if self.kind == "top3N" and (self.N is None or self.N < 1):
            raise ParameterError("top3N needs a positive N")
        if self.kind == "table":
            if self.table is None:
                raise ParameterError("table choice needs a table")
            object.__setattr__(self, "table",
                               {k: frozenset(v) for k, v in self.table.items()})

    @classmethod
    def dictator(cls):
        return cls("dictator")

    @classmethod
    def top3n(cls, N):
        return cls("top3N", N)

    @classmethod
    def from_table(cls, table):
        return cls("table", table=table)

    def __call__(self, h):
        if self.kind == "top3N":
            return ltf_choice(h, self.N)
        if self.kind == "dictator":
            i = _projection_coordinate(as_function(h))
            if i is None:
                raise ParameterError("dictator choice is only defined on projections")
            return frozenset({i})
        key = function_digest(h)
        if key not in self.table:
            raise ParameterError(f"function {key[:12]} is not in the choice table")
        return self.table[key]


@dataclass(frozen=True)
class MinorChain:
    """f_1 -> f_2 -> ... -> f_L with the maps between consecutive members."""

    functions: tuple
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.functions:
            raise StructuralError("a chain needs at least one function")
        if len(self.maps) != len(self.functions) - 1:
            raise StructuralError("a chain of L functions needs L - 1 maps")
        for k, pi in enumerate(self.maps):
            f, g = self.functions[k], self.functions[k + 1]
            if pi.from_arity != f.arity or pi.to_arity != g.arity:
                raise StructuralError(f"map {k + 1} does not fit arities {f.arity} -> {g.arity}")

    def __len__(self):
        return len(self.functions)

    def verify(self):
        """Raise StructuralError unless each member is the minor of the previous one."""
        for k, pi in enumerate(self.maps):
            minor = as_function(take_minor(self.functions[k], pi))
            if minor != as_function(self.functions[k + 1]):
                raise StructuralError(f"f_{k + 2} is not the minor of f_{k + 1} under map {k + 1}")
        return True


def compose(chain, i, j):
    """pi_{i,j} = pi_{j-1,j} o ... o pi_{i,i+1} (1-based, i < j)."""
    if not 1 <= i < j <= len(chain):
        raise IndexError(f"need 1 <= i < j <= {len(chain)}, got {i}, {j}")
    result = chain.maps[i - 1]
    for k in range(i, j - 1):
        result = result.then(chain.maps[k])
    return result


def _verdict(k, variant, satisfied, witness=None):
    return {"chain": k, "variant": variant, "satisfied": bool(satisfied),
            "witness": {"i": witness[0], "j": witness[1]} if witness else None}


def _first_meeting_pair(chain, chosen):
    L = len(chain)
    for i in range(1, L):
        for j in range(i + 1, L + 1):
            if compose(chain, i, j).image(chosen[i - 1]) & chosen[j - 1]:
                return i, j
    return None


def _injective_on_accumulated(chain, chosen):
    for i in range(1, len(chain)):
        acc = set(chosen[i - 1])
        for k in range(1, i):
            acc |= compose(chain, k, i).image(chosen[k - 1])
        if not chain.maps[i - 1].is_injective_on(acc):
            return False
    return True


def check_condition(chains, choice, M, variant):
    """One verdict dict per chain, numbered from 1."""
    if variant not in VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}")
    out = []
    for k, chain in enumerate(chains, start=1):
        chain.verify()
        chosen = [frozenset(choice(f)) for f in chain.functions]
        for pos, c in enumerate(chosen, start=1):
            if not c:
                raise ParameterError(f"empty choice on f_{pos} of chain {k}")
            if variant == "single" and len(c) != 1:
                raise ParameterError(f"single choice needs |I| = 1, f_{pos} has {len(c)}")
            if len(c) > M:
                raise ParameterError(f"|I(f_{pos})| = {len(c)} exceeds M = {M}")
        if variant in ("single", "multiple"):
            if len(chain) != 2:
                raise StructuralError(f"{variant} choice is evaluated on chains of length 2")
            img = chain.maps[0].image(chosen[0])
            ok = img == chosen[1] if variant == "single" else bool(img & chosen[1])
            out.append(_verdict(k, variant, ok, (1, 2) if ok else None))
            continue
        if variant == "injective_layered" and not _injective_on_accumulated(chain, chosen):
            out.append(_verdict(k, variant, True))
            continue
        pair = _first_meeting_pair(chain, chosen)
        out.append(_verdict(k, variant, pair is not None, pair))
    return out


def propagate_weight_check(p, pi, chosen, eps):
    """Does pi(chosen) carry more than eps of the minor's absolute weight?"""
    chosen = set(chosen)
    if not pi.is_injective_on(chosen):
        raise ParameterError("the map must be injective on the chosen coordinates")
    b = presentation_minor(p, pi)
    inside = sum(abs(b.weights[j - 1]) for j in pi.image(chosen))
    return inside > eps * b.total_weight()
