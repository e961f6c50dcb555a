"""Exact linear threshold presentations and the machinery built on them.

A presentation is a weight tuple with a threshold. The weak form outputs 0
iff the weighted sum is at most the threshold. The strict form outputs 0
below, 1 above, and is undefined on inputs whose sum equals the threshold.
All arithmetic uses ``fractions.Fraction``.
"""

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .boolean_core import BooleanFunction, MinorMap
from .errors import InvariantError, ParameterError, TotalityError

WEAK = "weak"
STRICT = "strict"

MONOTONE = "monotone"
ANTIMONOTONE = "antimonotone"
BOTH = "both"
NEITHER = "neither"


def as_rational(value):
    """Exact rational from an int, Fraction or ``"p/q"`` string."""
    if isinstance(value, bool):
        raise ParameterError("booleans are not rationals")
    if isinstance(value, numbers.Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"not a rational: {value!r}") from exc
    raise ParameterError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class LtfPresentation:
    weights: tuple
    threshold: Fraction
    form: str = WEAK

    def __post_init__(self):
        weights = tuple(as_rational(w) for w in self.weights)
        if not weights:
            raise ParameterError("a presentation needs at least one weight")
        if self.form not in (WEAK, STRICT):
            raise ParameterError(f"form must be weak or strict, got {self.form!r}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "threshold", as_rational(self.threshold))

    @property
    def arity(self):
        return len(self.weights)

    def total_weight(self):
        return sum(abs(w) for w in self.weights)

    def __str__(self):
        ws = ", ".join(str(w) for w in self.weights)
        return f"{self.form} ({ws} | {self.threshold})"


def evaluate(p, x):
    """0, 1, or None where a strict presentation is undefined."""
    if len(x) != p.arity:
        raise ParameterError(f"input has length {len(x)}, presentation arity {p.arity}")
    s = sum(w for w, b in zip(p.weights, x) if b)
    if p.form == WEAK:
        return 0 if s <= p.threshold else 1
    if s == p.threshold:
        return None
    return 0 if s < p.threshold else 1


def _integer_scaled(p):
    denom = math.lcm(p.threshold.denominator, *(w.denominator for w in p.weights))
    return [int(w * denom) for w in p.weights], int(p.threshold * denom)


def subset_sums(p):
    """Weighted sum of every input, little-endian, as integers after scaling.

    Returns ``(sums, threshold)`` on a common integer scale.
    """
    weights, threshold = _integer_scaled(p)
    bound = sum(abs(w) for w in weights) + abs(threshold)
    dtype = np.int64 if bound < 2**62 else object
    sums = np.zeros(1, dtype=dtype)
    for w in weights:
        sums = np.concatenate((sums, sums + w))
    return sums, threshold


def partial_table(p):
    """int8 table with -1 where a strict presentation is undefined."""
    sums, t = subset_sums(p)
    out = (sums > t).astype(np.int8)
    if p.form == STRICT:
        out[sums == t] = -1
    return out


def is_total(p):
    if p.form == WEAK:
        return True
    sums, t = subset_sums(p)
    return not bool(np.any(sums == t))


def truth_table(p):
    table = partial_table(p)
    if np.any(table < 0):
        raise TotalityError(f"{p} is undefined on some input")
    return BooleanFunction(p.arity, table)


def convert_form(p, target):
    if target not in (WEAK, STRICT):
        raise ParameterError(f"unknown form {target!r}")
    if p.form == target:
        return p
    if target == WEAK:
        if not is_total(p):
            raise TotalityError(f"{p} is undefined on some input")
        return LtfPresentation(p.weights, p.threshold, WEAK)
    sums, t = subset_sums(p)
    denom = math.lcm(p.threshold.denominator, *(w.denominator for w in p.weights))
    above = sums[sums > t]
    if above.size:
        new_t = Fraction(int(above.min()) + t, 2 * denom)
    else:
        new_t = Fraction(int(sums.max()) + 1, denom)
    return LtfPresentation(p.weights, new_t, STRICT)


def presentation_minor(p, pi):
    if pi.from_arity != p.arity:
        raise ParameterError(f"map starts at arity {pi.from_arity}, presentation has {p.arity}")
    weights = [Fraction(0)] * pi.to_arity
    for w, j in zip(p.weights, pi.map):
        weights[j - 1] += w
    return LtfPresentation(weights, p.threshold, p.form)


def scale(p, c):
    c = as_rational(c)
    if c <= 0:
        raise ParameterError("scaling factor must be positive")
    return LtfPresentation([c * w for w in p.weights], c * p.threshold, p.form)


def linf_distance(p, q):
    if p.arity != q.arity:
        raise ParameterError("distance needs equal arities")
    return max(abs(p.threshold - q.threshold),
               *(abs(a - b) for a, b in zip(p.weights, q.weights)))


# ------------------------------------------------------------------ monotonicity and preorder


def _split(table, n, i):
    """(f with x_i = 0, f with x_i = 1) over the remaining coordinates."""
    t = np.asarray(table).reshape(1 << (n - i), 2, 1 << (i - 1))
    return t[:, 0, :], t[:, 1, :]


def _pair_blocks(table, n, i, j):
    """Blocks f[x_i = u, x_j = v] keyed by (u, v) for distinct i, j."""
    lo, hi = min(i, j), max(i, j)
    t = np.asarray(table).reshape(1 << (n - hi), 2, 1 << (hi - lo - 1), 2, 1 << (lo - 1))
    blocks = {}
    for u in (0, 1):
        for v in (0, 1):
            b_lo, b_hi = (u, v) if i == lo else (v, u)
            blocks[u, v] = t[:, b_hi, :, b_lo, :]
    return blocks


def monotonicity(f, i):
    if not 1 <= i <= f.arity:
        raise ParameterError(f"coordinate {i} outside [1, {f.arity}]")
    if isinstance(f, LtfPresentation):
        return _tests_for(f).kind(i)
    t0, t1 = _split(f.table, f.arity, i)
    up, down = bool(np.all(t0 <= t1)), bool(np.all(t0 >= t1))
    if up and down:
        return BOTH
    if up:
        return MONOTONE
    if down:
        return ANTIMONOTONE
    return NEITHER


def _types(kind):
    return (MONOTONE, ANTIMONOTONE) if kind == BOTH else (kind,)


class _TableTests:
    """Preorder tests read off a truth table."""

    def __init__(self, f):
        self.f = f
        self.n = f.arity

    def kind(self, i):
        return monotonicity(self.f, i)

    def branch(self, i, j, ti, tj):
        blocks = _pair_blocks(self.f.table, self.n, i, j)
        if ti == tj:
            # compare f(x_i=1, x_j=0) with f(x_i=0, x_j=1)
            a, b = blocks[1, 0], blocks[0, 1]
            return bool(np.all(a <= b)) if ti == MONOTONE else bool(np.all(a >= b))
        # mixed: the merged coordinate of the identified minor must behave like j
        low, high = blocks[0, 0], blocks[1, 1]
        return bool(np.all(low <= high)) if tj == MONOTONE else bool(np.all(low >= high))


# Largest integer span of subset sums handled with bitsets.
SUM_SPAN_CAP = 1 << 22


class _SumTests:
    """The same tests answered from reachable subset sums of a weak presentation.

    Each test fails exactly when some sum of the other coordinates falls in a
    half-open interval (lo, hi], so a bitset of reachable sums decides it
    without a 2^n table.
    """

    def __init__(self, p):
        self.w, self.t = _integer_scaled(p)
        self.n = len(self.w)
        self.offset = sum(-x for x in self.w if x < 0)
        self._cache = {}

    @classmethod
    def feasible(cls, p):
        w, t = _integer_scaled(p)
        return sum(abs(x) for x in w) <= SUM_SPAN_CAP

    def _reach(self, excluded):
        key = frozenset(excluded)
        if key not in self._cache:
            bits = 1 << self.offset
            for k, x in enumerate(self.w, start=1):
                if k in key or x == 0:
                    continue
                bits |= (bits << x) if x > 0 else (bits >> -x)
            self._cache[key] = bits
        return self._cache[key]

    def _hits(self, excluded, lo, hi):
        lo, hi = lo + self.offset + 1, hi + self.offset
        if hi < lo:
            return False
        lo = max(lo, 0)
        if hi < 0:
            return False
        window = ((1 << (hi - lo + 1)) - 1) << lo
        return bool(self._reach(excluded) & window)

    def kind(self, i):
        a, t = self.w[i - 1], self.t
        up = not self._hits({i}, t, t - a)
        down = not self._hits({i}, t - a, t)
        return BOTH if up and down else MONOTONE if up else ANTIMONOTONE if down else NEITHER

    def branch(self, i, j, ti, tj):
        a_i, a_j, t = self.w[i - 1], self.w[j - 1], self.t
        if ti == tj == MONOTONE:
            return not self._hits({i, j}, t - a_i, t - a_j)
        if ti == tj == ANTIMONOTONE:
            return not self._hits({i, j}, t - a_j, t - a_i)
        if tj == MONOTONE:
            return not self._hits({i, j}, t, t - a_i - a_j)
        return not self._hits({i, j}, t - a_i - a_j, t)


def _tests_for(f):
    if isinstance(f, LtfPresentation):
        weak = convert_form(f, WEAK)
        if _SumTests.feasible(weak):
            return _SumTests(weak)
        f = truth_table(weak)
    return _TableTests(f)


@dataclass(frozen=True)
class CoordinatePreorder:
    arity: int
    le: tuple
    monotonicity: tuple

    def leq(self, i, j):
        return self.le[i - 1][j - 1]

    def equiv(self, i, j):
        return self.leq(i, j) and self.leq(j, i)

    def less(self, i, j):
        return self.leq(i, j) and not self.leq(j, i)

    def below_count(self, i):
        return sum(self.leq(k, i) for k in range(1, self.arity + 1))

    def classes(self):
        """Equivalence classes from the bottom of the order to the top."""
        seen, out = set(), []
        order = sorted(range(1, self.arity + 1), key=lambda i: (self.below_count(i), i))
        for i in order:
            if i in seen:
                continue
            cls = frozenset(j for j in range(1, self.arity + 1) if self.equiv(i, j))
            seen |= cls
            out.append(cls)
        return out


def compute_preorder(f):
    """The definitional preorder of a unate function.

    Accepts a BooleanFunction or a total presentation; presentations are
    answered from subset sums, so large arities need no truth table.
    """
    tests = _tests_for(f)
    n = tests.n
    kinds = tuple(tests.kind(i) for i in range(1, n + 1))
    if NEITHER in kinds:
        bad = kinds.index(NEITHER) + 1
        raise ParameterError(f"coordinate {bad} is neither monotone nor antimonotone")
    le = [[True] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            verdicts = {tests.branch(i, j, ti, tj) for ti in _types(kinds[i - 1])
                        for tj in _types(kinds[j - 1])}
            if len(verdicts) != 1:
                raise InvariantError(f"preorder branches disagree on ({i}, {j}) for {f}")
            le[i - 1][j - 1] = verdicts.pop()
    for i in range(n):
        for j in range(n):
            if not (le[i][j] or le[j][i]):
                raise InvariantError(f"coordinates {i + 1}, {j + 1} are incomparable in {f}")
            for k in range(n):
                if le[i][j] and le[j][k] and not le[i][k]:
                    raise InvariantError(f"preorder not transitive at {i + 1}, {j + 1}, {k + 1}")
    return CoordinatePreorder(n, tuple(map(tuple, le)), kinds)


def _tweak(weights, t, k, l, eps):
    """Move eps of absolute weight from coordinate l to coordinate k."""
    a_k, a_l = weights[k], weights[l]
    w = list(weights)
    if a_k == 0:
        same_sign = True
        positive = a_l > 0
    else:
        same_sign = (a_k > 0) == (a_l > 0)
        positive = a_k > 0
    if same_sign:
        if positive:
            w[l], w[k] = a_l - eps, a_k + eps
        else:
            w[l], w[k] = a_l + eps, a_k - eps
        return w, t
    if a_l >= 0 >= a_k:
        w[l], w[k] = a_l - eps, a_k - eps
        return w, t - eps
    w[k], w[l] = a_k + eps, a_l + eps
    return w, t + eps


def canonical_presentation(p):
    """A strict presentation whose absolute weights mirror the preorder exactly."""
    strict = p
    if p.form == WEAK:
        # a weak threshold that no input reaches already works strictly
        as_is = LtfPresentation(p.weights, p.threshold, STRICT)
        strict = as_is if is_total(as_is) else convert_form(p, STRICT)
    if not is_total(strict):
        raise TotalityError(f"{p} is undefined on some input")
    f = truth_table(strict)
    order = compute_preorder(f)
    weights, t = list(strict.weights), strict.threshold
    for cls in order.classes():
        members = sorted(i - 1 for i in cls)
        avg = sum(abs(weights[i]) for i in members) / len(members)
        for _ in range(len(members)):
            low = [i for i in members if abs(weights[i]) < avg]
            high = [i for i in members if abs(weights[i]) > avg]
            if not low:
                break
            k, l = low[0], high[0]
            weights, t = _tweak(weights, t, k, l, avg - abs(weights[k]))
            candidate = LtfPresentation(weights, t, STRICT)
            if partial_table(candidate).tolist() != f.table.tolist():
                raise InvariantError(f"tweak on ({k + 1}, {l + 1}) changed the function of {p}")
        if any(abs(weights[i]) != avg for i in members):
            raise InvariantError(f"class {sorted(cls)} not equalized")
    result = LtfPresentation(weights, t, STRICT)
    n = result.arity
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            wi, wj = abs(result.weights[i - 1]), abs(result.weights[j - 1])
            if (wi < wj) != order.less(i, j) or (wi == wj) != order.equiv(i, j):
                raise InvariantError(f"weights of {i}, {j} disagree with the preorder")
    return result


# ------------------------------------------------------------------ fixing pairs


def find_fixing_pairs(f):
    """Ordered pairs (i, j): f = 0 when x_i=0, x_j=1 and f = 1 when x_i=1, x_j=0."""
    if isinstance(f, LtfPresentation):
        return _fixing_pairs_from_sums(convert_form(f, WEAK))
    n = f.arity
    if n < 2:
        raise ParameterError("fixing pairs need arity at least 2")
    pairs = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            b = _pair_blocks(f.table, n, i, j)
            if not b[0, 1].any() and b[1, 0].all():
                pairs.append((i, j))
    return pairs


def _fixing_pairs_from_sums(p):
    n = p.arity
    if n < 2:
        raise ParameterError("fixing pairs need arity at least 2")
    w, t = p.weights, p.threshold
    pos, neg = sum(x for x in w if x > 0), sum(x for x in w if x < 0)
    pairs = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            a_i, a_j = w[i - 1], w[j - 1]
            hi = pos - max(a_i, 0) - max(a_j, 0)
            lo = neg - min(a_i, 0) - min(a_j, 0)
            if hi + a_j <= t and lo + a_i > t:
                pairs.append((i, j))
    return pairs


# ------------------------------------------------------------------ tuple-minion tools


def dominating(weights, coords):
    """Do the coordinates in ``coords`` carry at least the weight of every other one?"""
    coords = set(coords)
    inside = [abs(weights[i - 1]) for i in coords]
    outside = [abs(w) for i, w in enumerate(weights, start=1) if i not in coords]
    if not inside or not outside:
        return True
    return min(inside) >= max(outside)


def covered_by(pi, coords):
    img = pi.image(coords)
    return all(len(pi.preimage(j)) == 1 for j in range(1, pi.to_arity + 1) if j not in img)


def minor_map_properties(pi, p, coords):
    """(injective on coords, covered by coords, coords dominating in p)."""
    coords = set(coords)
    if not coords <= set(range(1, pi.from_arity + 1)):
        raise ParameterError("coordinate set is not inside the map's domain")
    return pi.is_injective_on(coords), covered_by(pi, coords), dominating(p.weights, coords)


def grouping(a, m, eps):
    """Map items to m bins whose sums are each within eps of 1/m.

    First fit against the bin capacity 1/m; an item that fits nowhere goes to
    the lightest bin.
    """
    a = [as_rational(x) for x in a]
    eps = as_rational(eps)
    if m < 1 or not a:
        raise ParameterError("grouping needs m >= 1 and at least one item")
    if abs(1 - sum(a)) > eps or any(x < 0 or x > eps for x in a):
        raise ParameterError("grouping needs |1 - sum| <= eps and 0 <= a_i <= eps")
    cap = Fraction(1, m)
    bins = [Fraction(0)] * m
    images = []
    for x in a:
        target = next((b for b in range(m) if bins[b] + x <= cap), None)
        if target is None:
            target = min(range(m), key=lambda b: (bins[b], b))
        bins[target] += x
        images.append(target + 1)
    if any(abs(cap - s) > eps for s in bins):
        raise InvariantError(f"grouping produced bins {bins} outside eps={eps}")
    return MinorMap(len(a), m, images)


def is_constant_tuple(p):
    s = sum(p.weights)
    return p.threshold >= max(0, s) or p.threshold <= min(0, s)


def thr_generator(m, tau):
    return LtfPresentation([Fraction(1, m)] * m, tau, WEAK)


def at_generator(m):
    return LtfPresentation([Fraction(1, m)] * m + [Fraction(-1, m - 1)] * (m - 1), 0, WEAK)


@dataclass(frozen=True)
class Approximation:
    constant: bool
    presentation: LtfPresentation = None
    minor_map: MinorMap = None
    scale: Fraction = None
    distance: Fraction = None


def approximate_generator(p, target, eps, S=None, T=None):
    """A scaled minor of ``p`` within eps of a threshold or alternating-threshold generator.

    ``target`` is ``("thr", m)`` / ``("thr", m, tau)`` or ``("at", m)``. For the
    threshold case S and T default to the weight sum and the threshold, and tau
    defaults to T/S. In the threshold case constant tuples are reported without
    a construction. The alternating case skips that test: with threshold 0 every
    tuple, the alternating generator included, meets the constant inequality.
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise ParameterError("eps must be positive")
    kind, m = target[0], int(target[1])
    a, t, n = p.weights, p.threshold, p.arity
    if kind == "thr":
        if is_constant_tuple(p):
            return Approximation(constant=True)
        S = as_rational(S) if S is not None else sum(a)
        T = as_rational(T) if T is not None else t
        tau = as_rational(target[2]) if len(target) > 2 else T / S if S else None
        if S <= 0:
            raise ParameterError("threshold case needs S > 0 (negate the tuple otherwise)")
        if (abs(t - T) > S * eps or any(abs(x) > S * eps for x in a)
                or abs(sum(a) - S) > S * eps):
            raise ParameterError("tuple is not close enough to S, T at this eps")
        negatives = [i for i in range(n) if a[i] < 0]
        block = list(negatives)
        acc = sum(a[i] for i in negatives)
        rest = []
        for i in range(n):
            if a[i] < 0:
                continue
            if acc < 0:
                block.append(i)
                acc += a[i]
            else:
                rest.append(i)
        if acc < 0:
            raise ParameterError("positive weight cannot absorb the negative weight")
        items = ([block] if block else []) + [[i] for i in rest]
        values = [sum(a[i] for i in it) / S for it in items]
        groups = grouping(values, m, eps)
        images = [0] * n
        for it, g in zip(items, groups.map):
            for i in it:
                images[i] = g
        pi = MinorMap(n, m, images)
        result = scale(presentation_minor(p, pi), 1 / S)
        goal = thr_generator(m, tau)
        factor = 1 / S
    elif kind == "at":
        if m < 2:
            raise ParameterError("alternating generator needs m >= 2")
        pos = [i for i in range(n) if a[i] >= 0]
        neg = [i for i in range(n) if a[i] < 0]
        if (abs(t) > eps or any(abs(x) > eps for x in a)
                or abs(sum(a[i] for i in pos) - 1) > eps
                or abs(sum(a[i] for i in neg) + 1) > eps or not neg):
            raise ParameterError("tuple is not close enough to the alternating shape")
        g_pos = grouping([a[i] for i in pos], m, eps)
        g_neg = grouping([-a[i] for i in neg], m - 1, eps)
        images = [0] * n
        for i, g in zip(pos, g_pos.map):
            images[i] = g
        for i, g in zip(neg, g_neg.map):
            images[i] = m + g
        pi = MinorMap(n, 2 * m - 1, images)
        result = presentation_minor(p, pi)
        goal = at_generator(m)
        factor = Fraction(1)
    else:
        raise ParameterError(f"unknown target {kind!r}")
    dist = linf_distance(result, goal)
    if dist > eps:
        raise InvariantError(f"approximation is {dist} away, eps={eps}")
    return Approximation(False, result, pi, factor, dist)


def domination_propagates(p, pi, coords, eps, oracle=None):
    """Is some coordinate of pi(coords) dominating in the pi-minor of p?

    Raises ParameterError unless pi is injective on and covered by the
    dominating set ``coords`` with ``|coords| >= 2/eps``.
    """
    eps = as_rational(eps)
    coords = set(coords)
    injective, covered, dom = minor_map_properties(pi, p, coords)
    if not (injective and covered and dom and len(coords) >= 2 / eps):
        raise ParameterError(
            f"hypotheses fail: injective={injective} covered={covered} "
            f"dominating={dom} size={len(coords)} needed>={2 / eps}")
    if oracle is not None and not oracle(p):
        raise ParameterError("presentation is outside the minion")
    b = presentation_minor(p, pi)
    return any(dominating(b.weights, {j}) for j in pi.image(coords))
