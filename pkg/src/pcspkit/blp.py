"""Basic LP relaxation over exact rationals and threshold rounding search."""

from dataclasses import dataclass, field
from fractions import Fraction

from .boolean_core import is_homomorphism
from .errors import CapacityError, InvariantError

PIVOT_CAP = 100_000

LE, GE, EQ = "<=", ">=", "="


@dataclass(frozen=True)
class RationalLP:
    """Feasibility problem over nonnegative variables.

    Each constraint is ``(coeffs, sense, rhs)`` with ``coeffs`` a tuple of
    ``(variable, Fraction)`` pairs (0-based variables).
    """

    num_vars: int
    constraints: tuple
    names: tuple = field(default=())

    def with_constraint(self, coeffs, sense, rhs):
        return RationalLP(self.num_vars,
                          self.constraints + ((tuple(coeffs), sense, Fraction(rhs)),),
                          self.names)

    def violated(self, values):
        """First constraint index the point breaks, or None."""
        if any(v < 0 for v in values):
            return -1
        for k, (coeffs, sense, rhs) in enumerate(self.constraints):
            lhs = sum((c * values[v] for v, c in coeffs), Fraction(0))
            if (sense == LE and lhs > rhs) or (sense == GE and lhs < rhs) or (
                    sense == EQ and lhs != rhs):
                return k
        return None


@dataclass(frozen=True)
class LPSolution:
    feasible: bool
    values: tuple = ()


def build_blp(instance, template):
    """Variables x_1..x_n then one alpha per (constraint, template tuple).

    x_v is the marginal of v; the alphas of a constraint form a distribution
    over its relation whose coordinate marginals match the x's.
    """
    n = instance.variable_count
    names = [f"x{v}" for v in range(1, n + 1)]
    rows = [(((v, Fraction(1)),), LE, Fraction(1)) for v in range(n)]
    for k, (scope, rel_idx) in enumerate(instance.constraints):
        rel = template.relations[rel_idx]
        if not rel.tuples:
            rows.append(((), EQ, Fraction(1)))
            continue
        start = len(names)
        names.extend(f"a{k + 1}_{''.join(map(str, t))}" for t in rel.tuples)
        alphas = range(start, start + len(rel.tuples))
        rows.append((tuple((a, Fraction(1)) for a in alphas), EQ, Fraction(1)))
        for pos, v in enumerate(scope):
            coeffs = {v - 1: Fraction(1)}
            for a, t in zip(alphas, rel.tuples):
                if t[pos]:
                    coeffs[a] = coeffs.get(a, 0) - 1
            rows.append((tuple(sorted(coeffs.items())), EQ, Fraction(0)))
    return RationalLP(len(names), tuple(rows), tuple(names))


def _phase_one(lp, cap):
    """Bland's-rule simplex minimizing the sum of artificials; sparse dict rows."""
    n = lp.num_vars
    rows, rhs, basis = [], [], []
    nxt = n
    artificials = []
    for coeffs, sense, b in lp.constraints:
        row = {}
        for v, c in coeffs:
            if c:
                row[v] = row.get(v, 0) + c
        b = Fraction(b)
        if sense != EQ:
            row[nxt] = Fraction(1 if sense == LE else -1)
            nxt += 1
        if b < 0:
            row = {v: -c for v, c in row.items()}
            b = -b
        slack = [v for v, c in row.items() if v >= n and c == 1]
        if slack:
            basis.append(slack[0])
        else:
            row[nxt] = Fraction(1)
            basis.append(nxt)
            artificials.append(nxt)
            nxt += 1
        rows.append(row)
        rhs.append(b)
    is_art = set(artificials)
    # reduced costs of min sum(artificials): c_j - sum over artificial rows
    cost = {}
    obj = Fraction(0)
    for row, b, bv in zip(rows, rhs, basis):
        if bv in is_art:
            obj += b
            for v, c in row.items():
                if v not in is_art:
                    cost[v] = cost.get(v, 0) - c
    pivots = 0
    while True:
        entering = min((v for v, c in cost.items() if c < 0), default=None)
        if entering is None:
            break
        best = None
        for k, row in enumerate(rows):
            c = row.get(entering)
            if c is not None and c > 0:
                ratio = rhs[k] / c
                if best is None or ratio < best[0] or (ratio == best[0] and basis[k] < basis[best[1]]):
                    best = (ratio, k)
        if best is None:
            raise InvariantError("phase one is bounded below by zero")
        k = best[1]
        pivots += 1
        if pivots > cap:
            raise CapacityError(f"simplex exceeded {cap} pivots")
        prow = rows[k]
        piv = prow[entering]
        if piv != 1:
            prow = {v: c / piv for v, c in prow.items()}
            rhs[k] /= piv
            rows[k] = prow
        for kk, row in enumerate(rows):
            c = row.get(entering)
            if kk == k or c is None:
                continue
            for v, pc in prow.items():
                nv = row.get(v, 0) - c * pc
                if nv:
                    row[v] = nv
                else:
                    row.pop(v, None)
            rhs[kk] -= c * rhs[k]
        c = cost.get(entering)
        for v, pc in prow.items():
            if v in is_art:
                continue
            nv = cost.get(v, 0) - c * pc
            if nv:
                cost[v] = nv
            else:
                cost.pop(v, None)
        obj += c * rhs[k]
        basis[k] = entering
    if obj != 0:
        return None
    values = [Fraction(0)] * n
    for bv, b in zip(basis, rhs):
        if bv < n:
            values[bv] = b
    return values


def solve_lp(lp, cap=PIVOT_CAP):
    """Exact feasibility; a returned point is re-checked against every constraint."""
    values = _phase_one(lp, cap)
    if values is None:
        return LPSolution(False)
    bad = lp.violated(values)
    if bad is not None:
        raise InvariantError(f"simplex point violates constraint {bad}")
    return LPSolution(True, tuple(values))


def round_solution(instance, target, marginals):
    """Try thresholds q in {0} + marginals, strict before non-strict.

    Returns (h, q, strict) for the first verified homomorphism, else None.
    """
    candidates = list(dict.fromkeys([Fraction(0), *marginals]))
    for q in candidates:
        for strict in (True, False):
            h = tuple(int(w > q) if strict else int(w >= q) for w in marginals)
            if is_homomorphism(h, instance, target):
                return h, q, strict
    return None


def round_search(instance, source, target, cap=PIVOT_CAP):
    """Solve the relaxation with x_1 = 0, else x_1 = 1, then round.

    Returns a verified homomorphism to ``target`` as a tuple of bits, or None.
    """
    base = build_blp(instance, source)
    for fixed in (0, 1):
        lp = base if instance.variable_count == 0 else base.with_constraint(
            ((0, Fraction(1)),), EQ, fixed)
        sol = solve_lp(lp, cap)
        if sol.feasible:
            marginals = sol.values[:instance.variable_count]
            found = round_solution(instance, target, marginals)
            return None if found is None else found[0]
        if instance.variable_count == 0:
            break
    return None
