"""JSON artifacts: typed loaders with field-path diagnostics, and dumpers.

Every loader validates the model invariants; any failure becomes a
SchemaError naming the offending field, e.g. ``relations[0].tuples[3]``.
"""

import json
from fractions import Fraction

from .boolean_core import BooleanFunction, BooleanRelation, BooleanStructure, Instance, MinorMap
from .conditions import ChoiceFunction, MinorChain
from .errors import PcspError, SchemaError
from .label_cover import BipartiteLC, LayeredLC, MinorCondition
from .minions import StWitness
from .threshold import LtfPresentation


def _join(path, key):
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _field(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(_join(path, key), "missing field")
    value = obj[key]
    if kind is not None:
        _expect(value, kind, _join(path, key))
    return value


def _expect(value, kind, path):
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(path, "expected an integer")
    elif kind is list:
        if not isinstance(value, list):
            raise SchemaError(path, "expected a list")
    elif not isinstance(value, kind):
        raise SchemaError(path, f"expected {kind.__name__}")


def _int_list(value, path):
    _expect(value, list, path)
    for k, v in enumerate(value):
        _expect(v, int, _join(path, k))
    return value


def _guard(path, build):
    """Run a constructor, turning model errors into schema errors at ``path``."""
    try:
        return build()
    except SchemaError:
        raise
    except (PcspError, ValueError, TypeError) as exc:
        raise SchemaError(path, str(exc)) from exc


def rational_to_json(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_json(value, path=""):
    if not isinstance(value, str):
        raise SchemaError(path, "rationals are written as strings like \"p/q\"")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise SchemaError(path, f"not a rational: {value!r}") from None


# ------------------------------------------------------------------ boolean core


def relation_to_json(rel):
    return {"arity": rel.arity, "tuples": [list(t) for t in rel.tuples]}


def relation_from_json(obj, path=""):
    arity = _field(obj, "arity", path, int)
    tuples = _field(obj, "tuples", path, list)
    for k, t in enumerate(tuples):
        tp = _join(_join(path, "tuples"), k)
        _int_list(t, tp)
        if len(t) != arity:
            raise SchemaError(tp, f"tuple has length {len(t)}, arity is {arity}")
        if any(b not in (0, 1) for b in t):
            raise SchemaError(tp, "entries must be 0 or 1")
    return _guard(path, lambda: BooleanRelation(arity, tuples))


def structure_to_json(s):
    return {"relations": [relation_to_json(r) for r in s.relations]}


def structure_from_json(obj, path=""):
    rels = _field(obj, "relations", path, list)
    return BooleanStructure(tuple(relation_from_json(r, _join(_join(path, "relations"), k))
                                  for k, r in enumerate(rels)))


def instance_to_json(inst):
    return {"variables": inst.variable_count,
            "constraints": [{"scope": list(s), "relation": r} for s, r in inst.constraints]}


def instance_from_json(obj, path=""):
    n = _field(obj, "variables", path, int)
    cons = _field(obj, "constraints", path, list)
    parsed = []
    for k, c in enumerate(cons):
        cp = _join(_join(path, "constraints"), k)
        scope = _int_list(_field(c, "scope", cp), _join(cp, "scope"))
        for q, v in enumerate(scope):
            if not 1 <= v <= n:
                raise SchemaError(_join(_join(cp, "scope"), q), f"variable {v} outside 1..{n}")
        parsed.append((scope, _field(c, "relation", cp, int)))
    return _guard(path, lambda: Instance(n, tuple(parsed)))


def function_to_json(f):
    return {"arity": f.arity, "table": "".join(map(str, f.table.tolist()))}


def function_from_json(obj, path=""):
    arity = _field(obj, "arity", path, int)
    table = _field(obj, "table", path, str)
    if set(table) - {"0", "1"}:
        raise SchemaError(_join(path, "table"), "table must be a 0/1 string")
    return _guard(path, lambda: BooleanFunction(arity, [int(c) for c in table]))


def assignment_to_json(h):
    return {"assignment": [int(b) for b in h]}


def assignment_from_json(obj, path=""):
    values = _int_list(_field(obj, "assignment", path), _join(path, "assignment"))
    return tuple(values)


# ------------------------------------------------------------------ threshold objects


def ltf_to_json(p):
    return {"weights": [rational_to_json(w) for w in p.weights],
            "threshold": rational_to_json(p.threshold), "form": p.form}


def ltf_from_json(obj, path=""):
    weights = _field(obj, "weights", path, list)
    ws = [rational_from_json(w, _join(_join(path, "weights"), k)) for k, w in enumerate(weights)]
    t = rational_from_json(_field(obj, "threshold", path), _join(path, "threshold"))
    form = obj.get("form", "weak")
    return _guard(_join(path, "form") if form not in ("weak", "strict") else path,
                  lambda: LtfPresentation(ws, t, form))


def minor_map_to_json(pi):
    return {"from": pi.from_arity, "to": pi.to_arity, "map": list(pi.map)}


def minor_map_from_json(obj, path=""):
    n = _field(obj, "from", path, int)
    m = _field(obj, "to", path, int)
    images = _int_list(_field(obj, "map", path), _join(path, "map"))
    if len(images) != n:
        raise SchemaError(_join(path, "map"), f"map has {len(images)} entries, from is {n}")
    for k, v in enumerate(images):
        if not 1 <= v <= m:
            raise SchemaError(_join(_join(path, "map"), k), f"image {v} outside 1..{m}")
    return _guard(path, lambda: MinorMap(n, m, images))


def any_function_to_json(h):
    return ltf_to_json(h) if isinstance(h, LtfPresentation) else function_to_json(h)


def any_function_from_json(obj, path=""):
    if isinstance(obj, dict) and "weights" in obj:
        return ltf_from_json(obj, path)
    return function_from_json(obj, path)


# ------------------------------------------------------------------ minion objects


def witness_to_json(w):
    if w is None:
        return {"member": False}
    out = {"member": True}
    if w.m is not None:
        out["m"] = w.m
        out["rho"] = minor_map_to_json(w.rho)
    return out


def witness_from_json(obj, path=""):
    if not _field(obj, "member", path, bool):
        return None
    if "m" not in obj:
        return StWitness()
    return StWitness(_field(obj, "m", path, int),
                     minor_map_from_json(_field(obj, "rho", path), _join(path, "rho")))


def chain_to_json(chain):
    return {"functions": [any_function_to_json(f) for f in chain.functions],
            "maps": [minor_map_to_json(pi) for pi in chain.maps]}


def chain_from_json(obj, path=""):
    fs = _field(obj, "functions", path, list)
    ms = _field(obj, "maps", path, list)
    functions = [any_function_from_json(f, _join(_join(path, "functions"), k))
                 for k, f in enumerate(fs)]
    maps = [minor_map_from_json(m, _join(_join(path, "maps"), k)) for k, m in enumerate(ms)]
    return _guard(path, lambda: MinorChain(functions, maps))


def choice_to_json(choice):
    if choice.kind == "dictator":
        return {"kind": "dictator"}
    if choice.kind == "top3N":
        return {"kind": "top3N", "N": choice.N}
    return {"kind": "table",
            "table": {k: sorted(v) for k, v in sorted(choice.table.items())}}


def choice_from_json(obj, path=""):
    kind = _field(obj, "kind", path, str)
    if kind == "dictator":
        return ChoiceFunction.dictator()
    if kind == "top3N":
        return _guard(path, lambda: ChoiceFunction.top3n(_field(obj, "N", path, int)))
    if kind == "table":
        table = _field(obj, "table", path, dict)
        for key, coords in table.items():
            _int_list(coords, _join(_join(path, "table"), key))
        return ChoiceFunction.from_table(table)
    raise SchemaError(_join(path, "kind"), f"unknown choice kind {kind!r}")


# ------------------------------------------------------------------ label cover


def bipartite_to_json(g):
    return {"left": g.left, "right": g.right, "l": g.l, "r": g.r,
            "edges": [{"y": y, "z": z, "map": list(pi.map)} for y, z, pi in g.edges]}


def bipartite_from_json(obj, path=""):
    left, right = _field(obj, "left", path, int), _field(obj, "right", path, int)
    l, r = _field(obj, "l", path, int), _field(obj, "r", path, int)
    edges = []
    for k, e in enumerate(_field(obj, "edges", path, list)):
        ep = _join(_join(path, "edges"), k)
        pi = minor_map_from_json({"from": l, "to": r, "map": _field(e, "map", ep)}, ep)
        edges.append((_field(e, "y", ep, int), _field(e, "z", ep, int), pi))
    return _guard(path, lambda: BipartiteLC(left, right, l, r, tuple(edges)))


def _edge_list(edges):
    return [{"from": [i, a], "to": [j, b], "map": list(pi.map)}
            for (i, j), es in sorted(edges.items()) for (a, b), pi in sorted(es.items())]


def layered_to_json(phi):
    return {"layers": [list(layer) for layer in phi.layers], "domains": list(phi.domains),
            "edges": _edge_list(phi.edges)}


def _endpoints(e, ep, sizes):
    ends = []
    for key in ("from", "to"):
        pair = _int_list(_field(e, key, ep), _join(ep, key))
        if len(pair) != 2 or not 1 <= pair[0] <= len(sizes) or not 1 <= pair[1] <= sizes[pair[0] - 1]:
            raise SchemaError(_join(ep, key), "expected [layer, position] inside the instance")
        ends.append(tuple(pair))
    return ends


def layered_from_json(obj, path=""):
    layers = _field(obj, "layers", path, list)
    domains = _int_list(_field(obj, "domains", path), _join(path, "domains"))
    if len(domains) != len(layers):
        raise SchemaError(_join(path, "domains"), "one domain size per layer")
    sizes = [len(layer) for layer in layers]
    edges = {}
    for k, e in enumerate(_field(obj, "edges", path, list)):
        ep = _join(_join(path, "edges"), k)
        (i, a), (j, b) = _endpoints(e, ep, sizes)
        if i >= j:
            raise SchemaError(ep, "edges go from a lower to a higher layer")
        pi = minor_map_from_json({"from": domains[i - 1], "to": domains[j - 1],
                                  "map": _field(e, "map", ep)}, ep)
        edges.setdefault((i, j), {})[(a, b)] = pi
    return LayeredLC(tuple(tuple(layer) for layer in layers), tuple(domains), edges)


def condition_to_json(cond):
    return {"symbols": [[{"name": n, "arity": a} for n, a in layer] for layer in cond.symbols],
            "identities": [{"from": [i, a], "to": [j, b], "map": list(pi.map)}
                           for i, a, j, b, pi in cond.identities]}


def condition_from_json(obj, path=""):
    layers = _field(obj, "symbols", path, list)
    symbols = []
    for k, layer in enumerate(layers):
        lp = _join(_join(path, "symbols"), k)
        _expect(layer, list, lp)
        symbols.append(tuple((_field(s, "name", _join(lp, q), str), _field(s, "arity", _join(lp, q), int))
                             for q, s in enumerate(layer)))
    sizes = [len(layer) for layer in symbols]
    ids = []
    for k, e in enumerate(_field(obj, "identities", path, list)):
        ep = _join(_join(path, "identities"), k)
        (i, a), (j, b) = _endpoints(e, ep, sizes)
        pi = minor_map_from_json({"from": symbols[i - 1][a - 1][1], "to": symbols[j - 1][b - 1][1],
                                  "map": _field(e, "map", ep)}, ep)
        ids.append((i, a, j, b, pi))
    return _guard(path, lambda: MinorCondition(tuple(symbols), tuple(ids)))


def layered_assignment_to_json(sigma):
    return {"values": [list(layer) for layer in sigma]}


def layered_assignment_from_json(obj, path=""):
    values = _field(obj, "values", path, list)
    return tuple(tuple(_int_list(v, _join(_join(path, "values"), k))) for k, v in enumerate(values))


# ------------------------------------------------------------------ files

LOADERS = {
    "relation": relation_from_json,
    "structure": structure_from_json,
    "instance": instance_from_json,
    "function": function_from_json,
    "ltf": ltf_from_json,
    "minor_map": minor_map_from_json,
    "chain": chain_from_json,
    "choice": choice_from_json,
    "witness": witness_from_json,
    "bipartite": bipartite_from_json,
    "layered": layered_from_json,
    "condition": condition_from_json,
    "layered_assignment": layered_assignment_from_json,
    "assignment": assignment_from_json,
}


def parse_artifact(path, expected_kind):
    """Load a JSON file as the given artifact kind."""
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise SchemaError("", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    return LOADERS[expected_kind](obj, "")


def dumps(obj):
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
