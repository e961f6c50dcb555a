import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from pcspkit import kernels
from pcspkit.boolean_core import BooleanFunction, MinorMap, choice_indices, make_relation

tables = st.integers(1, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n)))


def both(fn):
    if not kernels.HAS_NUMBA:
        pytest.skip("numba missing")
    out = {}
    for name in ("numpy", "numba"):
        previous = kernels.set_backend(name)
        try:
            out[name] = fn()
        finally:
            kernels.set_backend(previous)
    return out["numpy"], out["numba"]


def test_decode_map_is_product_order():
    maps = [tuple(kernels.decode_map(k, 3, 2)) for k in range(8)]
    assert maps == list(itertools.product(range(2), repeat=3))


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(nt=tables, m=st.integers(1, 3))
def test_minor_codes_match_direct_minors(nt, m, backend):
    n, bits = nt
    f = BooleanFunction(n, bits)
    codes = kernels.all_minor_codes(f.table, n, m)
    for k in (0, len(codes) // 2, len(codes) - 1):
        pi = MinorMap(n, m, [d + 1 for d in kernels.decode_map(k, n, m)])
        assert int(codes[k]) == f.minor(pi).code


@settings(max_examples=40, deadline=None)
@given(tables, st.integers(1, 4))
def test_backends_agree(nt, k):
    n, bits = nt
    table = np.array(bits, dtype=np.uint8)
    a, b = both(lambda: kernels.first_symmetric_map(table, n, k))
    assert a == b
    a, b = both(lambda: kernels.all_minor_codes(table, n, min(k, 3)))
    assert np.array_equal(a, b)


def test_polymorphism_batch_backends_agree():
    rel = make_relation("k_in_l", 1, 3)
    idx = choice_indices(rel, 3)
    tables = np.array([[(c >> y) & 1 for y in range(8)] for c in range(256)], dtype=np.uint8)
    accept = rel.accept_mask()
    a, b = both(lambda: kernels.polymorphism_batch(tables, idx, accept))
    assert np.array_equal(a, b)
    assert a.sum() > 0


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.set_backend("cuda")
