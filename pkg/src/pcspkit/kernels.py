"""Hot loops over truth tables and minor maps.

Every kernel has a numba version and a pure-numpy version. The numba path is
used when numba imports and the environment variable ``PCSPKIT_NO_JIT`` is
unset or ``0``. ``set_backend`` switches at runtime (the benchmark uses it).

Conventions: truth tables are uint8 arrays indexed little-endian, minor maps
are 0-based int64 arrays, and map number ``k`` in an enumeration of all maps
``[n] -> [m]`` is read as ``n`` base-``m`` digits with coordinate 1 the most
significant digit (``itertools.product`` order).
"""

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_CHUNK = 1 << 14


def _env_backend():
    flag = os.environ.get("PCSPKIT_NO_JIT", "0").strip().lower()
    if HAS_NUMBA and flag in ("", "0", "false", "no"):
        return "numba"
    return "numpy"


BACKEND = _env_backend()


def set_backend(name):
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend."""
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba is not importable")
    previous, BACKEND = BACKEND, name
    return previous


def decode_map(index, n, m):
    """Map number ``index`` of the enumeration of ``[n] -> [m]``, 0-based."""
    digits = [0] * n
    for pos in range(n - 1, -1, -1):
        index, digits[pos] = divmod(index, m)
    return digits


def minor_indices(pi, m):
    """For every input y of the minor, the input of the original it reads.

    The minor is g(y) = f(y[pi[0]], ..., y[pi[n-1]]).
    """
    pi = np.asarray(pi, dtype=np.int64)
    ys = np.arange(1 << m, dtype=np.int64)
    idx = np.zeros(1 << m, dtype=np.int64)
    for i, j in enumerate(pi):
        idx |= ((ys >> j) & 1) << i
    return idx


def _contributions(n, m):
    # contrib[i, j, y] = bit j of y shifted to position i
    ys = np.arange(1 << m, dtype=np.int64)
    contrib = np.empty((n, m, 1 << m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            contrib[i, j] = ((ys >> j) & 1) << i
    return contrib


def _map_block(start, stop, n, m):
    ks = np.arange(start, stop, dtype=np.int64)
    maps = np.empty((stop - start, n), dtype=np.int64)
    for pos in range(n - 1, -1, -1):
        maps[:, pos] = ks % m
        ks //= m
    return maps


# ---------------------------------------------------------------- numpy path


def _minor_codes_np(table, n, m):
    total = m**n
    weights = np.left_shift(np.uint64(1), np.arange(1 << m, dtype=np.uint64))
    contrib = _contributions(n, m)
    out = np.empty(total, dtype=np.uint64)
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        maps = _map_block(start, stop, n, m)
        idx = np.zeros((stop - start, 1 << m), dtype=np.int64)
        for i in range(n):
            idx |= contrib[i, maps[:, i]]
        bits = table[idx].astype(np.uint64)
        out[start:stop] = (bits * weights).sum(axis=1, dtype=np.uint64)
    return out


def _first_symmetric_np(table, n, k):
    total = k**n
    contrib = _contributions(n, k)
    ys = np.arange(1 << k)
    popcount = np.array([bin(y).count("1") for y in ys])
    rep = (1 << popcount) - 1
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        maps = _map_block(start, stop, n, k)
        idx = np.zeros((stop - start, 1 << k), dtype=np.int64)
        for i in range(n):
            idx |= contrib[i, maps[:, i]]
        minors = table[idx]
        sym = np.all(minors == minors[:, rep], axis=1)
        hits = np.flatnonzero(sym)
        if hits.size:
            return start + int(hits[0])
    return -1


def _polymorphism_batch_np(tables, idx, accept):
    result = np.ones(tables.shape[0], dtype=np.bool_)
    k = idx.shape[1]
    shifts = np.arange(k, dtype=np.int64)
    for start in range(0, tables.shape[0], 256):
        block = tables[start:start + 256]
        out = block[:, idx].astype(np.int64)  # (T, C, k)
        codes = (out << shifts).sum(axis=2)
        result[start:start + 256] = accept[codes].all(axis=1)
    return result


# ---------------------------------------------------------------- numba path

if HAS_NUMBA:

    @njit(cache=True)
    def _minor_codes_nb(table, n, m):
        total = m**n
        size = 1 << m
        out = np.empty(total, dtype=np.uint64)
        pi = np.zeros(n, dtype=np.int64)
        for k in range(total):
            rest = k
            for pos in range(n - 1, -1, -1):
                pi[pos] = rest % m
                rest //= m
            code = np.uint64(0)
            for y in range(size):
                x = 0
                for i in range(n):
                    x |= ((y >> pi[i]) & 1) << i
                if table[x]:
                    code |= np.uint64(1) << np.uint64(y)
            out[k] = code
        return out

    @njit(cache=True)
    def _first_symmetric_nb(table, n, k):
        total = k**n
        size = 1 << k
        rep = np.empty(size, dtype=np.int64)
        for y in range(size):
            c = 0
            z = y
            while z:
                c += z & 1
                z >>= 1
            rep[y] = (1 << c) - 1
        pi = np.zeros(n, dtype=np.int64)
        minor = np.empty(size, dtype=np.uint8)
        for t in range(total):
            rest = t
            for pos in range(n - 1, -1, -1):
                pi[pos] = rest % k
                rest //= k
            for y in range(size):
                x = 0
                for i in range(n):
                    x |= ((y >> pi[i]) & 1) << i
                minor[y] = table[x]
            ok = True
            for y in range(size):
                if minor[y] != minor[rep[y]]:
                    ok = False
                    break
            if ok:
                return t
        return -1

    @njit(cache=True)
    def _polymorphism_batch_nb(tables, idx, accept):
        count = tables.shape[0]
        choices, k = idx.shape
        result = np.ones(count, dtype=np.bool_)
        for t in range(count):
            for c in range(choices):
                code = 0
                for col in range(k):
                    if tables[t, idx[c, col]]:
                        code |= 1 << col
                if not accept[code]:
                    result[t] = False
                    break
        return result


# ---------------------------------------------------------------- dispatch


def _as_table(table):
    return np.ascontiguousarray(table, dtype=np.uint8)


def all_minor_codes(table, n, m):
    """Packed minor tables (bit y = g(y)) for every map ``[n] -> [m]``, m <= 6."""
    if m > 6:
        raise ValueError("packed codes need 2**m <= 64")
    table = _as_table(table)
    if BACKEND == "numba":
        return _minor_codes_nb(table, n, m)
    return _minor_codes_np(table, n, m)


def first_symmetric_map(table, n, k):
    """Number of the first map ``[n] -> [k]`` whose minor is symmetric, else -1."""
    table = _as_table(table)
    if BACKEND == "numba":
        return int(_first_symmetric_nb(table, n, k))
    return _first_symmetric_np(table, n, k)


def polymorphism_batch(tables, idx, accept):
    """Row-wise check that each table maps every tuple choice into ``accept``.

    ``idx[c, col]`` is the input of the function read in column ``col`` of
    choice ``c``; ``accept[code]`` says whether an output tuple is allowed.
    """
    tables = np.ascontiguousarray(np.atleast_2d(tables), dtype=np.uint8)
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    accept = np.ascontiguousarray(accept, dtype=np.bool_)
    if idx.shape[0] == 0:
        return np.ones(tables.shape[0], dtype=np.bool_)
    if BACKEND == "numba":
        return _polymorphism_batch_nb(tables, idx, accept)
    return _polymorphism_batch_np(tables, idx, accept)
