"""Hot numeric kernels, JIT-compiled with numba when available.

Set ``KNOTGRAPH_NO_NUMBA=1`` to force the pure-Python/NumPy fallback path;
``knotgraph.benchmarks`` compares the two.  Every kernel has identical
semantics on both paths.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENABLED = os.environ.get("KNOTGRAPH_NO_NUMBA", "") not in ("1", "true", "yes")

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

def _bracket_single_loop_counts_py(n, twin, arcs_a, arcs_b):
    """Count single-loop smoothing states of an n-crossing diagram by popcount.

    ``twin`` is the dart involution (4n entries).  ``arcs_a``/``arcs_b`` give,
    per crossing, the two dart pairs joined by the A- and B-smoothing.
    State bit 1 at crossing i selects the B-smoothing.  Returns an int64
    array ``counts`` where ``counts[k]`` is the number of states with k
    B-smoothings whose smoothed diagram is a single closed loop.
    """
    num_darts = 4 * n
    counts = np.zeros(n + 1, dtype=np.int64)
    parent = np.empty(num_darts, dtype=np.int32)
    for state in range(1 << n):
        for i in range(num_darts):
            parent[i] = i
        merges = 0
        for a in range(num_darts):
            b = twin[a]
            if b < a:
                continue
            ra = a
            while parent[ra] != ra:
                parent[ra] = parent[parent[ra]]
                ra = parent[ra]
            rb = b
            while parent[rb] != rb:
                parent[rb] = parent[parent[rb]]
                rb = parent[rb]
            if ra != rb:
                parent[rb] = ra
                merges += 1
        popcount = 0
        for c in range(n):
            use_b = (state >> c) & 1
            if use_b:
                popcount += 1
            for k in range(2):
                if use_b:
                    a = arcs_b[c, 2 * k]
                    b = arcs_b[c, 2 * k + 1]
                else:
                    a = arcs_a[c, 2 * k]
                    b = arcs_a[c, 2 * k + 1]
                ra = a
                while parent[ra] != ra:
                    parent[ra] = parent[parent[ra]]
                    ra = parent[ra]
                rb = b
                while parent[rb] != rb:
                    parent[rb] = parent[parent[rb]]
                    rb = parent[rb]
                if ra != rb:
                    parent[rb] = ra
                    merges += 1
        if num_darts - merges == 1:
            counts[popcount] += 1
    return counts


def _face_orbits_py(glue):
    """Face structure of a live dart-map.

    ``glue`` maps dart -> twin dart (-1 for dead darts).  The orbit rule is
    clockwise-next after crossing the edge: next = rotate_cw(glue[d]).
    Returns (face id per dart, face count, boundary size per face, first
    dart per face); faces are numbered in order of their first dart.
    """
    num = glue.shape[0]
    face = np.full(num, -1, dtype=np.int32)
    sizes = np.zeros(num + 1, dtype=np.int64)
    reps = np.full(num + 1, -1, dtype=np.int64)
    count = 0
    for start in range(num):
        if glue[start] < 0 or face[start] >= 0:
            continue
        reps[count] = start
        d = start
        size = 0
        while face[d] < 0:
            face[d] = count
            size += 1
            t = glue[d]
            d = (t & ~3) | ((t + 3) & 3)
        sizes[count] = size
        count += 1
    return face, count, sizes[:count], reps[:count]


if NUMBA_ENABLED:
    _bracket_single_loop_counts = njit(cache=True)(_bracket_single_loop_counts_py)
    _face_orbits = njit(cache=True)(_face_orbits_py)
else:
    _bracket_single_loop_counts = _bracket_single_loop_counts_py
    _face_orbits = _face_orbits_py


def bracket_single_loop_counts(n: int, twin: np.ndarray, arcs_a: np.ndarray, arcs_b: np.ndarray) -> np.ndarray:
    return _bracket_single_loop_counts(
        n,
        np.ascontiguousarray(twin, dtype=np.int32),
        np.ascontiguousarray(arcs_a, dtype=np.int32),
        np.ascontiguousarray(arcs_b, dtype=np.int32),
    )


def face_orbits(glue: np.ndarray) -> tuple[np.ndarray, int, np.ndarray, np.ndarray]:
    return _face_orbits(np.ascontiguousarray(glue, dtype=np.int32))
