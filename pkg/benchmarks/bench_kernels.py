#!/usr/bin/env python3
"""Benchmark the JIT kernels against the pure-Python fallback.

The two hot paths are the bracket state sum (2^N union-find passes) and
face-orbit enumeration (driven hard by the shuffle).  Run directly::

    python3 benchmarks/bench_kernels.py

Set ``KNOTGRAPH_NO_NUMBA=1`` before importing knotgraph to make the whole
library use the fallback path.
"""

from __future__ import annotations

import time

from knotgraph._kernels import (
    NUMBA_ENABLED,
    _bracket_single_loop_counts,
    _bracket_single_loop_counts_py,
    _face_orbits,
    _face_orbits_py,
)
from knotgraph._map import DartMap
from knotgraph.diagram import parse_pd
from knotgraph.invariants import _smoothing_arcs
from knotgraph.moves import ShuffleConfig, shuffle
from knotgraph.rational import rational_diagram


def timeit(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_bracket():
    print("bracket state sum (single-loop counts)")
    for coeffs in ([3, 3, 3, 3], [8, 6], [4, 4, 4, 4]):
        d = rational_diagram(coeffs)
        n = d.n
        twin, arcs_a, arcs_b = _smoothing_arcs(d)
        args = (n, twin.astype("int32"), arcs_a.astype("int32"), arcs_b.astype("int32"))
        t_py, r_py = timeit(_bracket_single_loop_counts_py, *args, repeats=1)
        if NUMBA_ENABLED:
            _bracket_single_loop_counts(*args)  # warm the JIT cache
            t_jit, r_jit = timeit(_bracket_single_loop_counts, *args)
            assert list(r_py) == list(r_jit)
            print(f"  N={n:2d} ({1 << n:6d} states): python {t_py * 1e3:9.1f} ms"
                  f"   numba {t_jit * 1e3:7.2f} ms   speedup {t_py / t_jit:7.1f}x")
        else:
            print(f"  N={n:2d} ({1 << n:6d} states): python {t_py * 1e3:9.1f} ms (numba disabled)")


def bench_faces():
    print("face-orbit enumeration on a large shuffled diagram")
    d = shuffle(parse_pd("X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)"), ShuffleConfig(c=90, seed=4))
    m = DartMap.from_diagram(d)
    glue = m.glue.astype("int32")

    def many_py(k):
        for _ in range(k):
            _face_orbits_py(glue)

    def many_jit(k):
        for _ in range(k):
            _face_orbits(glue)

    t_py, _ = timeit(many_py, 50, repeats=1)
    if NUMBA_ENABLED:
        _face_orbits(glue)
        t_jit, _ = timeit(many_jit, 50)
        print(f"  N={d.n}: 50 sweeps: python {t_py * 1e3:8.1f} ms"
              f"   numba {t_jit * 1e3:7.2f} ms   speedup {t_py / t_jit:6.1f}x")
    else:
        print(f"  N={d.n}: 50 sweeps: python {t_py * 1e3:8.1f} ms (numba disabled)")


if __name__ == "__main__":
    print(f"numba enabled: {NUMBA_ENABLED}")
    bench_bracket()
    bench_faces()
