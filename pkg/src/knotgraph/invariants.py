"""Ambient-isotopy invariant oracles.

Two independent routes to the knot determinant:

* :func:`goeritz_determinant` -- checkerboard coloring and a Goeritz matrix,
  exact integer elimination; polynomial time, usable on large shuffled
  diagrams.
* :func:`kauffman_determinant` -- brute-force bracket state sum evaluated at
  the determinant specialization; exponential (N <= 16) but derived from
  completely different theory, so the two cross-validate each other.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .diagram import Diagram, DiagramError

__all__ = ["checkerboard_coloring", "goeritz_determinant", "kauffman_determinant"]


def checkerboard_coloring(d: Diagram) -> list[str]:
    """Color faces 'white'/'black' so faces sharing an edge differ.

    The face on the left side of edge 0 (the one whose orbit departs from
    edge 0's tail end) is designated white.
    """
    faces = d.faces()
    lookup = d.face_of_dart()
    adjacency: list[set[int]] = [set() for _ in faces]
    for ell in range(2 * d.n):
        f_left = lookup[d.edge_tail(ell)]
        f_right = lookup[d.edge_head(ell)]
        adjacency[f_left].add(f_right)
        adjacency[f_right].add(f_left)
    colors: list[str | None] = [None] * len(faces)
    root = lookup[d.edge_tail(0)]
    colors[root] = "white"
    queue = [root]
    while queue:
        f = queue.pop()
        other = "black" if colors[f] == "white" else "white"
        for g in adjacency[f]:
            if colors[g] is None:
                colors[g] = other
                queue.append(g)
            elif colors[g] == colors[f]:
                raise DiagramError("diagram is not checkerboard colorable")
    if any(c is None for c in colors):
        raise DiagramError("face adjacency is not connected")
    return colors  # type: ignore[return-value]


def _integer_determinant(mat: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    size = len(mat)
    if size == 0:
        return 1
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for r in range(k + 1, size):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[size - 1][size - 1]


def goeritz_determinant(d: Diagram) -> int:
    """|det K| via the Goeritz matrix of the white checkerboard surface."""
    colors = checkerboard_coloring(d)
    lookup = d.face_of_dart()
    white = [f for f, col in enumerate(colors) if col == "white"]
    index = {f: i for i, f in enumerate(white)}
    size = len(white)
    g = [[0] * size for _ in range(size)]
    for c, x in enumerate(d.crossings):
        # Corner sector between positions p and p+1 belongs to the face
        # whose orbit departs at (c, p).
        corner_face = [lookup[(c, p)] for p in range(4)]
        q = 0 if colors[corner_face[0]] == "white" else 1
        eta = 1 if q == x.over_in % 2 else -1
        i = index[corner_face[q]]
        j = index[corner_face[q + 2]]
        if i != j:
            g[i][j] -= eta
            g[j][i] -= eta
            g[i][i] += eta
            g[j][j] += eta
    reduced = [row[1:] for row in g[1:]]
    return abs(_integer_determinant(reduced))


def _smoothing_arcs(d: Diagram) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = d.n
    twin = np.empty(4 * n, dtype=np.int32)
    for c in range(n):
        for p in range(4):
            tc, tp = d.twin((c, p))
            twin[4 * c + p] = 4 * tc + tp
    arcs_a = np.empty((n, 4), dtype=np.int32)
    arcs_b = np.empty((n, 4), dtype=np.int32)
    for c, x in enumerate(d.crossings):
        q = x.over_in
        # A-smoothing opens the channel between the two sectors swept when
        # the over-strand rotates counterclockwise onto the under-strand.
        a_pairs = ((q + 1) % 4, (q + 2) % 4, (q + 3) % 4, q)
        b_pairs = (q, (q + 1) % 4, (q + 2) % 4, (q + 3) % 4)
        arcs_a[c] = [4 * c + p for p in a_pairs]
        arcs_b[c] = [4 * c + p for p in b_pairs]
    return twin, arcs_a, arcs_b


def kauffman_determinant(d: Diagram) -> int:
    """|det K| from the bracket state sum at the determinant specialization.

    At that evaluation point the closed-loop value vanishes, so only
    single-loop states contribute; each adds an eighth root of unity
    determined by its smoothing imbalance.  The sum is accumulated exactly
    in the ring of eighth-cyclotomic integers.
    """
    n = d.n
    if n > 16:
        raise DiagramError(f"bracket state sum limited to N <= 16 (got {n})")
    twin, arcs_a, arcs_b = _smoothing_arcs(d)
    counts = _kernels.bracket_single_loop_counts(n, twin, arcs_a, arcs_b)
    phases = [0] * 8
    for popcount in range(n + 1):
        phases[(n - 2 * popcount) % 8] += int(counts[popcount])
    n0 = phases[0] - phases[4]
    n1 = phases[1] - phases[5]
    n2 = phases[2] - phases[6]
    n3 = phases[3] - phases[7]
    irrational = n0 * (n1 - n3) + n2 * (n1 + n3)
    if irrational != 0:
        raise AssertionError("bracket sum is not a rational integer in modulus")
    square = n0 * n0 + n1 * n1 + n2 * n2 + n3 * n3
    root = math.isqrt(square)
    if root * root != square:
        raise AssertionError("bracket modulus is not a perfect square")
    return root
