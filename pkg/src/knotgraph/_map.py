"""Mutable dart-map: the surgery substrate behind Reidemeister rewrites.

A dart is ``4 * crossing + position`` with positions 0..3 counterclockwise.
State per crossing: which diagonal carries the over-strand (``over``,
position parity 0 or 1) and, per dart, whether the strand leaves through
it (``orient`` 1) or arrives (0).  The strand always runs straight through
a crossing, so the opposite dart is ``d ^ 2`` and the clockwise neighbour
``(d & ~3) | ((d + 3) & 3)``.

Rooting at the incoming under-strand happens only on conversion back to
:class:`~knotgraph.diagram.Diagram`; surgery itself is rooting-free.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .diagram import Crossing, Diagram, DiagramError

OUT = 1
IN = 0


def _cw(d: int) -> int:
    return (d & ~3) | ((d + 3) & 3)


class DartMap:
    __slots__ = ("cap", "glue", "orient", "over", "alive", "num_alive")

    def __init__(self, cap: int):
        self.cap = cap
        self.glue = np.full(4 * cap, -1, dtype=np.int32)
        self.orient = np.full(4 * cap, -1, dtype=np.int8)
        self.over = np.full(cap, -1, dtype=np.int8)
        self.alive = np.zeros(cap, dtype=bool)
        self.num_alive = 0

    # -- conversion ---------------------------------------------------------

    @classmethod
    def from_diagram(cls, d: Diagram, extra_capacity: int = 0) -> "DartMap":
        m = cls(d.n + extra_capacity)
        for c, x in enumerate(d.crossings):
            m.alive[c] = True
            m.over[c] = 1  # rooted tuples put the over-strand on positions 1, 3
            m.orient[4 * c + 0] = IN
            m.orient[4 * c + 2] = OUT
            m.orient[4 * c + x.over_in] = IN
            m.orient[4 * c + (x.over_in ^ 2)] = OUT
        for ell in range(2 * d.n):
            tc, tp = d.edge_tail(ell)
            hc, hp = d.edge_head(ell)
            m.glue[4 * tc + tp] = 4 * hc + hp
            m.glue[4 * hc + hp] = 4 * tc + tp
        m.num_alive = d.n
        return m

    def to_diagram(self) -> Diagram:
        n = self.num_alive
        if n == 0:
            raise DiagramError("surgery emptied the diagram")
        live = np.flatnonzero(self.alive)
        index = {int(k): i for i, k in enumerate(live)}
        # strand walk from the smallest outgoing dart assigns labels
        start = -1
        for k in live:
            for p in range(4):
                if self.orient[4 * k + p] == OUT:
                    start = 4 * k + p
                    break
            if start >= 0:
                break
        label_of = {}
        cur = start
        for ell in range(2 * n):
            if self.orient[cur] != OUT:
                raise DiagramError("orientation flags are inconsistent")
            head = int(self.glue[cur])
            if head < 0 or self.orient[head] != IN:
                raise DiagramError("edge gluing is inconsistent")
            label_of[cur] = ell
            label_of[head] = ell
            cur = head ^ 2
        if cur != start:
            raise DiagramError("strand walk does not close after 2N edges")
        if len(label_of) != 4 * n:
            raise DiagramError("strand walk missed darts (diagram is not a single knot)")
        crossings = []
        for k in live:
            under_parity = 1 - int(self.over[k])
            root = -1
            over_abs = -1
            for p in range(4):
                if self.orient[4 * k + p] == IN:
                    if p % 2 == under_parity:
                        root = p
                    else:
                        over_abs = p
            if root < 0 or over_abs < 0:
                raise DiagramError("crossing is missing an incoming strand")
            labels = tuple(label_of[4 * int(k) + ((root + i) % 4)] for i in range(4))
            crossings.append(Crossing(labels=labels, over_in=(over_abs - root) % 4))
        return Diagram(crossings)

    # -- low-level helpers ---------------------------------------------------

    def _grow(self) -> None:
        new_cap = max(8, self.cap * 2)
        glue = np.full(4 * new_cap, -1, dtype=np.int32)
        orient = np.full(4 * new_cap, -1, dtype=np.int8)
        over = np.full(new_cap, -1, dtype=np.int8)
        alive = np.zeros(new_cap, dtype=bool)
        glue[: 4 * self.cap] = self.glue
        orient[: 4 * self.cap] = self.orient
        over[: self.cap] = self.over
        alive[: self.cap] = self.alive
        self.cap, self.glue, self.orient, self.over, self.alive = (
            new_cap, glue, orient, over, alive,
        )

    def new_crossing(self) -> int:
        for k in range(self.cap):
            if not self.alive[k]:
                self.alive[k] = True
                self.num_alive += 1
                return k
        self._grow()
        return self.new_crossing()

    def _pair(self, a: int, b: int) -> None:
        self.glue[a] = b
        self.glue[b] = a

    def phi(self, d: int) -> int:
        """Face-traversal step: cross the edge, then turn clockwise."""
        return _cw(int(self.glue[d]))

    def orbit(self, start: int) -> list[int]:
        out = [start]
        d = self.phi(start)
        while d != start:
            out.append(d)
            d = self.phi(d)
        return out

    def face_ids(self) -> tuple[np.ndarray, int, np.ndarray, np.ndarray]:
        """Face id per dart (-1 dead), face count, sizes, first dart per face."""
        return _kernels.face_orbits(self.glue)

    def edge_out_darts(self) -> np.ndarray:
        """Outgoing dart of every edge, in ascending dart order."""
        return np.flatnonzero((self.orient == OUT) & (self.glue >= 0))

    # -- additive moves ------------------------------------------------------

    def r1_add(self, out_dart: int, side: int, over_loop: int) -> int:
        """Insert a kink on the edge leaving through ``out_dart``.

        ``side`` picks the mirror variant of the loop; ``over_loop`` decides
        whether the returning passage crosses over the straight one.
        """
        w = out_dart
        z = int(self.glue[w])
        k = self.new_crossing()
        b = 4 * k
        if side == 0:
            self._pair(w, b + 0)
            self._pair(b + 2, b + 3)
            self._pair(b + 1, z)
            self.orient[b + 0] = IN
            self.orient[b + 2] = OUT
            self.orient[b + 3] = IN
            self.orient[b + 1] = OUT
        else:
            self._pair(w, b + 0)
            self._pair(b + 1, b + 2)
            self._pair(b + 3, z)
            self.orient[b + 0] = IN
            self.orient[b + 2] = OUT
            self.orient[b + 1] = IN
            self.orient[b + 3] = OUT
        self.over[k] = 1 if over_loop else 0
        return k

    def r2_add(self, d1: int, d2: int, finger_over: bool) -> tuple[int, int]:
        """Push the edge at ``d1`` across their common face through ``d2``.

        ``d1`` and ``d2`` must lie on one face boundary and on distinct
        edges.  The finger strand crosses over at both new crossings when
        ``finger_over``.
        """
        a1 = int(self.glue[d1])
        a2 = int(self.glue[d2])
        k1 = self.new_crossing()
        k2 = self.new_crossing()
        b1, b2 = 4 * k1, 4 * k2
        self._pair(d1, b1 + 0)
        self._pair(b1 + 2, b2 + 2)
        self._pair(b2 + 0, a1)
        self._pair(d2, b2 + 1)
        self._pair(b1 + 1, b2 + 3)
        self._pair(b1 + 3, a2)
        if self.orient[d1] == OUT:
            self.orient[b1 + 0] = IN
            self.orient[b1 + 2] = OUT
            self.orient[b2 + 2] = IN
            self.orient[b2 + 0] = OUT
        else:
            self.orient[b2 + 0] = IN
            self.orient[b2 + 2] = OUT
            self.orient[b1 + 2] = IN
            self.orient[b1 + 0] = OUT
        if self.orient[d2] == OUT:
            self.orient[b2 + 1] = IN
            self.orient[b2 + 3] = OUT
            self.orient[b1 + 1] = IN
            self.orient[b1 + 3] = OUT
        else:
            self.orient[b1 + 3] = IN
            self.orient[b1 + 1] = OUT
            self.orient[b2 + 3] = IN
            self.orient[b2 + 1] = OUT
        passes = 0 if finger_over else 1
        self.over[k1] = passes
        self.over[k2] = passes
        return k1, k2

    # -- removing moves ------------------------------------------------------

    def delete_and_heal(self, dead: list[int]) -> None:
        """Remove crossings, splicing every strand that ran through them."""
        dead_set = set(dead)
        external: list[int] = []
        for k in dead:
            for p in range(4):
                partner = int(self.glue[4 * k + p])
                if partner >= 0 and (partner >> 2) not in dead_set:
                    external.append(partner)
        for x in external:
            y = int(self.glue[x])
            if (y >> 2) not in dead_set:
                continue  # already re-spliced from the other side
            while (y >> 2) in dead_set:
                y = int(self.glue[y ^ 2])
            self._pair(x, y)
        for k in dead:
            self.glue[4 * k : 4 * k + 4] = -1
            self.orient[4 * k : 4 * k + 4] = -1
            self.over[k] = -1
            self.alive[k] = False
        self.num_alive -= len(dead)

    # -- R3 -------------------------------------------------------------------

    def r3(self, d1: int, d2: int, d3: int) -> None:
        """Slide the strand of ``d2``'s edge across the crossing at ``d1``.

        ``d1 -> d2 -> d3`` must be a triangle face orbit, with the slid
        strand passing entirely over or entirely under its two corners.
        The three crossings persist; only gluings (and the direction flags
        at the two corners the strand leaves) change.
        """
        c1, p1 = d1 >> 2, d1 & 3
        c2, p2 = d2 >> 2, d2 & 3
        c3, p3 = d3 >> 2, d3 & 3

        def at(c, p):
            return 4 * c + (p & 3)

        outer = [
            at(c1, p1 + 2), at(c1, p1 + 3),
            at(c2, p2 + 2), at(c2, p2 + 3),
            at(c3, p3 + 2), at(c3, p3 + 3),
        ]
        # Each outer wire keeps its far endpoint but its near attachment
        # moves; expressing the move on whole wires also covers the cases
        # where two outer slots are ends of one and the same edge.
        move = {
            at(c1, p1 + 2): at(c2, p2 + 3),
            at(c2, p2 + 3): at(c1, p1),
            at(c1, p1 + 3): at(c3, p3 + 2),
            at(c3, p3 + 2): at(c1, p1 + 1),
            at(c2, p2 + 2): at(c3, p3 + 3),
            at(c3, p3 + 3): at(c2, p2 + 2),
        }
        wires = {frozenset((s, int(self.glue[s]))) for s in outer}
        new_pairs = []
        for wire in wires:
            x, y = tuple(wire)
            new_pairs.append((move.get(x, x), move.get(y, y)))
        new_pairs.append((at(c1, p1 + 2), at(c2, p2 + 1)))
        new_pairs.append((at(c1, p1 + 3), at(c3, p3)))
        new_pairs.append((at(c2, p2), at(c3, p3 + 1)))
        for x, y in new_pairs:
            self._pair(x, y)
        for c in (c2, c3):
            for p in range(4):
                self.orient[4 * c + p] ^= 1
