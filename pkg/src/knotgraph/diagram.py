"""Oriented knot diagrams with a combinatorial rotation system.

A diagram is a 4-valent map: every crossing carries four edge-ends
("darts") in counterclockwise order, rooted at the incoming under-strand
end (the usual PD-code convention).  Edges are labeled 0..2N-1 so that
walking the knot in its orientation visits labels in increasing order
mod 2N.  All values are immutable; every operation returns a new
diagram.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "DiagramError",
    "Crossing",
    "Face",
    "Diagram",
    "parse_pd",
    "render_pd",
    "gauss_code",
    "canonical_gauss",
]


class DiagramError(ValueError):
    """Raised when text or combinatorial data does not describe a valid knot diagram."""


# A dart is (crossing index, position 0..3).  Position 0 is the incoming
# under-strand end; positions run counterclockwise.
Dart = tuple[int, int]


@dataclass(frozen=True)
class Crossing:
    """One crossing: the four incident edge labels plus strand data.

    ``labels`` lists the edge label at positions 0..3.  ``over_in`` is the
    position (1 or 3) where the over-strand enters; the over-strand exits
    at the opposite position.  The under-strand always enters at 0 and
    exits at 2.
    """

    labels: tuple[int, int, int, int]
    over_in: int  # 1 or 3

    @property
    def sign(self) -> int:
        """Crossing handedness: +1 when the over-strand enters at position 3."""
        return 1 if self.over_in == 3 else -1

    def pass_type_at(self, position: int) -> str:
        """'over' or 'under' for the strand occupying ``position``."""
        return "under" if position % 2 == 0 else "over"

    def incoming_positions(self) -> tuple[int, int]:
        return (0, self.over_in)


@dataclass(frozen=True)
class Face:
    """A complementary region: the orbit of the face-traversal map.

    The boundary lists darts in traversal order; each boundary dart is the
    end from which the walk departs along its edge, with the face interior
    on the left of the walk.
    """

    id: int
    boundary: tuple[Dart, ...]

    def __len__(self) -> int:
        return len(self.boundary)


class Diagram:
    """An oriented knot diagram with N >= 1 crossings and 2N labeled edges."""

    __slots__ = ("crossings", "n", "_edge_tail", "_edge_head", "_faces", "_fingerprint")

    def __init__(self, crossings: Sequence[Crossing]):
        self.crossings: tuple[Crossing, ...] = tuple(crossings)
        self.n = len(self.crossings)
        self._faces: tuple[Face, ...] | None = None
        self._fingerprint: str | None = None
        self._validate_and_index()

    # -- construction ------------------------------------------------------

    def _validate_and_index(self) -> None:
        n = self.n
        if n == 0:
            raise DiagramError("empty diagram (N >= 1 required)")
        m = 2 * n
        tails: dict[int, Dart] = {}
        heads: dict[int, Dart] = {}
        seen: dict[int, int] = {}
        for c, x in enumerate(self.crossings):
            if x.over_in not in (1, 3):
                raise DiagramError(f"crossing {c}: over_in must be 1 or 3")
            for ell in x.labels:
                if not 0 <= ell < m:
                    raise DiagramError(f"crossing {c}: label {ell} outside [0, {m})")
                seen[ell] = seen.get(ell, 0) + 1
            a, c_out = x.labels[0], x.labels[2]
            if c_out != (a + 1) % m:
                raise DiagramError(
                    f"crossing {c}: under-strand labels {a}->{c_out} do not increase; "
                    "links are not supported"
                )
            o_in, o_out = x.labels[x.over_in], x.labels[x.over_in ^ 2]
            if o_out != (o_in + 1) % m:
                raise DiagramError(
                    f"crossing {c}: over-strand labels {o_in}->{o_out} do not increase; "
                    "links are not supported"
                )
            for pos in (0, x.over_in):
                ell = x.labels[pos]
                if ell in heads:
                    raise DiagramError(
                        f"edge {ell} enters two crossings; links are not supported"
                    )
                heads[ell] = (c, pos)
            for pos in (2, x.over_in ^ 2):
                ell = x.labels[pos]
                if ell in tails:
                    raise DiagramError(
                        f"edge {ell} leaves two crossings; links are not supported"
                    )
                tails[ell] = (c, pos)
        if set(seen) != set(range(m)) or any(v != 2 for v in seen.values()):
            raise DiagramError(f"labels must be exactly 0..{m - 1}, each used twice")
        self._edge_tail = tuple(tails[ell] for ell in range(m))
        self._edge_head = tuple(heads[ell] for ell in range(m))
        # Genus check: a knot diagram lives on the sphere, so Euler's formula
        # forces exactly N + 2 faces.
        if len(self.faces()) != n + 2:
            raise DiagramError("rotation system is not planar (face count != N + 2)")

    # -- basic accessors ---------------------------------------------------

    def edge_tail(self, ell: int) -> Dart:
        return self._edge_tail[ell]

    def edge_head(self, ell: int) -> Dart:
        return self._edge_head[ell]

    def label_at(self, dart: Dart) -> int:
        c, p = dart
        return self.crossings[c].labels[p]

    def twin(self, dart: Dart) -> Dart:
        """The other end of the edge attached at ``dart``."""
        ell = self.label_at(dart)
        t, h = self._edge_tail[ell], self._edge_head[ell]
        return h if dart == t else t

    @property
    def fingerprint(self) -> str:
        if self._fingerprint is None:
            digest = hashlib.sha256(render_pd(self).encode()).hexdigest()
            self._fingerprint = digest[:16]
        return self._fingerprint

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.crossings == other.crossings

    def __hash__(self) -> int:
        return hash(self.crossings)

    def __repr__(self) -> str:
        return f"Diagram(N={self.n}, pd={render_pd(self)!r})"

    # -- faces -------------------------------------------------------------

    def faces(self) -> tuple[Face, ...]:
        """All complementary regions, as orbits of the traversal map.

        From a dart, cross to the twin end of its edge, then take the next
        dart clockwise in that crossing's rotation.  Every dart lies on
        exactly one face.  Faces are ordered (and their boundaries rooted)
        by the smallest (edge label, tail/head side) end they contain, an
        order that does not depend on how crossing tuples are rooted; in
        particular the mirror image has identical face ids.
        """
        if self._faces is not None:
            return self._faces
        def end_key(dart: Dart) -> tuple[int, int]:
            ell = self.label_at(dart)
            return ell, 0 if dart == self._edge_tail[ell] else 1
        orbits: list[list[Dart]] = []
        visited: set[Dart] = set()
        for c in range(self.n):
            for p in range(4):
                start = (c, p)
                if start in visited:
                    continue
                orbit: list[Dart] = []
                d = start
                while True:
                    orbit.append(d)
                    visited.add(d)
                    tc, tp = self.twin(d)
                    d = (tc, (tp - 1) % 4)
                    if d == start:
                        break
                root = min(range(len(orbit)), key=lambda i: end_key(orbit[i]))
                orbits.append(orbit[root:] + orbit[:root])
        orbits.sort(key=lambda orbit: end_key(orbit[0]))
        self._faces = tuple(
            Face(id=i, boundary=tuple(orbit)) for i, orbit in enumerate(orbits)
        )
        return self._faces

    def face_of_dart(self) -> dict[Dart, int]:
        """Map each dart to the id of the face whose orbit contains it."""
        lookup: dict[Dart, int] = {}
        for f in self.faces():
            for d in f.boundary:
                lookup[d] = f.id
        return lookup

    def edge_faces(self, ell: int) -> tuple[int, int]:
        """Ids of the faces left of edge ``ell`` (tail side) and right of it."""
        lookup = self.face_of_dart()
        return lookup[self._edge_tail[ell]], lookup[self._edge_head[ell]]

    # -- strand walk -------------------------------------------------------

    def visits(self) -> Iterator[tuple[int, Dart, Dart]]:
        """Yield (edge label, head dart, out dart) along the strand from label 0."""
        m = 2 * self.n
        for ell in range(m):
            c, p = self._edge_head[ell]
            yield ell, (c, p), (c, p ^ 2)

    def pass_type_of_visit(self, ell: int) -> str:
        """Pass type of the crossing visit entered via edge ``ell``."""
        c, p = self._edge_head[ell]
        return self.crossings[c].pass_type_at(p)

    # -- whole-diagram operations -------------------------------------------

    def enumerate_edges(self, start: int) -> "Diagram":
        """Relabel so ``start`` becomes 0 and labels increase along the strand."""
        m = 2 * self.n
        if not 0 <= start < m:
            raise DiagramError(f"start label {start} does not exist")
        if start == 0:
            return self
        relabeled = [
            Crossing(
                labels=tuple((ell - start) % m for ell in x.labels),
                over_in=x.over_in,
            )
            for x in self.crossings
        ]
        return Diagram(relabeled)

    def mirror(self) -> "Diagram":
        """Swap over/under at every crossing (flipping every sign)."""
        flipped = []
        for x in self.crossings:
            r = x.over_in
            labels = tuple(x.labels[(r + i) % 4] for i in range(4))
            flipped.append(Crossing(labels=labels, over_in=(4 - r) % 4))
        return Diagram(flipped)


# -- PD notation ------------------------------------------------------------

_PD_TUPLE = re.compile(r"X\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_pd(text: str) -> Diagram:
    """Parse PD notation: comma-separated ``X(a,b,c,d)`` tuples.

    Labels may be 1-based (KnotInfo style) or 0-based; 0-based is assumed
    exactly when a 0 appears.  Orientation is inferred from the label
    sequence.  Link codes and malformed label sets are rejected.
    """
    stripped = text.strip()
    if not stripped:
        raise DiagramError("empty diagram")
    tuples: list[tuple[int, int, int, int]] = []
    pos = 0
    while pos < len(stripped):
        match = _PD_TUPLE.match(stripped, pos)
        if match is None:
            raise DiagramError(f"malformed PD notation near {stripped[pos:pos + 24]!r}")
        tuples.append(tuple(int(g) for g in match.groups()))
        pos = match.end()
        if pos < len(stripped):
            if stripped[pos] != ",":
                raise DiagramError(f"expected ',' near {stripped[pos:pos + 24]!r}")
            pos += 1
    n = len(tuples)
    m = 2 * n
    flat = [ell for t in tuples for ell in t]
    base = 0 if 0 in flat else 1
    labels = sorted(ell - base for ell in flat)
    if labels != sorted(list(range(m)) + list(range(m))):
        raise DiagramError(f"labels must be exactly {{{base}..{m - 1 + base}}}, each used twice")
    crossings = []
    for a, b, c, d in tuples:
        a, b, c, d = a - base, b - base, c - base, d - base
        b_next, d_next = (b + 1) % m, (d + 1) % m
        if n == 1:
            # Both readings satisfy the mod-2 label rule; head/tail
            # bookkeeping settles direction: edge a already has its head at
            # position 0, so if b == a position 1 must be the over-out end.
            over_in = 3 if b == a else 1
        elif d == b_next and b != d_next:
            over_in = 1
        elif b == d_next and d != b_next:
            over_in = 3
        else:
            raise DiagramError(
                f"crossing X({a + base},{b + base},{c + base},{d + base}): over-strand "
                "labels are not consecutive; links are not supported"
            )
        crossings.append(Crossing(labels=(a, b, c, d), over_in=over_in))
    return Diagram(crossings)


def render_pd(d: Diagram) -> str:
    """Inverse of :func:`parse_pd`: 1-based labels, no whitespace."""
    return ",".join(
        "X({},{},{},{})".format(*(ell + 1 for ell in x.labels)) for x in d.crossings
    )


# -- Gauss code --------------------------------------------------------------


def gauss_code(d: Diagram) -> list[tuple[int, str, int]]:
    """Crossing visits (crossing id, 'O'/'U', sign) in strand order from label 0.

    Crossings are renamed 1, 2, ... by first visit, which makes the code
    independent of the internal crossing order.
    """
    rename: dict[int, int] = {}
    out = []
    for ell, (c, p), _ in d.visits():
        if c not in rename:
            rename[c] = len(rename) + 1
        kind = "U" if p % 2 == 0 else "O"
        out.append((rename[c], kind, d.crossings[c].sign))
    return out


def gauss_text(d: Diagram) -> str:
    """Text form: tokens ``O<i><+->``/``U<i><+->`` joined by spaces."""
    return " ".join(
        f"{kind}{idx}{'+' if sign > 0 else '-'}" for idx, kind, sign in gauss_code(d)
    )


def _rotated_gauss_text(d: Diagram, mirrored: bool) -> list[str]:
    base = d.mirror() if mirrored else d
    texts = []
    for start in range(2 * d.n):
        texts.append(gauss_text(base.enumerate_edges(start)))
    return texts


def canonical_gauss(d: Diagram) -> str:
    """Smallest Gauss text over all starting edges and the mirror image.

    Two diagrams are equal up to relabeling and mirror exactly when their
    canonical forms coincide.
    """
    candidates = _rotated_gauss_text(d, mirrored=False) + _rotated_gauss_text(d, mirrored=True)
    return min(candidates)
