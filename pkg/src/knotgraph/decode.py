"""Attributed graph -> knot diagram, unique up to mirror image.

A labeled graph with a rotation system lies in the encoder's image only
if every rotation face is a quadrilateral whose opposite edges carry
consecutive labels mod 2N.  Reconstruction turns each face back into a
crossing, reads strand order off the labels, seeds one arbitrary visit as
"under" and propagates all other pass types through the alternation
attributes.  The encoding is blind to chirality, so the output is
canonicalized between the two mirror variants.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Crossing, Diagram, DiagramError, gauss_text
from .encode import KnotGraph

__all__ = ["ReconstructError", "ReconstructionReport", "validate_graph", "reconstruct"]

CHIRALITY_NOTE = "reconstruction is defined up to mirror image"


class ReconstructError(ValueError):
    """Raised for graphs outside the encoder's image."""


@dataclass(frozen=True)
class ReconstructionReport:
    diagram: Diagram | None
    quad_faces_ok: bool
    label_condition_ok: bool
    chirality_note: str = CHIRALITY_NOTE


def _graph_faces(g: KnotGraph) -> list[list[tuple[int, int]]]:
    """Orbits of the rotation system; graph darts are (raw_label, side)."""
    position: dict[tuple[int, int], tuple[int, int]] = {}
    for node, ends in enumerate(g.rotation):
        for idx, end in enumerate(ends):
            if end in position:
                raise ReconstructError(f"edge end {end} appears twice in the rotation")
            position[end] = (node, idx)
    if len(position) != 4 * g.crossings:
        raise ReconstructError("rotation does not cover every edge end exactly once")
    faces = []
    seen: set[tuple[int, int]] = set()
    for node, ends in enumerate(g.rotation):
        for idx, start in enumerate(ends):
            if start in seen:
                continue
            orbit = []
            dart = start
            while True:
                orbit.append(dart)
                seen.add(dart)
                twin = (dart[0], 1 - dart[1])
                n2, i2 = position[twin]
                dart = g.rotation[n2][(i2 - 1) % len(g.rotation[n2])]
                if dart == start:
                    break
            faces.append(orbit)
    return faces


def validate_graph(g: KnotGraph) -> tuple[bool, bool, list[str]]:
    """Check the two reconstruction preconditions, report-style.

    Returns (quad_faces_ok, label_condition_ok, diagnostics).  Labels are
    carried by both the edge list and the rotation; any disagreement
    between the two counts against the label condition.
    """
    diagnostics: list[str] = []
    try:
        faces = _graph_faces(g)
    except ReconstructError as exc:
        return False, False, [str(exc)]
    m = 2 * g.crossings
    quad_ok = True
    label_ok = True
    endpoints: dict[int, tuple[int, int]] = {}
    for e in g.edges:
        if e.raw_label in endpoints:
            label_ok = False
            diagnostics.append(f"label {e.raw_label} appears on two edges")
        endpoints[e.raw_label] = (e.u, e.v)
    for node, ends in enumerate(g.rotation):
        for ell, side in ends:
            expected = endpoints.get(ell)
            if expected is None or expected[side] != node:
                label_ok = False
                diagnostics.append(
                    f"rotation end ({ell},{side}) at node {node} does not match the edge list"
                )
    for orbit in faces:
        if len(orbit) != 4:
            quad_ok = False
            diagnostics.append(f"face {orbit} has {len(orbit)} edges, not 4")
            continue
        labels = [ell for ell, _ in orbit]
        for first, second in ((labels[0], labels[2]), (labels[1], labels[3])):
            if (first + 1) % m != second and (second + 1) % m != first:
                label_ok = False
                diagnostics.append(
                    f"face {labels}: opposite labels {first},{second} are not consecutive mod {m}"
                )
    return quad_ok, label_ok, diagnostics


def _orient_pairs(labels: list[int], m: int, used_in: set[int]) -> list[tuple[int, int]]:
    """Assign strand direction to the two opposite pairs of one quad face.

    Returns [(in_label, in_slot), ...] for the slot pairs (0,2) and (1,3).
    """
    oriented = []
    for slot_x, slot_y in ((0, 2), (1, 3)):
        x, y = labels[slot_x], labels[slot_y]
        x_in = (x + 1) % m == y
        y_in = (y + 1) % m == x
        if x_in and y_in:  # only for 2N = 2: pick the unused direction
            x_in = x not in used_in
            y_in = not x_in
        if x_in:
            oriented.append((x, slot_x))
            used_in.add(x)
        elif y_in:
            oriented.append((y, slot_y))
            used_in.add(y)
        else:
            raise ReconstructError(f"labels {x},{y} are not consecutive mod {m}")
    return oriented


def reconstruct(g: KnotGraph) -> ReconstructionReport:
    """Rebuild the knot diagram from a labeled graph with rotation.

    The lowest-id face becomes the anchor crossing; its lowest incoming
    label is declared the under-strand and every other pass type follows
    from the alternation attributes.  Output equals the encoded diagram or
    its mirror image, canonicalized to the lexicographically smaller
    Gauss text.
    """
    quad_ok, label_ok, diagnostics = validate_graph(g)
    if not (quad_ok and label_ok):
        raise ReconstructError("validation failed: " + "; ".join(diagnostics))
    n = g.crossings
    m = 2 * n
    if len(g.edges) != m:
        raise ReconstructError(f"expected {m} edges for {n} crossings, got {len(g.edges)}")
    faces = _graph_faces(g)
    if len(faces) != n:
        raise ReconstructError(
            f"rotation system yields {len(faces)} faces; {n} crossings need exactly {n}"
        )
    alternation = {}
    for e in g.edges:
        if e.alternation not in (-1, 1):
            raise ReconstructError(f"edge {e.raw_label}: alternation must be +1 or -1")
        alternation[e.raw_label] = e.alternation

    # visit_face[ell] = face whose crossing the strand enters via edge ell
    visit_face: dict[int, int] = {}
    face_labels: list[list[int]] = []
    face_pairs: list[list[tuple[int, int]]] = []
    used_in: set[int] = set()
    for fid, orbit in enumerate(faces):
        labels = [ell for ell, _ in orbit]
        face_labels.append(labels)
        pairs = _orient_pairs(labels, m, used_in)
        face_pairs.append(pairs)
        for inc, _ in pairs:
            if inc in visit_face:
                raise ReconstructError(f"edge {inc} enters two crossings")
            visit_face[inc] = fid
    if set(visit_face) != set(range(m)):
        raise ReconstructError("incoming labels do not cover every edge once")

    # seed the anchor and propagate pass types along the strand
    anchor = min(inc for inc, _ in face_pairs[0])
    pass_of = {anchor: "under"}
    ell = anchor
    for _ in range(m):
        nxt = (ell + 1) % m
        flip = alternation[nxt] == 1
        prop = ("over" if pass_of[ell] == "under" else "under") if flip else pass_of[ell]
        if nxt in pass_of and pass_of[nxt] != prop:
            raise ReconstructError(
                "propagation contradiction: alternation attributes are inconsistent"
            )
        pass_of[nxt] = prop
        ell = nxt
    for fid, pairs in enumerate(face_pairs):
        (in_a, _), (in_b, _) = pairs
        if pass_of[in_a] == pass_of[in_b]:
            raise ReconstructError(
                "propagation contradiction: both strands of one crossing "
                f"(face {fid}) end up {pass_of[in_a]}"
            )

    crossings = []
    for fid, labels in enumerate(face_labels):
        pairs = face_pairs[fid]
        under = next(p for p in pairs if pass_of[p[0]] == "under")
        over = next(p for p in pairs if pass_of[p[0]] == "over")
        root = under[1]
        rooted = tuple(labels[(root + i) % 4] for i in range(4))
        crossings.append(Crossing(labels=rooted, over_in=(over[1] - root) % 4))
    try:
        diagram = Diagram(crossings)
    except DiagramError as exc:
        raise ReconstructError(f"graph is not in the encoder's image: {exc}") from exc
    mirrored = diagram.mirror()
    chosen = diagram if gauss_text(diagram) <= gauss_text(mirrored) else mirrored
    return ReconstructionReport(
        diagram=chosen, quad_faces_ok=quad_ok, label_condition_ok=label_ok
    )
