"""Diagram -> attributed planar graph.

Faces become nodes; every knot edge becomes a graph edge joining the two
faces it separates.  Crossings turn into quadrilateral graph faces.  Each
graph edge carries the raw strand label, an alternation flag (+1 when the
strand changes between over and under across the edge) and a distance
attribute: how far apart along the strand the two transversal strands at
the edge's endpoints sit.  The distance is squashed into [0, 1) by
``1 - 2**(-d / d_s)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram, DiagramError

__all__ = ["EncodeError", "GraphEdge", "KnotGraph", "encode", "alternation_attr", "distance_attr"]

DEFAULT_DISTANCE_SCALE = 15.0


class EncodeError(DiagramError):
    """Raised when a diagram cannot be encoded (a face touches itself)."""


@dataclass(frozen=True)
class GraphEdge:
    u: int
    v: int
    raw_label: int
    alternation: int
    raw_distance: int
    activated_distance: float


@dataclass(frozen=True)
class KnotGraph:
    """The functor's output, including the rotation system used to invert it.

    ``rotation[node]`` lists (raw_label, side) pairs counterclockwise as
    inherited from the face boundary; side 0 is the edge end at the face
    left of the strand (tail side), side 1 the other.
    """

    num_nodes: int
    edges: tuple[GraphEdge, ...]
    rotation: tuple[tuple[tuple[int, int], ...], ...]
    crossings: int
    fingerprint: str
    d_s: float
    distance_mode: str

    @property
    def parallel_edge_count(self) -> int:
        """Number of edges sharing both endpoints with an earlier edge."""
        seen: set[tuple[int, int]] = set()
        parallel = 0
        for e in self.edges:
            key = (min(e.u, e.v), max(e.u, e.v))
            if key in seen:
                parallel += 1
            seen.add(key)
        return parallel

    def degrees(self) -> list[int]:
        return [len(r) for r in self.rotation]

    # -- JSON profile shared with the dataset emitter -----------------------

    def to_json_obj(self) -> dict:
        arcs = []
        edge_attr = []
        raw_label = []
        raw_distance = []
        for e in self.edges:
            for u, v in ((e.u, e.v), (e.v, e.u)):
                arcs.append([u, v])
                edge_attr.append([e.alternation, e.activated_distance])
                raw_label.append(e.raw_label)
                raw_distance.append(e.raw_distance)
        degs = self.degrees()
        top = max(degs) if degs else 1
        return {
            "num_nodes": self.num_nodes,
            "crossings": self.crossings,
            "edges": arcs,
            "edge_attr": edge_attr,
            "raw_label": raw_label,
            "raw_distance": raw_distance,
            "node_attr": [[1.0, deg / top] for deg in degs],
            "rotation": [[[ell, side] for ell, side in node] for node in self.rotation],
            "d_s": self.d_s,
            "distance_mode": self.distance_mode,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "KnotGraph":
        arcs = obj["edges"]
        if len(arcs) % 2:
            raise ValueError("arc list must pair every edge with its reverse")
        edges = []
        for k in range(0, len(arcs), 2):
            (u, v), (v2, u2) = arcs[k], arcs[k + 1]
            if (u, v) != (u2, v2):
                raise ValueError(f"arc {k + 1} is not the reverse of arc {k}")
            alternation, activated = obj["edge_attr"][k]
            edges.append(
                GraphEdge(
                    u=u,
                    v=v,
                    raw_label=int(obj["raw_label"][k]),
                    alternation=int(alternation),
                    raw_distance=int(obj.get("raw_distance", [0] * len(arcs))[k]),
                    activated_distance=float(activated),
                )
            )
        rotation = tuple(
            tuple((int(ell), int(side)) for ell, side in node) for node in obj["rotation"]
        )
        return cls(
            num_nodes=int(obj["num_nodes"]),
            edges=tuple(edges),
            rotation=rotation,
            crossings=int(obj.get("crossings", len(edges) // 2)),
            fingerprint=str(obj.get("fingerprint", "")),
            d_s=float(obj.get("d_s", DEFAULT_DISTANCE_SCALE)),
            distance_mode=str(obj.get("distance_mode", "circular")),
        )


def alternation_attr(d: Diagram, ell: int) -> int:
    """+1 when the strand's pass type differs between the edge's endpoints."""
    tc, tp = d.edge_tail(ell)
    hc, hp = d.edge_head(ell)
    tail_pass = d.crossings[tc].pass_type_at(tp)
    head_pass = d.crossings[hc].pass_type_at(hp)
    return 1 if tail_pass != head_pass else -1


def _transversal_in_label(d: Diagram, dart) -> int:
    """Label entering the crossing on the strand transversal to ``dart``'s."""
    c, p = dart
    x = d.crossings[c]
    for q in ((p + 1) % 4, (p + 3) % 4):
        if q in (0, x.over_in):
            return x.labels[q]
    raise AssertionError("crossing has no transversal incoming dart")


def distance_attr(
    d: Diagram,
    ell: int,
    d_s: float = DEFAULT_DISTANCE_SCALE,
    paper_literal: bool = False,
) -> tuple[int, float]:
    """(raw, activated) walking distance between the transversal strands.

    The transversal visit at each endpoint sits between its incoming label
    a and outgoing label a+1; the raw distance is the circular distance
    between the two midpoints on the strand cycle of length 2N.  With
    ``paper_literal`` the unwrapped |a+b-(c+d)|/2 mod N variant is computed
    instead, for comparison.
    """
    m = 2 * d.n
    a = _transversal_in_label(d, d.edge_tail(ell))
    c = _transversal_in_label(d, d.edge_head(ell))
    if paper_literal:
        b, dd = (a + 1) % m, (c + 1) % m
        raw = (abs((a + b) - (c + dd)) // 2) % d.n
    else:
        delta = (a - c) % m
        raw = min(delta, m - delta)
    activated = 1.0 - 2.0 ** (-raw / d_s)
    return raw, activated


def encode(
    d: Diagram,
    d_s: float = DEFAULT_DISTANCE_SCALE,
    paper_literal_distance: bool = False,
) -> KnotGraph:
    """Encode a diagram as its face-dual attributed graph.

    Nodes carry no intrinsic features.  Parallel edges are preserved; a
    face adjacent to itself across an edge cannot be represented as a
    loop-free graph and is rejected.
    """
    if d_s <= 0:
        raise ValueError("distance scale d_s must be positive")
    faces = d.faces()
    lookup = d.face_of_dart()
    edges = []
    for ell in range(2 * d.n):
        u = lookup[d.edge_tail(ell)]
        v = lookup[d.edge_head(ell)]
        if u == v:
            raise EncodeError(
                f"edge {ell} has the same face on both sides; "
                "the dual would need a self-loop"
            )
        raw, activated = distance_attr(d, ell, d_s=d_s, paper_literal=paper_literal_distance)
        edges.append(
            GraphEdge(
                u=u,
                v=v,
                raw_label=ell,
                alternation=alternation_attr(d, ell),
                raw_distance=raw,
                activated_distance=activated,
            )
        )
    rotation = []
    for f in faces:
        ends = []
        for dart in f.boundary:
            ell = d.label_at(dart)
            side = 0 if dart == d.edge_tail(ell) else 1
            ends.append((ell, side))
        rotation.append(tuple(ends))
    return KnotGraph(
        num_nodes=len(faces),
        edges=tuple(edges),
        rotation=tuple(rotation),
        crossings=d.n,
        fingerprint=d.fingerprint,
        d_s=d_s,
        distance_mode="paper_literal" if paper_literal_distance else "circular",
    )
