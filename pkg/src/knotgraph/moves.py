"""Reidemeister moves: site detection, application, simplification, shuffling.

The shuffle follows a fixed schedule driven by a complexity parameter c:
2c additive twist/poke moves up front, then c rounds of five additive moves
followed by floor(c/20) triangle slides, then greedy removal of every
undoable twist and poke.  Twist moves are picked with probability 0.20 and
pokes with 0.80; the site is uniform among the sites of the chosen kind.
Everything is driven by one seeded generator, so equal seeds give
bit-equal diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._map import DartMap
from .diagram import Diagram

__all__ = [
    "MoveError",
    "MoveSite",
    "ShuffleConfig",
    "SimplifyResult",
    "find_sites",
    "apply",
    "simplify",
    "shuffle",
    "MOVE_KINDS",
]

MOVE_KINDS = ("R1_ADD", "R1_REMOVE", "R2_ADD", "R2_REMOVE", "R3")


class MoveError(ValueError):
    """Raised for stale or inapplicable move sites."""


@dataclass(frozen=True)
class MoveSite:
    """One applicable rewrite, pinned to a specific diagram by fingerprint."""

    kind: str
    data: tuple
    fingerprint: str

    def __repr__(self) -> str:
        return f"MoveSite({self.kind}, {self.data})"


@dataclass(frozen=True)
class ShuffleConfig:
    """Complexity, move-type probabilities, and the seed of the shuffle walk."""

    c: int
    p_r1: float = 0.20
    p_r2: float = 0.80
    seed: int = 0

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("complexity c must be >= 1")
        if not (0.0 <= self.p_r1 <= 1.0) or abs(self.p_r1 + self.p_r2 - 1.0) > 1e-12:
            raise ValueError("move probabilities must be in [0,1] and sum to 1")

    def to_kv(self) -> str:
        return f"c={self.c}\np_r1={self.p_r1}\np_r2={self.p_r2}\nseed={self.seed}\n"

    @classmethod
    def from_kv(cls, text: str) -> "ShuffleConfig":
        fields: dict[str, str] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            fields[key.strip()] = value.strip()
        return cls(
            c=int(fields["c"]),
            p_r1=float(fields.get("p_r1", 0.20)),
            p_r2=float(fields.get("p_r2", 0.80)),
            seed=int(fields.get("seed", 0)),
        )


@dataclass(frozen=True)
class SimplifyResult:
    diagram: Diagram
    is_trivial: bool
    removals: int


# -- site detection -----------------------------------------------------------


def _r1_remove_crossings(d: Diagram) -> list[int]:
    """Crossings carrying a monogon loop, each reported once."""
    out = []
    for c in range(d.n):
        for p in range(4):
            if d.twin((c, p)) == (c, (p + 1) % 4):
                out.append(c)
                break
    return out


def _bigon_removable(d: Diagram, u, v) -> bool:
    (k1, p), (k2, q) = u, v
    if k1 == k2:
        return False
    over_at_k1 = p % 2 == 1
    over_at_k2 = (q + 1) % 2 == 1
    return over_at_k1 == over_at_k2


def find_sites(d: Diagram, kind: str) -> list[MoveSite]:
    """All applicable sites of one move kind, in a fixed deterministic order."""
    if kind not in MOVE_KINDS:
        raise ValueError(f"unknown move kind {kind!r}")
    fp = d.fingerprint
    sites: list[MoveSite] = []
    if kind == "R1_ADD":
        for ell in range(2 * d.n):
            for side in (0, 1):
                for over_loop in (0, 1):
                    sites.append(MoveSite(kind, (ell, side, over_loop), fp))
    elif kind == "R1_REMOVE":
        for c in _r1_remove_crossings(d):
            sites.append(MoveSite(kind, (c,), fp))
    elif kind == "R2_REMOVE":
        for f in d.faces():
            if len(f) == 2 and _bigon_removable(d, f.boundary[0], f.boundary[1]):
                sites.append(MoveSite(kind, (f.id,), fp))
    elif kind == "R2_ADD":
        for f in d.faces():
            b = f.boundary
            for i in range(len(b)):
                for j in range(len(b)):
                    if i == j or d.label_at(b[i]) == d.label_at(b[j]):
                        continue
                    for over in (0, 1):
                        sites.append(MoveSite(kind, (f.id, i, j, over), fp))
    elif kind == "R3":
        for f in d.faces():
            if len(f) != 3:
                continue
            if len({c for c, _ in f.boundary}) != 3:
                continue
            if _triangle_top_rotation(d, f.boundary) is not None:
                sites.append(MoveSite(kind, (f.id,), fp))
    return sites


def _triangle_top_rotation(d: Diagram, boundary) -> tuple | None:
    """Rotate a triangle orbit so the middle edge's strand is over at both
    of its corner crossings; None when no boundary strand is over the
    other two."""
    for r in range(3):
        a = boundary[r]
        b = boundary[(r + 1) % 3]
        c = boundary[(r + 2) % 3]
        over_at_b = b[1] % 2 == 1
        over_at_c = (c[1] + 1) % 2 == 1
        if over_at_b and over_at_c:
            return a, b, c
    return None


# -- application ---------------------------------------------------------------


def _dart_index(dart) -> int:
    return 4 * dart[0] + dart[1]


def apply(d: Diagram, site: MoveSite) -> Diagram:
    """Apply one move; the result is re-labeled from a fresh strand walk."""
    if site.fingerprint != d.fingerprint:
        raise MoveError("stale site: it was enumerated from a different diagram")
    m = DartMap.from_diagram(d, extra_capacity=2)
    kind, data = site.kind, site.data
    if kind == "R1_ADD":
        ell, side, over_loop = data
        m.r1_add(_dart_index(d.edge_tail(ell)), side, over_loop)
    elif kind == "R1_REMOVE":
        if d.n == 1:
            raise MoveError("site no longer applicable: removing the last crossing")
        (c,) = data
        if c not in _r1_remove_crossings(d):
            raise MoveError("site no longer applicable: no monogon at this crossing")
        m.delete_and_heal([c])
    elif kind == "R2_ADD":
        f, i, j, over = data
        b = d.faces()[f].boundary
        m.r2_add(_dart_index(b[i]), _dart_index(b[j]), finger_over=(over == 0))
    elif kind == "R2_REMOVE":
        if d.n == 2:
            raise MoveError("site no longer applicable: removal would empty the diagram")
        (f,) = data
        u, v = d.faces()[f].boundary
        if not _bigon_removable(d, u, v):
            raise MoveError("site no longer applicable: bigon is not removable")
        m.delete_and_heal([u[0], v[0]])
    elif kind == "R3":
        (f,) = data
        rotation = _triangle_top_rotation(d, d.faces()[f].boundary)
        if rotation is None:
            raise MoveError("site no longer applicable: triangle is not slidable")
        a, b, c = rotation
        m.r3(_dart_index(a), _dart_index(b), _dart_index(c))
    else:
        raise MoveError(f"unknown move kind {kind!r}")
    return m.to_diagram()


# -- simplification -------------------------------------------------------------


def _face_structure(m: DartMap):
    return m.face_ids()


def _map_bigon_removable(m: DartMap, u: int, v: int) -> bool:
    k1, k2 = u >> 2, v >> 2
    if k1 == k2:
        return False
    over_at_k1 = (u & 3) % 2 == m.over[k1]
    over_at_k2 = ((v & 3) + 1) % 2 == m.over[k2]
    return over_at_k1 == over_at_k2


def _map_simplify(m: DartMap) -> tuple[bool, int]:
    """Greedy removal loop; returns (is_trivial, number of removals).

    Applies the removable site with the smallest face id of the current
    map until none is left.  Removals that would drop below one crossing
    are suppressed; when only those remain the diagram is a trivial
    unknot and is left as is.
    """
    removals = 0
    while True:
        _, count, sizes, reps = _face_structure(m)
        applied = False
        suppressed = False
        for f in range(count):
            if sizes[f] == 1:
                if m.num_alive < 2:
                    suppressed = True
                    continue
                m.delete_and_heal([int(reps[f]) >> 2])
                removals += 1
                applied = True
                break
            if sizes[f] == 2:
                u = int(reps[f])
                v = m.phi(u)
                if not _map_bigon_removable(m, u, v):
                    continue
                if m.num_alive < 3:
                    suppressed = True
                    continue
                m.delete_and_heal([u >> 2, v >> 2])
                removals += 1
                applied = True
                break
        if not applied:
            return suppressed, removals


def simplify(d: Diagram) -> SimplifyResult:
    """Undo removable twists and pokes until none is left.

    Deterministic: each step removes the site with the smallest face id.
    A final removal that would empty the diagram is suppressed and the
    result is flagged trivial instead.
    """
    m = DartMap.from_diagram(d)
    is_trivial, removals = _map_simplify(m)
    if removals == 0:
        return SimplifyResult(diagram=d, is_trivial=is_trivial, removals=0)
    return SimplifyResult(diagram=m.to_diagram(), is_trivial=is_trivial, removals=removals)


# -- shuffle ---------------------------------------------------------------------


def _edge_id(m: DartMap, dart: int) -> int:
    return min(dart, int(m.glue[dart]))


def _random_additive(m: DartMap, rng: np.random.Generator, p_r1: float) -> None:
    if rng.random() < p_r1:
        outs = m.edge_out_darts()
        idx = int(rng.integers(0, 4 * len(outs)))
        m.r1_add(int(outs[idx // 4]), side=(idx % 4) // 2, over_loop=idx % 2)
        return
    face, count, sizes, reps = m.face_ids()
    outs = m.edge_out_darts()
    face_out = face[outs]
    face_in = face[m.glue[outs]]
    same = face_out == face_in
    self_edges = np.bincount(face_out[same], minlength=count)
    pair_counts = sizes * (sizes - 1) - 2 * self_edges
    site_counts = 2 * pair_counts
    total = int(site_counts.sum())
    idx = int(rng.integers(0, total))
    cumulative = np.cumsum(site_counts)
    f = int(np.searchsorted(cumulative, idx, side="right"))
    rem = idx - (int(cumulative[f - 1]) if f > 0 else 0)
    over = rem % 2
    pair_rank = rem // 2
    # walk the face once to resolve the pair rank into boundary darts
    boundary = m.orbit(int(reps[f]))
    multiplicity: dict[int, int] = {}
    for dart in boundary:
        e = _edge_id(m, dart)
        multiplicity[e] = multiplicity.get(e, 0) + 1
    s = len(boundary)
    d1 = d2 = -1
    for i, dart_i in enumerate(boundary):
        valid_here = s - multiplicity[_edge_id(m, dart_i)]
        if pair_rank >= valid_here:
            pair_rank -= valid_here
            continue
        e_i = _edge_id(m, dart_i)
        for j, dart_j in enumerate(boundary):
            if j == i or _edge_id(m, dart_j) == e_i:
                continue
            if pair_rank == 0:
                d1, d2 = dart_i, dart_j
                break
            pair_rank -= 1
        break
    m.r2_add(d1, d2, finger_over=(over == 0))


def _map_r3_sites(m: DartMap) -> list[tuple[int, int, int]]:
    face, count, sizes, reps = _face_structure(m)
    out = []
    for f in range(count):
        if sizes[f] != 3:
            continue
        u = int(reps[f])
        v = m.phi(u)
        w = m.phi(v)
        if len({u >> 2, v >> 2, w >> 2}) != 3:
            continue
        rotation = _map_triangle_top(m, (u, v, w))
        if rotation is not None:
            out.append(rotation)
    return out


def _map_triangle_top(m: DartMap, orbit: tuple[int, int, int]):
    for r in range(3):
        a = orbit[r]
        b = orbit[(r + 1) % 3]
        c = orbit[(r + 2) % 3]
        over_at_b = (b & 3) % 2 == m.over[b >> 2]
        over_at_c = ((c & 3) + 1) % 2 == m.over[c >> 2]
        if over_at_b and over_at_c:
            return a, b, c
    return None


def shuffle(d: Diagram, cfg: ShuffleConfig) -> Diagram:
    """Complexity-c random walk in diagram space, then full simplification.

    Schedule: (a) 2c additive moves; (b) c rounds of 5 additive moves plus
    floor(c/20) triangle slides, skipped silently when no slide site
    exists; (c) greedy removal of all undoable twists and pokes.  The
    output is ambient isotopic to the input.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))
    c = cfg.c
    m = DartMap.from_diagram(d, extra_capacity=2 * 7 * c + 4)
    for _ in range(2 * c):
        _random_additive(m, rng, cfg.p_r1)
    for _ in range(c):
        for _ in range(5):
            _random_additive(m, rng, cfg.p_r1)
        for _ in range(c // 20):
            sites = _map_r3_sites(m)
            if not sites:
                continue
            a, b, cc = sites[int(rng.integers(0, len(sites)))]
            m.r3(a, b, cc)
    _map_simplify(m)
    return m.to_diagram()
