"""Standard alternating diagrams of rational (2-bridge) knots.

A twist vector [a1, ..., ak] is realized as the usual 4-plat: a1 twists at
the bottom of the tangle, a2 twists on the right, alternating, then the
numerator closure.  The fraction p/q of the tangle is the continued
fraction [ak; ak-1, ..., a1]; the knot determinant equals p, which gives
every generated diagram an arithmetic ground truth independent of any
diagram code.  Even p means the closure is a two-component link and the
construction reports it as such.
"""

from __future__ import annotations

from fractions import Fraction

from ._map import IN, OUT, DartMap
from .diagram import Diagram, DiagramError

__all__ = ["twist_fraction", "rational_diagram", "canonical_fraction"]


def twist_fraction(coeffs: list[int]) -> Fraction:
    """Continued fraction [ak; ..., a1] of the twist vector."""
    if not coeffs or any(a < 1 for a in coeffs):
        raise ValueError("twist coefficients must be positive integers")
    value = Fraction(coeffs[0])
    for a in coeffs[1:]:
        value = a + 1 / value
    return value


def canonical_fraction(p: int, q: int) -> tuple[int, int]:
    """Canonical q among the 2-bridge equivalences q ~ q^-1 and mirrors."""
    q %= p
    candidates = {q, p - q}
    inverse = pow(q, -1, p)
    candidates.update({inverse, p - inverse})
    return p, min(candidates)


class _Tangle:
    """4-ended tangle under construction; corners are NW, NE, SW, SE."""

    def __init__(self, infinity: bool = False):
        if infinity:  # two vertical arcs
            self.conn: dict = {"NW": "SW", "SW": "NW", "NE": "SE", "SE": "NE"}
        else:  # two horizontal arcs
            self.conn = {"NW": "NE", "NE": "NW", "SW": "SE", "SE": "SW"}
        self.cross_over: list[int] = []  # over-diagonal parity per crossing

    def _connect(self, a, b) -> None:
        self.conn[a] = b
        self.conn[b] = a

    def _splice(self, corner: str, dart: int) -> None:
        far = self.conn.pop(corner)
        self._connect(far, dart)

    def _new_crossing(self, over_parity: int) -> int:
        self.cross_over.append(over_parity)
        return len(self.cross_over) - 1

    def twist_right(self, over_parity: int) -> None:
        """One crossing between the NE and SE strands.

        Positions: 0 left-top (old NE arc), 1 left-bottom (old SE arc),
        2 new SE, 3 new NE; counterclockwise.
        """
        k = self._new_crossing(over_parity)
        self._splice("NE", 4 * k + 0)
        self._splice("SE", 4 * k + 1)
        self._connect("NE", 4 * k + 3)
        self._connect("SE", 4 * k + 2)

    def twist_bottom(self, over_parity: int) -> None:
        """One crossing between the SW and SE strands.

        Positions: 0 up-left (old SW arc), 1 new SW, 2 new SE,
        3 up-right (old SE arc); counterclockwise.
        """
        k = self._new_crossing(over_parity)
        self._splice("SW", 4 * k + 0)
        self._splice("SE", 4 * k + 3)
        self._connect("SW", 4 * k + 1)
        self._connect("SE", 4 * k + 2)

    def numerator_closure(self) -> Diagram:
        """Join NW-NE and SW-SE; fails when the closure is not a knot."""
        for a, b in (("NW", "NE"), ("SW", "SE")):
            x = self.conn.pop(a)
            y = self.conn.pop(b)
            if x == b or y == a:
                raise DiagramError("closure produces a free unknotted component")
            self._connect(x, y)
        n = len(self.cross_over)
        if n == 0:
            raise DiagramError("zero-crossing tangle closure")
        m = DartMap(n)
        for k in range(n):
            m.alive[k] = True
            m.over[k] = self.cross_over[k]
        m.num_alive = n
        for dart, partner in self.conn.items():
            if isinstance(dart, str) or isinstance(partner, str):
                raise DiagramError("closure left open tangle ends")
            m.glue[dart] = partner
        # orient by tracing the strand; a second component means a link
        cur = 0
        steps = 0
        while True:
            m.orient[cur] = OUT
            head = int(m.glue[cur])
            m.orient[head] = IN
            steps += 1
            cur = head ^ 2
            if cur == 0:
                break
        if steps != 2 * n:
            raise DiagramError("closure is a link, not a knot")
        return m.to_diagram()


def rational_diagram(coeffs: list[int]) -> Diagram:
    """Alternating 4-plat diagram of the 2-bridge knot with twist vector
    ``coeffs``; raises DiagramError when the closure is a link.

    Twist groups alternate between the bottom and the right of the tangle,
    ending with a right group so the numerator closure realizes the
    continued fraction [ak; ..., a1].  A leading bottom group (even k)
    starts from the infinity tangle, otherwise from the zero tangle.
    """
    k = len(coeffs)
    t = _Tangle(infinity=(k % 2 == 0))
    for i, a in enumerate(coeffs):
        right = (k - 1 - i) % 2 == 0
        for _ in range(a):
            if right:
                t.twist_right(0)
            else:
                t.twist_bottom(0)
    return t.numerator_closure()
