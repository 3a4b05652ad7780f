"""Newton polygons: sorted rational slope multisets with integral break points."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

Q = Fraction


class PolygonError(ValueError):
    pass


class NewtonPolygon:
    """A multiset of rational slopes with positive integer multiplicities.

    Stored as a strictly increasing list of (slope, multiplicity) pairs.
    Every vertex of the associated lower-convex graph must be a lattice
    point: at each slope change the running sum of slope*multiplicity is
    an integer.
    """

    __slots__ = ("pairs",)

    def __init__(self, pairs: Iterable[Tuple[Q, int]], check: bool = True):
        norm: List[Tuple[Q, int]] = []
        for s, mult in sorted((Q(s), int(m)) for s, m in pairs):
            if mult <= 0:
                raise PolygonError(f"multiplicity {mult} for slope {s} is not positive")
            if norm and norm[-1][0] == s:
                norm[-1] = (s, norm[-1][1] + mult)
            else:
                norm.append((s, mult))
        self.pairs: Tuple[Tuple[Q, int], ...] = tuple(norm)
        if check:
            self._check_break_points()

    @classmethod
    def from_slopes(cls, slopes: Iterable[Q]) -> "NewtonPolygon":
        pairs: dict = {}
        for s in slopes:
            s = Q(s)
            pairs[s] = pairs.get(s, 0) + 1
        return cls(pairs.items())

    def _check_break_points(self) -> None:
        run = Q(0)
        for s, mult in self.pairs:
            run += s * mult
            if run.denominator != 1:
                raise PolygonError(f"non-integral break point after slope {s}: {run}")

    # -- basic views ---------------------------------------------------

    @property
    def length(self) -> int:
        return sum(m for _, m in self.pairs)

    def multiplicity(self, slope) -> int:
        s = Q(slope)
        for t, m in self.pairs:
            if t == s:
                return m
        return 0

    def slopes(self) -> List[Q]:
        out: List[Q] = []
        for s, m in self.pairs:
            out.extend([s] * m)
        return out

    def vertices(self) -> List[Tuple[int, Q]]:
        """Lattice vertices (x, y) of the polygon, starting at (0, 0)."""
        verts = [(0, Q(0))]
        x, y = 0, Q(0)
        for s, m in self.pairs:
            x += m
            y += s * m
            verts.append((x, y))
        return verts

    def value_at(self, x) -> Q:
        """Height of the polygon graph at abscissa ``x`` in [0, length]."""
        x = Q(x)
        if x < 0 or x > self.length:
            raise PolygonError(f"abscissa {x} outside [0, {self.length}]")
        pos, y = Q(0), Q(0)
        for s, m in self.pairs:
            if x <= pos + m:
                return y + s * (x - pos)
            pos += m
            y += s * m
        return y

    # -- comparisons ---------------------------------------------------

    def same_endpoints(self, other: "NewtonPolygon") -> bool:
        return (
            self.length == other.length
            and self.value_at(self.length) == other.value_at(other.length)
        )

    def lies_on_or_above(self, other: "NewtonPolygon") -> bool:
        """Pointwise self >= other on the common range (lengths must agree)."""
        if self.length != other.length:
            raise PolygonError("polygons of different lengths are not comparable")
        xs = {x for x, _ in self.vertices()} | {x for x, _ in other.vertices()}
        return all(self.value_at(x) >= other.value_at(x) for x in xs)

    def scale(self, factor) -> "NewtonPolygon":
        f = Q(factor)
        return NewtonPolygon([(s * f, m) for s, m in self.pairs], check=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, NewtonPolygon) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __repr__(self) -> str:
        body = ", ".join(f"{s}:{m}" for s, m in self.pairs)
        return f"NewtonPolygon({body})"

    # -- serialization / rendering --------------------------------------

    def to_json(self) -> list:
        return [[str(s), m] for s, m in self.pairs]

    @classmethod
    def from_json(cls, data: Sequence) -> "NewtonPolygon":
        return cls([(Q(s), int(m)) for s, m in data])

    def ascii(self, width: int = 60) -> str:
        """Render the lower-convex graph, y scaled to integers by the slope lcm."""
        verts = self.vertices()
        denom = 1
        for _, y in verts:
            denom = denom * y.denominator // __import__("math").gcd(denom, y.denominator)
        pts = [(x, int(y * denom)) for x, y in verts]
        ymin = min(y for _, y in pts)
        ymax = max(y for _, y in pts)
        rows = []
        for level in range(ymax, ymin - 1, -1):
            row = []
            for x, y in pts:
                row.append("*" if y == level else " ")
            label = f"{Q(level, denom)!s:>8} |"
            rows.append(label + "  ".join(row))
        axis = " " * 9 + "+" + "---" * len(pts)
        xlab = " " * 10 + "".join(f"{x:<3d}" for x, _ in pts)
        return "\n".join(rows + [axis, xlab])
