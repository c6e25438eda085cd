"""Selection and region shapes: rectangles, polygons, half-planes.

Containment is boundary-inclusive everywhere, matching the brushing
contract that points on a shape's edge count as selected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateShape

__all__ = ["Rect", "Polygon", "HalfPlane"]

_EDGE_EPS = 1e-9


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle; zero width or height is allowed (a segment)."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise DegenerateShape("rectangle has x1 < x0 or y1 < y0")

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass(frozen=True)
class HalfPlane:
    """Points (x, y) with ``a*x + b*y <= c``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise DegenerateShape("half-plane normal must be nonzero")

    def contains(self, x: float, y: float) -> bool:
        return self.a * x + self.b * y <= self.c


def _on_segment(px, py, ax, ay, bx, by) -> bool:
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if abs(cross) > _EDGE_EPS * max(1.0, abs(bx - ax), abs(by - ay)):
        return False
    return (
        min(ax, bx) - _EDGE_EPS <= px <= max(ax, bx) + _EDGE_EPS
        and min(ay, by) - _EDGE_EPS <= py <= max(ay, by) + _EDGE_EPS
    )


@dataclass(frozen=True)
class Polygon:
    """Simple polygon given by its vertices; even-odd interior rule."""

    vertices: tuple

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", pts)
        if len(pts) < 3:
            raise DegenerateShape(f"polygon needs >= 3 vertices, got {len(pts)}")

    def contains(self, x: float, y: float) -> bool:
        pts = self.vertices
        n = len(pts)
        inside = False
        for i in range(n):
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % n]
            if _on_segment(x, y, ax, ay, bx, by):
                return True
            if (ay > y) != (by > y):
                t = (y - ay) / (by - ay)
                xi = ax + t * (bx - ax)
                if x < xi:
                    inside = not inside
        return inside
