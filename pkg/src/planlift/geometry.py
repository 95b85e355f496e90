"""Integer pixel geometry shared by every recognition stage.

Coordinates follow raster convention: x grows right, y grows down.
Boxes are inclusive on all four edges, so a box covering a single
pixel has x_min == x_max and y_min == y_max.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


@dataclass(frozen=True)
class BBox:
    """Axis-aligned rectangle with inclusive integer pixel corners."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError(f"degenerate box {self}")

    @property
    def width(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def height(self) -> int:
        return self.y_max - self.y_min + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)

    def expand(self, margin: int) -> "BBox":
        return BBox(self.x_min - margin, self.y_min - margin,
                    self.x_max + margin, self.y_max + margin)

    def clamp(self, width: int, height: int) -> "BBox | None":
        """Clip to image bounds; None when nothing remains."""
        x0, y0 = max(self.x_min, 0), max(self.y_min, 0)
        x1, y1 = min(self.x_max, width - 1), min(self.y_max, height - 1)
        if x0 > x1 or y0 > y1:
            return None
        return BBox(x0, y0, x1, y1)

    def union(self, other: "BBox") -> "BBox":
        return BBox(min(self.x_min, other.x_min), min(self.y_min, other.y_min),
                    max(self.x_max, other.x_max), max(self.y_max, other.y_max))

    def intersects(self, other: "BBox") -> bool:
        return (self.x_min <= other.x_max and other.x_min <= self.x_max
                and self.y_min <= other.y_max and other.y_min <= self.y_max)

    def contains_box(self, other: "BBox") -> bool:
        return (self.x_min <= other.x_min and other.x_max <= self.x_max
                and self.y_min <= other.y_min and other.y_max <= self.y_max)

    def contains_point(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class Segment:
    """Line segment with integer pixel endpoints."""

    x1: int
    y1: int
    x2: int
    y2: int

    @property
    def length(self) -> float:
        return math.hypot(self.x2 - self.x1, self.y2 - self.y1)

    @property
    def midpoint(self) -> tuple[float, float]:
        return ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)

    @property
    def angle_deg(self) -> float:
        """Acute angle to the x-axis, in [0, 90]."""
        a = math.degrees(math.atan2(abs(self.y2 - self.y1), abs(self.x2 - self.x1)))
        return a

    def bbox(self) -> BBox:
        return BBox(min(self.x1, self.x2), min(self.y1, self.y2),
                    max(self.x1, self.x2), max(self.y1, self.y2))

    def endpoints(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.x1, self.y1), (self.x2, self.y2)
