"""Wall recovery: segment clustering, box merging, junction alignment."""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .geometry import HORIZONTAL, VERTICAL, BBox, Segment

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClusterConfig:
    margin: int = 50

    def validate(self) -> None:
        if self.margin <= 0:
            raise ValueError("cluster margin must be positive")


@dataclass
class Wall:
    id: int
    orientation: str
    centerline: Segment
    thickness: int
    box: BBox
    left_texture: str = " "
    right_texture: str = " "


def cluster_lines(segs: list[Segment], cfg: ClusterConfig = ClusterConfig()) -> list[BBox]:
    """Greedy region-growing of same-orientation segments into boxes.

    Seeds a box with the first remaining segment, then sweeps the rest,
    absorbing any segment within ``margin`` pixels of the current box
    (its bounding box meets the box enlarged by margin on each side) and
    growing the box to the union. Sweeps repeat until a fixed point, so
    the result does not depend on sweep order; callers pre-sort
    (sort_top_down / sort_left_right) to fix the seeding order.
    """
    cfg.validate()
    remaining = list(segs)
    boxes: list[BBox] = []
    while remaining:
        box = remaining[0].bbox()
        absorbed = [True] + [False] * (len(remaining) - 1)
        changed = True
        while changed:
            changed = False
            grown = box.expand(cfg.margin)
            for i, seg in enumerate(remaining):
                if not absorbed[i] and grown.intersects(seg.bbox()):
                    box = box.union(seg.bbox())
                    grown = box.expand(cfg.margin)
                    absorbed[i] = True
                    changed = True
        remaining = [s for i, s in enumerate(remaining) if not absorbed[i]]
        boxes.append(box)
    return boxes


def merge_overlapping(boxes: list[BBox]) -> list[BBox]:
    """Union each overlap-connected group of boxes into one box.

    Unions can create new overlaps, so merging repeats until the result
    is pairwise disjoint. Output ordered by (y_min, x_min).
    """
    out = list(boxes)
    changed = True
    while changed:
        changed = False
        merged: list[BBox] = []
        for box in out:
            hit = None
            for i, other in enumerate(merged):
                if box.intersects(other):
                    hit = i
                    break
            if hit is None:
                merged.append(box)
            else:
                merged[hit] = merged[hit].union(box)
                changed = True
        out = merged
    out.sort(key=lambda b: (b.y_min, b.x_min, b.y_max, b.x_max))
    return out


def _interval_gap(a_min: int, a_max: int, b_min: int, b_max: int) -> int:
    if a_max < b_min:
        return b_min - a_max
    if b_max < a_min:
        return a_min - b_max
    return 0


def align_intersections(hboxes: list[BBox], vboxes: list[BBox],
                        snap: int = 25) -> tuple[list[BBox], list[BBox]]:
    """Close near-miss corners between horizontal and vertical wall boxes.

    A horizontal box whose x-end lies within ``snap`` of a vertical box
    (with y-ranges also within snap) has that end extended or trimmed to
    the vertical box's far x-edge; vertical y-ends are adjusted against
    horizontal boxes symmetrically. Ends away from any partner are left
    alone, so boxes crossing through a partner's middle are unchanged.
    """
    if snap < 0:
        raise ValueError("snap must be >= 0")

    def adjust(lo: int, hi: int, spans: list[tuple[int, int]]):
        # spans: partner extents along this box's axis, already filtered
        # for cross-axis proximity; an end within snap of a span gets set
        # to that partner's far edge
        lo_edges = [s[0] for s in spans if _interval_gap(lo, lo, s[0], s[1]) <= snap]
        hi_edges = [s[1] for s in spans if _interval_gap(hi, hi, s[0], s[1]) <= snap]
        new_lo = min(lo_edges) if lo_edges else lo
        new_hi = max(hi_edges) if hi_edges else hi
        if new_lo > new_hi:
            return lo, hi
        return new_lo, new_hi

    new_h = []
    for hb in hboxes:
        spans = [(vb.x_min, vb.x_max) for vb in vboxes
                 if _interval_gap(hb.y_min, hb.y_max, vb.y_min, vb.y_max) <= snap]
        x_min, x_max = adjust(hb.x_min, hb.x_max, spans)
        new_h.append(BBox(x_min, hb.y_min, x_max, hb.y_max))
    new_v = []
    for vb in vboxes:
        spans = [(hb.y_min, hb.y_max) for hb in hboxes
                 if _interval_gap(vb.x_min, vb.x_max, hb.x_min, hb.x_max) <= snap]
        y_min, y_max = adjust(vb.y_min, vb.y_max, spans)
        new_v.append(BBox(vb.x_min, y_min, vb.x_max, y_max))
    return new_h, new_v


def _mid(a: int, b: int) -> int:
    return (a + b + 1) // 2  # round half up


def walls_from_boxes(hboxes: list[BBox], vboxes: list[BBox]) -> list[Wall]:
    """Turn wall boxes into centerline walls with ids in (y, x) order.

    A box whose long dimension is under twice its short dimension is a
    blob, not a wall; it is skipped with a warning.
    """
    candidates: list[tuple[BBox, str]] = []
    for box in hboxes:
        if box.width < 2 * box.height:
            log.warning("skipping non-wall-shaped horizontal box %s", box)
            continue
        candidates.append((box, HORIZONTAL))
    for box in vboxes:
        if box.height < 2 * box.width:
            log.warning("skipping non-wall-shaped vertical box %s", box)
            continue
        candidates.append((box, VERTICAL))
    candidates.sort(key=lambda c: (c[0].y_min, c[0].x_min, c[0].y_max,
                                   c[0].x_max, c[1]))
    walls = []
    for i, (box, orientation) in enumerate(candidates):
        if orientation == HORIZONTAL:
            cy = _mid(box.y_min, box.y_max)
            centerline = Segment(box.x_min, cy, box.x_max, cy)
            thickness = box.height
        else:
            cx = _mid(box.x_min, box.x_max)
            centerline = Segment(cx, box.y_min, cx, box.y_max)
            thickness = box.width
        walls.append(Wall(i, orientation, centerline, thickness, box))
    return walls


def average_wall_thickness(walls: list[Wall]) -> int:
    if not walls:
        raise ValueError("no walls detected")
    mean = sum(w.thickness for w in walls) / len(walls)
    return max(1, int(mean + 0.5))
