"""Window symbol detection inside detected wall boxes."""
from __future__ import annotations

from dataclasses import dataclass

from . import lines
from .geometry import HORIZONTAL, BBox, Segment
from .raster import EdgeImage, crop
from .walls import Wall


@dataclass(frozen=True)
class WindowConfig:
    min_line_fraction: float = 0.75
    min_height_factor: float = 2.0
    max_height_fraction: float = 0.5
    corner_margin: int | None = None  # None: one ROI width from each end

    def validate(self) -> None:
        if not 0 < self.min_line_fraction <= 1:
            raise ValueError("min_line_fraction must be in (0, 1]")
        if self.min_height_factor <= 0 or self.max_height_fraction <= 0:
            raise ValueError("window height factors must be positive")


@dataclass
class Window:
    wall_id: int
    segment: Segment
    box: BBox


def _overlap(a_lo: int, a_hi: int, b_lo: int, b_hi: int) -> int:
    return max(0, min(a_hi, b_hi) - max(a_lo, b_lo))


def _candidates_along(cross: list[Segment], along: list[Segment], roi_lo: int,
                      roi_hi: int, wc: WindowConfig, vertical_wall: bool):
    """Yield candidate (lo, hi, span_lo, span_hi) boxes from cross-line pairs.

    ``cross`` are the lines crossing the wall (sorted along the wall axis),
    ``along`` the lines running with it. A candidate band is the gap
    between two consecutive cross lines; along-lines covering at least
    min_line_fraction of the band extend its cross-axis span.
    """
    for a, b in zip(cross, cross[1:]):
        if vertical_wall:
            lo = min(a.y1, a.y2)
            hi = max(b.y1, b.y2)
            span_lo = min(a.x1, a.x2, b.x1, b.x2)
            span_hi = max(a.x1, a.x2, b.x1, b.x2)
        else:
            lo = min(a.x1, a.x2)
            hi = max(b.x1, b.x2)
            span_lo = min(a.y1, a.y2, b.y1, b.y2)
            span_hi = max(a.y1, a.y2, b.y1, b.y2)
        height = hi - lo
        if height <= 0:
            continue
        for s in along:
            if vertical_wall:
                cover = _overlap(lo, hi, min(s.y1, s.y2), max(s.y1, s.y2))
            else:
                cover = _overlap(lo, hi, min(s.x1, s.x2), max(s.x1, s.x2))
            if cover >= wc.min_line_fraction * height:
                if vertical_wall:
                    span_lo = min(span_lo, s.x1, s.x2)
                    span_hi = max(span_hi, s.x1, s.x2)
                else:
                    span_lo = min(span_lo, s.y1, s.y2)
                    span_hi = max(span_hi, s.y1, s.y2)
        yield lo, hi, span_lo, span_hi


def detect_windows(img: EdgeImage, walls: list[Wall], hp: lines.HoughParams,
                   wc: WindowConfig = WindowConfig(),
                   axis_tol: float = 5.0) -> list[Window]:
    """Find window symbols in each wall's box.

    Per wall box (the ROI): lines are re-extracted with the probabilistic
    Hough transform restricted to the ROI and split by axis. Consecutive
    wall-crossing lines bound a candidate box which absorbs along-wall
    lines spanning most of it; the candidate is a window iff

        min_height_factor * ROI width <= box extent
                                       <= max_height_fraction * ROI length

    and the box stays ``corner_margin`` away from both ROI ends.
    """
    wc.validate()
    h, w = img.shape
    result: list[Window] = []
    for wall in walls:
        roi = wall.box.clamp(w, h)
        if roi is None or roi.width < 2 or roi.height < 2:
            continue
        segs = lines.probabilistic_hough(crop(img, roi), hp)
        segs = [Segment(s.x1 + roi.x_min, s.y1 + roi.y_min,
                        s.x2 + roi.x_min, s.y2 + roi.y_min) for s in segs]
        hsegs = lines.sort_top_down(lines.filter_horizontal(segs, axis_tol))
        vsegs = lines.sort_left_right(lines.filter_vertical(segs, axis_tol))
        vertical_wall = wall.orientation != HORIZONTAL
        if vertical_wall:
            cross, along = hsegs, vsegs
            roi_lo, roi_hi = roi.y_min, roi.y_max
            roi_width, roi_len = roi.x_max - roi.x_min, roi.y_max - roi.y_min
        else:
            cross, along = vsegs, hsegs
            roi_lo, roi_hi = roi.x_min, roi.x_max
            roi_width, roi_len = roi.y_max - roi.y_min, roi.x_max - roi.x_min
        corner = wc.corner_margin if wc.corner_margin is not None else roi_width
        taken: list[tuple[int, int]] = []
        for lo, hi, span_lo, span_hi in _candidates_along(
                cross, along, roi_lo, roi_hi, wc, vertical_wall):
            height = hi - lo
            if height < wc.min_height_factor * roi_width:
                continue
            if height > wc.max_height_fraction * roi_len:
                continue
            if lo < roi_lo + corner or hi > roi_hi - corner:
                continue  # windows cannot sit at the ROI corners
            if any(lo < t_hi and t_lo < hi for t_lo, t_hi in taken):
                continue
            taken.append((lo, hi))
            if vertical_wall:
                cx = wall.centerline.x1
                box = BBox(max(span_lo, roi.x_min), lo,
                           min(span_hi, roi.x_max), hi)
                seg = Segment(cx, lo, cx, hi)
            else:
                cy = wall.centerline.y1
                box = BBox(lo, max(span_lo, roi.y_min),
                           hi, min(span_hi, roi.y_max))
                seg = Segment(lo, cy, hi, cy)
            result.append(Window(wall.id, seg, box))
    return result
