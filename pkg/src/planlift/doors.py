"""Door symbol isolation, matching and wall alignment.

Residual symbols left after wall/window subtraction are segmented into
boxes and classified by combined histogram matching (chi-square and
Bhattacharyya, both under a threshold) and template matching (normalized
cross-correlation over a threshold); either route suffices.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import HORIZONTAL, BBox, Segment
from .raster import EdgeImage, GrayImage, erase_region, find_contours, load_pgm, redraw
from .walls import Wall

ASSETS_ENV = "PLANLIFT_ASSETS"


@dataclass
class Door:
    box: BBox
    segment: Segment
    aligned: bool
    attached_wall_ids: tuple[int, ...] = ()


@dataclass
class DoorMatcherConfig:
    sample_histograms: list[GrayImage]
    sample_templates: list[GrayImage]
    hist_threshold: float = 0.2
    template_threshold: float = 0.9

    def validate(self) -> None:
        if not 0 < self.hist_threshold <= 1 or not 0 < self.template_threshold <= 1:
            raise ValueError("matcher thresholds must be in (0, 1]")
        if not self.sample_histograms or not self.sample_templates:
            raise ValueError("need at least one sample and one template")


def default_assets_dir() -> Path:
    env = os.environ.get(ASSETS_ENV)
    if env:
        return Path(env)
    return Path(__file__).parent / "assets" / "doors"


def load_door_assets(directory: str | Path | None = None) -> list[GrayImage]:
    directory = Path(directory) if directory else default_assets_dir()
    paths = sorted(directory.glob("*.pgm"))
    if not paths:
        raise ValueError(f"no door sample images in {directory}")
    return [load_pgm(p) for p in paths]


def matcher_from_assets(directory: str | Path | None = None,
                        hist_threshold: float = 0.2,
                        template_threshold: float = 0.9) -> DoorMatcherConfig:
    images = load_door_assets(directory)
    return DoorMatcherConfig(images, list(images), hist_threshold, template_threshold)


def gray_histogram(img: GrayImage) -> np.ndarray:
    """256-bin luminance histogram normalized to unit sum."""
    hist = np.bincount(np.asarray(img, dtype=np.uint8).reshape(-1),
                       minlength=256).astype(np.float64)
    return hist / hist.sum()


def chi_square(h1: np.ndarray, h2: np.ndarray) -> float:
    """Sum over bins with h1 > 0 of (h1 - h2)^2 / h1. Not symmetric."""
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    mask = h1 > 0
    d = h1[mask] - h2[mask]
    return float(np.sum(d * d / h1[mask]))


def bhattacharyya(h1: np.ndarray, h2: np.ndarray) -> float:
    """sqrt(1 - sum(sqrt(h1 * h2))); 0 for identical unit histograms."""
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    coeff = float(np.sum(np.sqrt(h1 * h2)))
    return math.sqrt(max(0.0, 1.0 - coeff))


def resize_nearest(img: GrayImage, height: int, width: int) -> GrayImage:
    src_h, src_w = img.shape
    ys = np.minimum((np.arange(height) * src_h) // height, src_h - 1)
    xs = np.minimum((np.arange(width) * src_w) // width, src_w - 1)
    return img[np.ix_(ys, xs)]


def template_match_ncc(patch: GrayImage, template: GrayImage) -> float:
    """Mean-subtracted normalized cross-correlation in [-1, 1].

    The template is nearest-neighbor resized to the patch size first.
    Raises ValueError for zero-variance inputs.
    """
    t = resize_nearest(template, patch.shape[0], patch.shape[1]).astype(np.float64)
    p = np.asarray(patch, dtype=np.float64)
    t -= t.mean()
    p -= p.mean()
    denom = math.sqrt(float(np.sum(t * t)) * float(np.sum(p * p)))
    if denom == 0.0:
        raise ValueError("degenerate match input")
    return float(np.sum(t * p) / denom)


def classify_door(patch: GrayImage, cfg: DoorMatcherConfig) -> bool:
    """True when the patch matches some histogram sample or some template."""
    cfg.validate()
    hp = gray_histogram(patch)
    for sample in cfg.sample_histograms:
        hs = gray_histogram(sample)
        if (chi_square(hp, hs) < cfg.hist_threshold
                and bhattacharyya(hp, hs) < cfg.hist_threshold):
            return True
    for template in cfg.sample_templates:
        try:
            score = template_match_ncc(patch, template)
        except ValueError:
            continue
        if score > cfg.template_threshold:
            return True
    return False


def isolate_residual(img: EdgeImage, wall_boxes: list[BBox],
                     window_boxes: list[BBox]) -> EdgeImage:
    """Erase every wall and window box, leaving only residual symbols."""
    out = img
    for box in list(wall_boxes) + list(window_boxes):
        out = erase_region(out, box)
    return out


def segment_objects(img: EdgeImage, min_area: int = 25) -> list[BBox]:
    """Boxes of residual symbols after the contour / redraw / contour pass.

    Redrawing merges fragments of one symbol; boxes smaller than
    ``min_area`` square pixels are discarded as noise.
    """
    contours = find_contours(img)
    if not contours:
        return []
    merged = redraw(img, contours)
    return [box for _, box in find_contours(merged) if box.area >= min_area]


def _axis_coord(wall: Wall) -> int:
    return wall.centerline.y1 if wall.orientation == HORIZONTAL else wall.centerline.x1


def align_door(door_box: BBox, walls: list[Wall], avg_thickness: int) -> Door:
    """Snap a door to the pair of co-axial walls ending at its box.

    The box grows by the average wall thickness on each side; wall
    centerline endpoints inside the grown box are candidates. When two
    candidates belong to distinct co-axial walls, the door segment spans
    the gap between the nearest such pair; otherwise the door keeps its
    box midline and is flagged unaligned.
    """
    grown = door_box.expand(avg_thickness)
    hits: list[tuple[Wall, tuple[int, int]]] = []
    for wall in walls:
        for (px, py) in wall.centerline.endpoints():
            if grown.contains_point(px, py):
                hits.append((wall, (px, py)))
    best: tuple[float, Wall, Wall, tuple[int, int], tuple[int, int]] | None = None
    for i in range(len(hits)):
        for j in range(i + 1, len(hits)):
            wa, pa = hits[i]
            wb, pb = hits[j]
            if wa.id == wb.id or wa.orientation != wb.orientation:
                continue
            if abs(_axis_coord(wa) - _axis_coord(wb)) > avg_thickness:
                continue
            dist = math.hypot(pa[0] - pb[0], pa[1] - pb[1])
            key = (dist, min(wa.id, wb.id), max(wa.id, wb.id))
            if best is None or key < (best[0], min(best[1].id, best[2].id),
                                      max(best[1].id, best[2].id)):
                best = (dist, wa, wb, pa, pb)
    if best is not None:
        _, wa, wb, pa, pb = best
        if (pa[1], pa[0]) > (pb[1], pb[0]):
            pa, pb = pb, pa
        seg = Segment(pa[0], pa[1], pb[0], pb[1])
        ids = tuple(sorted((wa.id, wb.id)))
        return Door(door_box, seg, True, ids)
    # unaligned fallback: midline along the box's long axis
    cx = (door_box.x_min + door_box.x_max + 1) // 2
    cy = (door_box.y_min + door_box.y_max + 1) // 2
    if door_box.height > door_box.width:
        seg = Segment(cx, door_box.y_min, cx, door_box.y_max)
    else:
        seg = Segment(door_box.x_min, cy, door_box.x_max, cy)
    center = door_box.center
    hits.sort(key=lambda h: (math.hypot(h[1][0] - center[0], h[1][1] - center[1]),
                             h[0].id))
    attached = []
    for wall, _ in hits:
        if wall.id not in attached:
            attached.append(wall.id)
        if len(attached) == 2:
            break
    return Door(door_box, seg, False, tuple(attached))
