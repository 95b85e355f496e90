"""Line segment extraction and axis filtering."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import Segment
from .raster import EdgeImage


@dataclass(frozen=True)
class HoughParams:
    rho_step: float = 1.0
    theta_step: float = math.pi / 180.0
    vote_threshold: int = 30
    min_line_length: float = 20.0
    max_line_gap: int = 5
    seed: int = 0

    def validate(self) -> None:
        if self.rho_step <= 0 or self.theta_step <= 0:
            raise ValueError("rho_step and theta_step must be positive")
        if self.vote_threshold <= 0 or self.min_line_length <= 0 or self.max_line_gap <= 0:
            raise ValueError("hough counts and lengths must be positive")


def probabilistic_hough(img: EdgeImage, p: HoughParams = HoughParams()) -> list[Segment]:
    """Progressive probabilistic Hough transform over an edge image.

    Edge pixels are visited in a seeded random order and vote into a
    (rho, theta) accumulator; once a cell reaches ``vote_threshold`` the
    supporting line is walked in both directions allowing gaps up to
    ``max_line_gap``, its corridor pixels are consumed (and un-voted),
    and segments at least ``min_line_length`` long are emitted. Output
    is deterministic for a fixed seed.
    """
    p.validate()
    h, w = img.shape
    n_pix = int(np.count_nonzero(img))
    if n_pix == 0:
        return []
    n_theta = max(1, int(round(math.pi / p.theta_step)))
    thetas = np.arange(n_theta) * p.theta_step
    cos_t = np.cos(thetas)
    sin_t = np.sin(thetas)
    max_rho = math.hypot(w - 1, h - 1)
    half = int(math.ceil(max_rho / p.rho_step)) + 1
    n_rho = 2 * half + 1
    order = np.random.default_rng(p.seed).permutation(n_pix)
    raw = kernels.hough_segments(img, order, cos_t, sin_t, p.rho_step, half,
                                 n_rho, p.vote_threshold, p.min_line_length,
                                 p.max_line_gap)
    return [Segment(int(x1), int(y1), int(x2), int(y2)) for x1, y1, x2, y2 in raw]


def filter_horizontal(segs: list[Segment], tol: float = 5.0) -> list[Segment]:
    """Segments within tol degrees of the x-axis, endpoints x-ordered."""
    out = []
    for s in segs:
        if s.angle_deg <= tol:
            if s.x1 > s.x2:
                s = Segment(s.x2, s.y2, s.x1, s.y1)
            out.append(s)
    return out


def filter_vertical(segs: list[Segment], tol: float = 5.0) -> list[Segment]:
    """Segments within tol degrees of the y-axis, endpoints y-ordered."""
    out = []
    for s in segs:
        if s.angle_deg >= 90.0 - tol:
            if s.y1 > s.y2:
                s = Segment(s.x2, s.y2, s.x1, s.y1)
            out.append(s)
    return out


def sort_top_down(segs: list[Segment]) -> list[Segment]:
    return sorted(segs, key=lambda s: (s.midpoint[1], s.midpoint[0], -s.length))


def sort_left_right(segs: list[Segment]) -> list[Segment]:
    return sorted(segs, key=lambda s: (s.midpoint[0], s.midpoint[1], -s.length))
