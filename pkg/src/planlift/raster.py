"""Image loading and the preprocessing stage.

Image conventions used across the package:

* ``GrayImage``   -- 2-D uint8 array, luminance 0..255, indexed [y, x]
* ``BinaryImage`` -- 2-D bool array, True = foreground ink
* ``EdgeImage``   -- 2-D bool array, True = edge pixel
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .geometry import BBox

GrayImage = np.ndarray
BinaryImage = np.ndarray
EdgeImage = np.ndarray

Contour = tuple[np.ndarray, BBox]

_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class ThresholdConfig:
    """Fixed binarization threshold, or Otsu's method when ``otsu`` is set."""

    value: int = 128
    otsu: bool = False


def load_pgm(path: str | Path) -> GrayImage:
    """Read a binary (P5) PGM file with maxval <= 255."""
    raw = Path(path).read_bytes()
    if not raw.startswith(b"P5"):
        raise ValueError(f"unsupported format (not a P5 PGM): {path}")
    # header = magic, width, height, maxval as whitespace separated tokens,
    # with '#' comments allowed between them
    tokens: list[int] = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(raw) and raw[pos:pos + 1].isspace():
            pos += 1
        if pos < len(raw) and raw[pos:pos + 1] == b"#":
            while pos < len(raw) and raw[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"unreadable file (truncated PGM header): {path}")
        tokens.append(int(raw[start:pos]))
    pos += 1  # single whitespace after maxval
    width, height, maxval = tokens
    if width < 1 or height < 1:
        raise ValueError(f"zero-dimension image: {path}")
    if maxval > 255:
        raise ValueError(f"unsupported format (16-bit PGM): {path}")
    data = np.frombuffer(raw, dtype=np.uint8, offset=pos)
    if data.size < width * height:
        raise ValueError(f"unreadable file (truncated PGM data): {path}")
    return data[:width * height].reshape(height, width).copy()


def save_pgm(path: str | Path, img: GrayImage) -> None:
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def _load_png(path: str | Path) -> GrayImage:
    from PIL import Image

    try:
        with Image.open(path) as im:
            im.load()
            if im.mode in ("L", "I;16", "I"):
                arr = np.asarray(im.convert("L"), dtype=np.uint8)
            else:
                rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
                arr = np.rint(rgb @ _LUMA).astype(np.uint8)
    except Exception as exc:
        raise ValueError(f"unreadable file: {path}") from exc
    if arr.size == 0:
        raise ValueError(f"zero-dimension image: {path}")
    return arr


def load_gray(path: str | Path) -> GrayImage:
    """Load a PNG or binary PGM raster as a luminance image.

    Color inputs are converted with 0.299 R + 0.587 G + 0.114 B, rounded
    to the nearest integer.
    """
    path = Path(path)
    if not path.is_file():
        raise ValueError(f"unreadable file: {path}")
    head = path.open("rb").read(8)
    if head.startswith(b"P5"):
        return load_pgm(path)
    if head.startswith(b"\x89PNG"):
        return _load_png(path)
    raise ValueError(f"unsupported format: {path}")


def otsu_threshold(img: GrayImage) -> int:
    """Threshold maximizing between-class variance of the gray histogram."""
    hist = np.bincount(img.reshape(-1), minlength=256).astype(np.float64)
    total = hist.sum()
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)
    w1 = total - w0
    s0 = np.cumsum(hist * levels)
    mu_total = s0[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = s0 / w0
        mu1 = (mu_total - s0) / w1
        between = w0 * w1 * (mu0 - mu1) ** 2
    between[~np.isfinite(between)] = -1.0
    # binarize() uses "< t", so the split after bin k maps to threshold k+1
    return int(np.argmax(between)) + 1


def binarize(img: GrayImage, cfg: ThresholdConfig = ThresholdConfig()) -> BinaryImage:
    """Foreground (ink) wherever luminance < threshold."""
    t = otsu_threshold(img) if cfg.otsu else cfg.value
    return img < t


def binary_to_gray(binary: BinaryImage) -> GrayImage:
    """Render foreground as black ink on white paper."""
    return np.where(binary, 0, 255).astype(np.uint8)


def canny(img: GrayImage, low: float = 50.0, high: float = 150.0,
          sigma: float = 1.4) -> EdgeImage:
    """Gaussian blur, 3x3 Sobel, 4-bin non-maximum suppression, hysteresis."""
    if not 0 <= low <= high:
        raise ValueError(f"invalid thresholds: low={low} high={high}")
    ksize = 2 * max(1, int(round(3.0 * sigma))) + 1
    if min(img.shape) < ksize:
        raise ValueError(f"image smaller than the blur kernel ({ksize}x{ksize})")
    blurred = kernels.gaussian_blur(img.astype(np.float64), sigma)
    gx, gy = kernels.sobel_gradients(blurred)
    mag = np.sqrt(gx * gx + gy * gy)
    keep = kernels.nonmax_suppress(mag, gx, gy)
    return kernels.hysteresis(mag, keep, low, high)


def erase_region(img: EdgeImage, box: BBox) -> EdgeImage:
    """Copy of img with all pixels inside box (clamped) set to non-edge."""
    out = img.copy()
    h, w = img.shape
    clipped = box.clamp(w, h)
    if clipped is not None:
        out[clipped.y_min:clipped.y_max + 1, clipped.x_min:clipped.x_max + 1] = False
    return out


def crop(img: np.ndarray, box: BBox) -> np.ndarray:
    h, w = img.shape
    clipped = box.clamp(w, h)
    if clipped is None:
        raise ValueError(f"box {box} outside image {w}x{h}")
    return img[clipped.y_min:clipped.y_max + 1, clipped.x_min:clipped.x_max + 1]


def find_contours(img: EdgeImage) -> list[Contour]:
    """Outer boundary chain and tight box of every 8-connected component.

    Returned in (y_min, x_min) box order; chains are (n, 2) arrays of
    (x, y) pixels starting at the component's topmost-leftmost pixel.
    """
    labels, count = kernels.label_components(img)
    if count == 0:
        return []
    boxes = kernels.component_boxes(labels, count)
    firsts = kernels.first_pixels(labels, count)
    sizes = np.bincount(labels.reshape(-1), minlength=count + 1)
    result = []
    for i in range(count):
        chain = kernels.trace_boundary(labels, i + 1, int(firsts[i, 0]),
                                       int(firsts[i, 1]), int(sizes[i + 1]))
        box = BBox(int(boxes[i, 0]), int(boxes[i, 1]),
                   int(boxes[i, 2]), int(boxes[i, 3]))
        result.append((chain, box))
    result.sort(key=lambda c: (c[1].y_min, c[1].x_min, c[1].y_max, c[1].x_max))
    return result


def redraw(img: EdgeImage, contours: list[np.ndarray] | list[Contour]) -> EdgeImage:
    """Blank image with each contour painted as its filled closed polygon.

    Open fragments fill to their bow region, so pieces of one broken
    symbol overlap and merge into a single component on the next
    find_contours pass.
    """
    out = np.zeros_like(img, dtype=np.bool_)
    for item in contours:
        chain = item[0] if isinstance(item, tuple) else item
        if len(chain):
            kernels.fill_polygon(np.asarray(chain, dtype=np.int64), out)
    return out
