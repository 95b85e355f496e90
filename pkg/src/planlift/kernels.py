"""Hot per-pixel kernels with two interchangeable backends.

The default backend compiles the loop kernels with numba's @njit. Setting
the environment variable PLANLIFT_NO_NUMBA=1 (before import) selects the
pure-numpy fallback path instead; results are the same, only slower.
``benchmarks/bench_kernels.py`` compares the two.

All kernels are deterministic: no threading, no unordered reductions, and
randomness never enters below this layer (callers pass pre-shuffled pixel
orders).
"""
from __future__ import annotations

import math
import os

import numpy as np

_flag = os.environ.get("PLANLIFT_NO_NUMBA", "").strip().lower()
NUMBA_ENABLED = _flag in ("", "0", "false", "no")
if NUMBA_ENABLED:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        NUMBA_ENABLED = False

if NUMBA_ENABLED:
    def _jit(fn):
        return _njit(cache=True)(fn)
else:
    def _jit(fn):
        return fn

BACKEND = "numba" if NUMBA_ENABLED else "numpy"

# Moore neighbourhood, clockwise on screen (y grows down), starting west.
_DX8 = np.array([-1, -1, 0, 1, 1, 1, 0, -1], dtype=np.int64)
_DY8 = np.array([0, -1, -1, -1, 0, 1, 1, 1], dtype=np.int64)

_TAN22 = 0.41421356237309503  # tan(22.5 deg)
_TAN67 = 2.414213562373095    # tan(67.5 deg)


def gaussian_taps(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian kernel with radius round(3*sigma)."""
    radius = max(1, int(round(3.0 * sigma)))
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-0.5 * (xs / sigma) ** 2)
    return taps / taps.sum()


def _gaussian_blur_loops(img, taps):
    h, w = img.shape
    r = taps.shape[0] // 2
    tmp = np.empty((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for k in range(taps.shape[0]):
                xx = x + k - r
                if xx < 0:
                    xx = 0
                elif xx >= w:
                    xx = w - 1
                acc += taps[k] * img[y, xx]
            tmp[y, x] = acc
    out = np.empty((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for k in range(taps.shape[0]):
                yy = y + k - r
                if yy < 0:
                    yy = 0
                elif yy >= h:
                    yy = h - 1
                acc += taps[k] * tmp[yy, x]
            out[y, x] = acc
    return out


def _gaussian_blur_numpy(img, taps):
    h, w = img.shape
    r = taps.shape[0] // 2
    padded = np.pad(img, ((0, 0), (r, r)), mode="edge")
    tmp = np.zeros((h, w), np.float64)
    for k in range(taps.shape[0]):
        tmp += taps[k] * padded[:, k:k + w]
    padded = np.pad(tmp, ((r, r), (0, 0)), mode="edge")
    out = np.zeros((h, w), np.float64)
    for k in range(taps.shape[0]):
        out += taps[k] * padded[k:k + h, :]
    return out


def _sobel_loops(img):
    h, w = img.shape
    gx = np.zeros((h, w), np.float64)
    gy = np.zeros((h, w), np.float64)
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            a = img[y - 1, x - 1]
            b = img[y - 1, x]
            c = img[y - 1, x + 1]
            d = img[y, x - 1]
            e = img[y, x + 1]
            f = img[y + 1, x - 1]
            g = img[y + 1, x]
            i = img[y + 1, x + 1]
            gx[y, x] = (c - a) + 2.0 * (e - d) + (i - f)
            gy[y, x] = (f - a) + 2.0 * (g - b) + (i - c)
    return gx, gy


def _sobel_numpy(img):
    h, w = img.shape
    gx = np.zeros((h, w), np.float64)
    gy = np.zeros((h, w), np.float64)
    a = img[:-2, :-2]
    b = img[:-2, 1:-1]
    c = img[:-2, 2:]
    d = img[1:-1, :-2]
    e = img[1:-1, 2:]
    f = img[2:, :-2]
    g = img[2:, 1:-1]
    i = img[2:, 2:]
    gx[1:-1, 1:-1] = (c - a) + 2.0 * (e - d) + (i - f)
    gy[1:-1, 1:-1] = (f - a) + 2.0 * (g - b) + (i - c)
    return gx, gy


def _nms_loops(mag, gx, gy):
    h, w = mag.shape
    keep = np.zeros((h, w), np.bool_)
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            m = mag[y, x]
            if m <= 0.0:
                continue
            ax = abs(gx[y, x])
            ay = abs(gy[y, x])
            if ay <= _TAN22 * ax:
                p = mag[y, x + 1]
                q = mag[y, x - 1]
            elif ay >= _TAN67 * ax:
                p = mag[y + 1, x]
                q = mag[y - 1, x]
            elif gx[y, x] * gy[y, x] > 0.0:
                p = mag[y + 1, x + 1]
                q = mag[y - 1, x - 1]
            else:
                p = mag[y + 1, x - 1]
                q = mag[y - 1, x + 1]
            if m >= p and m >= q:
                keep[y, x] = True
    return keep


def _nms_numpy(mag, gx, gy):
    h, w = mag.shape
    keep = np.zeros((h, w), np.bool_)
    m = mag[1:-1, 1:-1]
    ax = np.abs(gx[1:-1, 1:-1])
    ay = np.abs(gy[1:-1, 1:-1])
    b0 = ay <= _TAN22 * ax
    b2 = ~b0 & (ay >= _TAN67 * ax)
    diag = ~b0 & ~b2
    b1 = diag & (gx[1:-1, 1:-1] * gy[1:-1, 1:-1] > 0.0)
    b3 = diag & ~b1
    east, west = mag[1:-1, 2:], mag[1:-1, :-2]
    south, north = mag[2:, 1:-1], mag[:-2, 1:-1]
    se, nw = mag[2:, 2:], mag[:-2, :-2]
    sw, ne = mag[2:, :-2], mag[:-2, 2:]
    p = np.where(b0, east, np.where(b2, south, np.where(b1, se, sw)))
    q = np.where(b0, west, np.where(b2, north, np.where(b1, nw, ne)))
    keep[1:-1, 1:-1] = (m > 0.0) & (m >= p) & (m >= q)
    return keep


def _hysteresis_loops(mag, keep, low, high):
    h, w = mag.shape
    out = np.zeros((h, w), np.bool_)
    sx = np.empty(h * w, np.int32)
    sy = np.empty(h * w, np.int32)
    n = 0
    for y in range(h):
        for x in range(w):
            if keep[y, x] and mag[y, x] >= high:
                out[y, x] = True
                sx[n] = x
                sy[n] = y
                n += 1
    while n > 0:
        n -= 1
        x = sx[n]
        y = sy[n]
        for dy in range(-1, 2):
            for dx in range(-1, 2):
                qx = x + dx
                qy = y + dy
                if 0 <= qx < w and 0 <= qy < h and not out[qy, qx]:
                    if keep[qy, qx] and mag[qy, qx] >= low:
                        out[qy, qx] = True
                        sx[n] = qx
                        sy[n] = qy
                        n += 1
    return out


def _dilate8(mask):
    out = mask.copy()
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    out[1:, 1:] |= mask[:-1, :-1]
    out[1:, :-1] |= mask[:-1, 1:]
    out[:-1, 1:] |= mask[1:, :-1]
    out[:-1, :-1] |= mask[1:, 1:]
    return out


def _hysteresis_numpy(mag, keep, low, high):
    strong = keep & (mag >= high)
    weak = keep & (mag >= low)
    out = strong.copy()
    while True:
        grown = _dilate8(out) & weak
        if not (grown & ~out).any():
            return out
        out |= grown


def _label_loops(mask):
    h, w = mask.shape
    labels = np.zeros((h, w), np.int32)
    sx = np.empty(h * w, np.int32)
    sy = np.empty(h * w, np.int32)
    lab = 0
    for y0 in range(h):
        for x0 in range(w):
            if mask[y0, x0] and labels[y0, x0] == 0:
                lab += 1
                labels[y0, x0] = lab
                sx[0] = x0
                sy[0] = y0
                n = 1
                while n > 0:
                    n -= 1
                    x = sx[n]
                    y = sy[n]
                    for dy in range(-1, 2):
                        for dx in range(-1, 2):
                            qx = x + dx
                            qy = y + dy
                            if 0 <= qx < w and 0 <= qy < h:
                                if mask[qy, qx] and labels[qy, qx] == 0:
                                    labels[qy, qx] = lab
                                    sx[n] = qx
                                    sy[n] = qy
                                    n += 1
    return labels, lab


def _label_numpy(mask):
    from scipy import ndimage

    labels, count = ndimage.label(mask, structure=np.ones((3, 3), np.int8))
    return labels.astype(np.int32), int(count)


def _component_boxes_loops(labels, count):
    h, w = labels.shape
    boxes = np.empty((count, 4), np.int64)
    for i in range(count):
        boxes[i, 0] = w
        boxes[i, 1] = h
        boxes[i, 2] = -1
        boxes[i, 3] = -1
    for y in range(h):
        for x in range(w):
            lab = labels[y, x]
            if lab > 0:
                i = lab - 1
                if x < boxes[i, 0]:
                    boxes[i, 0] = x
                if y < boxes[i, 1]:
                    boxes[i, 1] = y
                if x > boxes[i, 2]:
                    boxes[i, 2] = x
                if y > boxes[i, 3]:
                    boxes[i, 3] = y
    return boxes


def _component_boxes_numpy(labels, count):
    from scipy import ndimage

    boxes = np.empty((count, 4), np.int64)
    for i, sl in enumerate(ndimage.find_objects(labels, max_label=count)):
        ysl, xsl = sl
        boxes[i] = (xsl.start, ysl.start, xsl.stop - 1, ysl.stop - 1)
    return boxes


def _first_pixels_loops(labels, count):
    h, w = labels.shape
    firsts = np.full((count, 2), -1, np.int64)
    found = 0
    for y in range(h):
        for x in range(w):
            lab = labels[y, x]
            if lab > 0 and firsts[lab - 1, 0] < 0:
                firsts[lab - 1, 0] = x
                firsts[lab - 1, 1] = y
                found += 1
                if found == count:
                    return firsts
    return firsts


def _trace_boundary_impl(labels, lab, sx, sy, out_xy):
    """Moore boundary trace from the component's first raster pixel."""
    h, w = labels.shape
    cap = out_xy.shape[0]
    cx, cy = sx, sy
    bx, by = sx - 1, sy
    b0x, b0y = bx, by
    out_xy[0, 0] = cx
    out_xy[0, 1] = cy
    n = 1
    while n < cap:
        dstart = 0
        for d in range(8):
            if cx + _DX8[d] == bx and cy + _DY8[d] == by:
                dstart = d
                break
        found = -1
        lbx, lby = bx, by
        for i in range(1, 9):
            d = (dstart + i) % 8
            nx = cx + _DX8[d]
            ny = cy + _DY8[d]
            if 0 <= nx < w and 0 <= ny < h and labels[ny, nx] == lab:
                found = d
                break
            lbx, lby = nx, ny
        if found < 0:
            break
        cx = cx + _DX8[found]
        cy = cy + _DY8[found]
        bx, by = lbx, lby
        if cx == sx and cy == sy and bx == b0x and by == b0y:
            break
        out_xy[n, 0] = cx
        out_xy[n, 1] = cy
        n += 1
    return n


def _fill_polygon_impl(xs, ys, n, out):
    """Scanline-fill the closed polygon formed by the chain vertices.

    The chain is implicitly closed last-to-first; chain pixels themselves
    are painted as well, so open fragments become filled bow regions.
    """
    h, w = out.shape
    if n <= 0:
        return
    ylo = ys[0]
    yhi = ys[0]
    for i in range(n):
        if ys[i] < ylo:
            ylo = ys[i]
        if ys[i] > yhi:
            yhi = ys[i]
    if ylo < 0:
        ylo = 0
    if yhi > h - 1:
        yhi = h - 1
    cross = np.empty(n, np.float64)
    for y in range(ylo, yhi + 1):
        m = 0
        for i in range(n):
            j = i + 1
            if j == n:
                j = 0
            ya = ys[i]
            yb = ys[j]
            if ya == yb:
                continue
            if ya < yb:
                ymin, ymax = ya, yb
            else:
                ymin, ymax = yb, ya
            if ymin <= y < ymax:
                cross[m] = xs[i] + (y - ya) * (xs[j] - xs[i]) / (yb - ya)
                m += 1
        for a in range(1, m):
            v = cross[a]
            b = a - 1
            while b >= 0 and cross[b] > v:
                cross[b + 1] = cross[b]
                b -= 1
            cross[b + 1] = v
        for k in range(0, m - 1, 2):
            xa = int(math.ceil(cross[k] - 1e-9))
            xb = int(math.floor(cross[k + 1] + 1e-9))
            if xa < 0:
                xa = 0
            if xb > w - 1:
                xb = w - 1
            for x in range(xa, xb + 1):
                out[y, x] = True
    for i in range(n):
        if 0 <= xs[i] < w and 0 <= ys[i] < h:
            out[ys[i], xs[i]] = True


def _hough_walk_impl(state, x0, y0, dx, dy, rnx, rny, max_gap):
    """Walk from (x0, y0) along (dx, dy); return last on-line position."""
    h, w = state.shape
    lx, ly = x0, y0
    gap = 0
    t = 0
    while True:
        t += 1
        px = int(math.floor(x0 + t * dx + 0.5))
        py = int(math.floor(y0 + t * dy + 0.5))
        if px < -1 or px > w or py < -1 or py > h:
            break
        hit = False
        for k in range(3):
            off = 0
            if k == 1:
                off = 1
            elif k == 2:
                off = -1
            qx = px + off * rnx
            qy = py + off * rny
            if 0 <= qx < w and 0 <= qy < h:
                s = state[qy, qx]
                if s == 1 or s == 2:
                    hit = True
                    break
        if hit:
            lx, ly = px, py
            gap = 0
        else:
            gap += 1
            if gap > max_gap:
                break
    return lx, ly


def _hough_remove_impl(state, acc, cos_t, sin_t, rho_step, rho_offset,
                       ax, ay, bx, by, rnx, rny):
    """Consume corridor pixels of segment a->b, un-voting voted ones."""
    n_theta = cos_t.shape[0]
    h, w = state.shape
    length = math.hypot(bx - ax, by - ay)
    steps = int(math.floor(length + 0.5)) + 1
    if length > 0.0:
        dx = (bx - ax) / length
        dy = (by - ay) / length
    else:
        dx = 0.0
        dy = 0.0
    removed = 0
    for t in range(steps):
        px = int(math.floor(ax + t * dx + 0.5))
        py = int(math.floor(ay + t * dy + 0.5))
        for off in range(-1, 2):
            qx = px + off * rnx
            qy = py + off * rny
            if 0 <= qx < w and 0 <= qy < h:
                s = state[qy, qx]
                if s == 1 or s == 2:
                    if s == 2:
                        for ti in range(n_theta):
                            rho = qx * cos_t[ti] + qy * sin_t[ti]
                            ri = int(math.floor(rho / rho_step + 0.5)) + rho_offset
                            acc[ri, ti] -= 1
                    state[qy, qx] = 3
                    removed += 1
    return removed


def _hough_loops(state, xs, ys, order, cos_t, sin_t, rho_step, rho_offset,
                 n_rho, vote_threshold, min_len, max_gap, out_segs):
    n_theta = cos_t.shape[0]
    acc = np.zeros((n_rho, n_theta), np.int32)
    n_out = 0
    cap = out_segs.shape[0]
    for oi in range(order.shape[0]):
        idx = order[oi]
        x = xs[idx]
        y = ys[idx]
        if state[y, x] != 1:
            continue
        state[y, x] = 2
        best_votes = 0
        best_t = 0
        for ti in range(n_theta):
            rho = x * cos_t[ti] + y * sin_t[ti]
            ri = int(math.floor(rho / rho_step + 0.5)) + rho_offset
            acc[ri, ti] += 1
            if acc[ri, ti] > best_votes:
                best_votes = acc[ri, ti]
                best_t = ti
        if best_votes < vote_threshold:
            continue
        dx = -sin_t[best_t]
        dy = cos_t[best_t]
        rnx = int(math.floor(cos_t[best_t] + 0.5))
        rny = int(math.floor(sin_t[best_t] + 0.5))
        ax, ay = _hough_walk(state, x, y, dx, dy, rnx, rny, max_gap)
        bx, by = _hough_walk(state, x, y, -dx, -dy, rnx, rny, max_gap)
        _hough_remove(state, acc, cos_t, sin_t, rho_step, rho_offset,
                      ax, ay, bx, by, rnx, rny)
        if math.hypot(ax - bx, ay - by) >= min_len and n_out < cap:
            out_segs[n_out, 0] = bx
            out_segs[n_out, 1] = by
            out_segs[n_out, 2] = ax
            out_segs[n_out, 3] = ay
            n_out += 1
    return n_out


if NUMBA_ENABLED:
    _hough_walk = _jit(_hough_walk_impl)
    _hough_remove = _jit(_hough_remove_impl)
    _gaussian_blur_fast = _jit(_gaussian_blur_loops)
    _sobel_fast = _jit(_sobel_loops)
    _nms_fast = _jit(_nms_loops)
    _hysteresis_fast = _jit(_hysteresis_loops)
    _label_fast = _jit(_label_loops)
    _component_boxes_fast = _jit(_component_boxes_loops)
    _first_pixels_fast = _jit(_first_pixels_loops)
    trace_boundary_kernel = _jit(_trace_boundary_impl)
    fill_polygon_kernel = _jit(_fill_polygon_impl)
    _hough_fast = _jit(_hough_loops)
else:
    trace_boundary_kernel = _trace_boundary_impl
    fill_polygon_kernel = _fill_polygon_impl
    _hough_walk = _hough_walk_impl
    _hough_remove = _hough_remove_impl


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    taps = gaussian_taps(sigma)
    img = np.ascontiguousarray(img, dtype=np.float64)
    if NUMBA_ENABLED:
        return _gaussian_blur_fast(img, taps)
    return _gaussian_blur_numpy(img, taps)


def sobel_gradients(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    img = np.ascontiguousarray(img, dtype=np.float64)
    if NUMBA_ENABLED:
        return _sobel_fast(img)
    return _sobel_numpy(img)


def nonmax_suppress(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    if NUMBA_ENABLED:
        return _nms_fast(mag, gx, gy)
    return _nms_numpy(mag, gx, gy)


def hysteresis(mag: np.ndarray, keep: np.ndarray, low: float, high: float) -> np.ndarray:
    if NUMBA_ENABLED:
        return _hysteresis_fast(mag, keep, float(low), float(high))
    return _hysteresis_numpy(mag, keep, float(low), float(high))


def label_components(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """8-connected labels, numbered 1..n in raster order of first pixel."""
    mask = np.ascontiguousarray(mask, dtype=np.bool_)
    if NUMBA_ENABLED:
        labels, count = _label_fast(mask)
        return labels, int(count)
    return _label_numpy(mask)


def component_boxes(labels: np.ndarray, count: int) -> np.ndarray:
    """(count, 4) array of inclusive x_min, y_min, x_max, y_max per label."""
    if count == 0:
        return np.empty((0, 4), np.int64)
    if NUMBA_ENABLED:
        return _component_boxes_fast(labels, count)
    return _component_boxes_numpy(labels, count)


def first_pixels(labels: np.ndarray, count: int) -> np.ndarray:
    """(count, 2) array of each label's first raster pixel as (x, y)."""
    if count == 0:
        return np.empty((0, 2), np.int64)
    if NUMBA_ENABLED:
        return _first_pixels_fast(labels, count)
    ys, xs = np.nonzero(labels)
    labs = labels[ys, xs]
    firsts = np.full((count, 2), -1, np.int64)
    seen = np.zeros(count + 1, np.bool_)
    for x, y, lab in zip(xs, ys, labs):
        if not seen[lab]:
            seen[lab] = True
            firsts[lab - 1] = (x, y)
    return firsts


def trace_boundary(labels: np.ndarray, lab: int, sx: int, sy: int,
                   pixel_count: int) -> np.ndarray:
    """Outer boundary chain of one component as an (n, 2) array of (x, y)."""
    cap = 4 * pixel_count + 8
    out = np.empty((cap, 2), np.int64)
    n = trace_boundary_kernel(labels, lab, sx, sy, out)
    return out[:n].copy()


def fill_polygon(chain: np.ndarray, out: np.ndarray) -> None:
    """Paint the chain's closed-polygon interior (and the chain) into out."""
    xs = np.ascontiguousarray(chain[:, 0], dtype=np.int64)
    ys = np.ascontiguousarray(chain[:, 1], dtype=np.int64)
    fill_polygon_kernel(xs, ys, xs.shape[0], out)


def _hough_numpy(state, xs, ys, order, cos_t, sin_t, rho_step, rho_offset,
                 n_rho, vote_threshold, min_len, max_gap, out_segs):
    n_theta = cos_t.shape[0]
    acc = np.zeros((n_rho, n_theta), np.int32)
    tar = np.arange(n_theta)
    n_out = 0
    cap = out_segs.shape[0]
    for idx in order:
        x = int(xs[idx])
        y = int(ys[idx])
        if state[y, x] != 1:
            continue
        state[y, x] = 2
        ri = np.floor((x * cos_t + y * sin_t) / rho_step + 0.5).astype(np.int64) + rho_offset
        acc[ri, tar] += 1
        votes = acc[ri, tar]
        best_t = int(np.argmax(votes))
        if votes[best_t] < vote_threshold:
            continue
        dx = -sin_t[best_t]
        dy = cos_t[best_t]
        rnx = int(math.floor(cos_t[best_t] + 0.5))
        rny = int(math.floor(sin_t[best_t] + 0.5))
        ax, ay = _hough_walk(state, x, y, dx, dy, rnx, rny, max_gap)
        bx, by = _hough_walk(state, x, y, -dx, -dy, rnx, rny, max_gap)
        _hough_remove(state, acc, cos_t, sin_t, rho_step, rho_offset,
                      ax, ay, bx, by, rnx, rny)
        if math.hypot(ax - bx, ay - by) >= min_len and n_out < cap:
            out_segs[n_out] = (bx, by, ax, ay)
            n_out += 1
    return n_out


def hough_segments(mask: np.ndarray, order: np.ndarray, cos_t: np.ndarray,
                   sin_t: np.ndarray, rho_step: float, rho_offset: int,
                   n_rho: int, vote_threshold: int, min_len: float,
                   max_gap: int) -> np.ndarray:
    """Progressive probabilistic Hough core; returns (k, 4) segment array.

    ``order`` is the caller-supplied random processing order over the
    edge pixels of ``mask`` (raster-order nonzero indexing).
    """
    ys, xs = np.nonzero(mask)
    if xs.size == 0:
        return np.empty((0, 4), np.int64)
    state = np.where(mask, np.int8(1), np.int8(0))
    xs = xs.astype(np.int64)
    ys = ys.astype(np.int64)
    order = order.astype(np.int64)
    cap = xs.size // 2 + 16
    out = np.empty((cap, 4), np.int64)
    args = (state, xs, ys, order, cos_t, sin_t, float(rho_step),
            int(rho_offset), int(n_rho), int(vote_threshold), float(min_len),
            int(max_gap), out)
    if NUMBA_ENABLED:
        n = _hough_fast(*args)
    else:
        n = _hough_numpy(*args)
    return out[:n].copy()
