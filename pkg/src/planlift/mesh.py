"""Extrude a recognized floor plan into a polygon mesh and export OBJ.

Image coordinates map to 3-D as (x * s, up, y * s): the image plane
becomes the ground plane and the extrusion axis points up. Walls become
cuboids sliced around door and window openings; doors add leaf quads,
windows glass quads; the roof is a hip over the footprint.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .geometry import HORIZONTAL, BBox
from .model import FloorPlanModel

GROUP_ORDER = ("walls", "doors", "windows", "roof", "floor")


@dataclass(frozen=True)
class ExtrudeConfig:
    wall_height: float = 280.0
    door_height_fraction: float = 0.8
    window_sill_fraction: float = 0.3
    window_top_fraction: float = 0.75
    unit_scale: float = 1.0

    def validate(self) -> None:
        if not 0 < self.door_height_fraction <= 1:
            raise ValueError("door_height_fraction must be in (0, 1]")
        if not 0 < self.window_sill_fraction < self.window_top_fraction <= 1:
            raise ValueError("need 0 < sill < top <= 1")
        if self.wall_height <= 0 or self.unit_scale <= 0:
            raise ValueError("wall_height and unit_scale must be positive")


@dataclass
class Mesh:
    vertices: list[tuple[float, float, float]] = field(default_factory=list)
    faces: list[list[int]] = field(default_factory=list)
    face_groups: dict[str, list[int]] = field(default_factory=dict)

    def add_face(self, group: str, pts: list[tuple[float, float, float]]) -> None:
        base = len(self.vertices)
        self.vertices.extend(pts)
        self.faces.append(list(range(base, base + len(pts))))
        self.face_groups.setdefault(group, []).append(len(self.faces) - 1)

    def add_cuboid(self, group: str, x0: float, x1: float, y0: float,
                   y1: float, z0: float, z1: float) -> None:
        """Axis-aligned box; x/z are ground axes, y is up. Skips degenerate."""
        if x0 >= x1 or y0 >= y1 or z0 >= z1:
            return
        self.add_face(group, [(x0, y0, z0), (x1, y0, z0), (x1, y0, z1), (x0, y0, z1)])
        self.add_face(group, [(x0, y1, z0), (x0, y1, z1), (x1, y1, z1), (x1, y1, z0)])
        self.add_face(group, [(x0, y0, z0), (x0, y0, z1), (x0, y1, z1), (x0, y1, z0)])
        self.add_face(group, [(x1, y0, z0), (x1, y1, z0), (x1, y1, z1), (x1, y0, z1)])
        self.add_face(group, [(x0, y0, z0), (x0, y1, z0), (x1, y1, z0), (x1, y0, z0)])
        self.add_face(group, [(x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1)])


@dataclass(frozen=True)
class MeshStats:
    face_count: int
    triangle_count: int


def mesh_stats(mesh: Mesh) -> MeshStats:
    return MeshStats(len(mesh.faces),
                     sum(len(f) - 2 for f in mesh.faces))


def _wall_openings(m: FloorPlanModel, wall, cfg: ExtrudeConfig):
    """(lo, hi, z_lo, z_hi) opening bands along the wall axis, sorted."""
    horizontal = wall.orientation == HORIZONTAL
    a0 = wall.centerline.x1 if horizontal else wall.centerline.y1
    a1 = wall.centerline.x2 if horizontal else wall.centerline.y2
    spans = []
    for win in m.windows:
        if win.wall_id != wall.id:
            continue
        lo = win.segment.x1 if horizontal else win.segment.y1
        hi = win.segment.x2 if horizontal else win.segment.y2
        spans.append((lo, hi, cfg.window_sill_fraction * cfg.wall_height,
                      cfg.window_top_fraction * cfg.wall_height))
    for door in m.doors:
        seg = door.segment
        door_horizontal = seg.y1 == seg.y2
        if door_horizontal != horizontal:
            continue
        off = abs((seg.y1 if horizontal else seg.x1)
                  - (wall.centerline.y1 if horizontal else wall.centerline.x1))
        if off > wall.thickness:
            continue
        lo = seg.x1 if horizontal else seg.y1
        hi = seg.x2 if horizontal else seg.y2
        if hi <= a0 or lo >= a1:
            continue
        spans.append((max(lo, a0), min(hi, a1), 0.0,
                      cfg.door_height_fraction * cfg.wall_height))
    spans.sort()
    return a0, a1, spans


def _extrude_wall(mesh: Mesh, m: FloorPlanModel, wall, cfg: ExtrudeConfig) -> None:
    s = cfg.unit_scale
    horizontal = wall.orientation == HORIZONTAL
    c = wall.centerline.y1 if horizontal else wall.centerline.x1
    p0 = (c - wall.thickness / 2.0) * s
    p1 = (c + wall.thickness / 2.0) * s
    a0, a1, spans = _wall_openings(m, wall, cfg)

    def slab(lo: float, hi: float, z_lo: float, z_hi: float) -> None:
        if horizontal:
            mesh.add_cuboid("walls", lo * s, hi * s, z_lo, z_hi, p0, p1)
        else:
            mesh.add_cuboid("walls", p0, p1, z_lo, z_hi, lo * s, hi * s)

    cursor = float(a0)
    for lo, hi, z_lo, z_hi in spans:
        lo = max(float(lo), cursor)
        hi = min(float(hi), float(a1))
        if hi <= lo:
            continue
        slab(cursor, lo, 0.0, cfg.wall_height)
        if z_lo > 0:
            slab(lo, hi, 0.0, z_lo)
        if z_hi < cfg.wall_height:
            slab(lo, hi, z_hi, cfg.wall_height)
        cursor = hi
    slab(cursor, float(a1), 0.0, cfg.wall_height)


def _panel(mesh: Mesh, group: str, seg, z_lo: float, z_hi: float, s: float) -> None:
    """Thin vertical quad along an axis-aligned segment."""
    x1, y1, x2, y2 = seg.x1 * s, seg.y1 * s, seg.x2 * s, seg.y2 * s
    if (x1, y1) == (x2, y2) or z_lo >= z_hi:
        return
    mesh.add_face(group, [(x1, z_lo, y1), (x2, z_lo, y2),
                          (x2, z_hi, y2), (x1, z_hi, y1)])


def _extrude_roof(mesh: Mesh, fp: BBox, apex_height: float, cfg: ExtrudeConfig) -> None:
    s = cfg.unit_scale
    x0, x1 = fp.x_min * s, fp.x_max * s
    z0, z1 = fp.y_min * s, fp.y_max * s
    ye = cfg.wall_height
    ya = cfg.wall_height + apex_height * s
    wx = x1 - x0
    wz = z1 - z0
    if wx >= wz:
        inset = wz / 2.0
        zc = (z0 + z1) / 2.0
        r0, r1 = x0 + inset, x1 - inset
        if r1 - r0 < 1e-9:
            apex = ((x0 + x1) / 2.0, ya, zc)
            mesh.add_face("roof", [(x0, ye, z0), (x1, ye, z0), apex])
            mesh.add_face("roof", [(x1, ye, z0), (x1, ye, z1), apex])
            mesh.add_face("roof", [(x1, ye, z1), (x0, ye, z1), apex])
            mesh.add_face("roof", [(x0, ye, z1), (x0, ye, z0), apex])
        else:
            mesh.add_face("roof", [(x0, ye, z0), (x1, ye, z0),
                                   (r1, ya, zc), (r0, ya, zc)])
            mesh.add_face("roof", [(x1, ye, z1), (x0, ye, z1),
                                   (r0, ya, zc), (r1, ya, zc)])
            mesh.add_face("roof", [(x0, ye, z0), (r0, ya, zc), (x0, ye, z1)])
            mesh.add_face("roof", [(x1, ye, z0), (x1, ye, z1), (r1, ya, zc)])
    else:
        inset = wx / 2.0
        xc = (x0 + x1) / 2.0
        r0, r1 = z0 + inset, z1 - inset
        mesh.add_face("roof", [(x0, ye, z0), (xc, ya, r0), (x1, ye, z0)])
        mesh.add_face("roof", [(x1, ye, z1), (xc, ya, r1), (x0, ye, z1)])
        mesh.add_face("roof", [(x1, ye, z0), (xc, ya, r0), (xc, ya, r1), (x1, ye, z1)])
        mesh.add_face("roof", [(x0, ye, z1), (xc, ya, r1), (xc, ya, r0), (x0, ye, z0)])


def extrude(m: FloorPlanModel, cfg: ExtrudeConfig = ExtrudeConfig()) -> Mesh:
    """Build the building mesh; raises for a model with no walls."""
    cfg.validate()
    if not m.walls:
        raise ValueError("nothing to extrude")
    mesh = Mesh()
    for wall in m.walls:
        _extrude_wall(mesh, m, wall, cfg)
    for door in m.doors:
        _panel(mesh, "doors", door.segment, 0.0,
               cfg.door_height_fraction * cfg.wall_height, cfg.unit_scale)
    for win in m.windows:
        _panel(mesh, "windows", win.segment,
               cfg.window_sill_fraction * cfg.wall_height,
               cfg.window_top_fraction * cfg.wall_height, cfg.unit_scale)
    if m.roof is not None:
        fp = m.roof.footprint
        _extrude_roof(mesh, fp, float(m.roof.apex_height), cfg)
    else:
        fp = m.walls[0].box
        for w in m.walls[1:]:
            fp = fp.union(w.box)
    s = cfg.unit_scale
    mesh.add_face("floor", [(fp.x_min * s, 0.0, fp.y_min * s),
                            (fp.x_max * s, 0.0, fp.y_min * s),
                            (fp.x_max * s, 0.0, fp.y_max * s),
                            (fp.x_min * s, 0.0, fp.y_max * s)])
    return mesh


def export_obj(mesh: Mesh, path: str | Path) -> None:
    """Wavefront OBJ with one g line per non-empty face group."""
    out = ["# planlift building mesh"]
    for (x, y, z) in mesh.vertices:
        out.append(f"v {x:.6f} {y:.6f} {z:.6f}")
    for group in GROUP_ORDER:
        indices = mesh.face_groups.get(group)
        if not indices:
            continue
        out.append(f"g {group}")
        for fi in indices:
            out.append("f " + " ".join(str(v + 1) for v in mesh.faces[fi]))
    Path(path).write_text("\n".join(out) + "\n", encoding="ascii")
