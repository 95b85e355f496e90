"""Recognized-building data model, roof estimation and XML persistence."""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .doors import Door
from .geometry import HORIZONTAL, VERTICAL, BBox, Segment
from .walls import Wall
from .windows import Window

_COMMENT = "objects and dimensions in one floor building"


class SchemaError(ValueError):
    """Raised when XML input violates the building schema."""


@dataclass
class Roof:
    footprint: BBox
    overhang: int
    apex_height: int


@dataclass(frozen=True)
class SourceInfo:
    width: int
    height: int
    fingerprint: str = ""


@dataclass
class FloorPlanModel:
    walls: list[Wall] = field(default_factory=list)
    windows: list[Window] = field(default_factory=list)
    doors: list[Door] = field(default_factory=list)
    roof: Roof | None = None
    source: SourceInfo | None = None

    def validate(self) -> None:
        ids = [w.id for w in self.walls]
        if len(set(ids)) != len(ids):
            raise ValueError("wall ids are not unique")
        known = set(ids)
        for win in self.windows:
            if win.wall_id not in known:
                raise ValueError(f"window references unknown wall {win.wall_id}")
        for door in self.doors:
            for wid in door.attached_wall_ids:
                if wid not in known:
                    raise ValueError(f"door references unknown wall {wid}")


def estimate_roof(walls: list[Wall], overhang: int, apex_ratio: float) -> Roof:
    """Pseudo roof: wall bounding box grown by the overhang, apex height a
    fixed ratio of the footprint's short side."""
    if not walls:
        raise ValueError("no walls detected")
    fp = walls[0].box
    for w in walls[1:]:
        fp = fp.union(w.box)
    fp = fp.expand(overhang)
    short = min(fp.x_max - fp.x_min, fp.y_max - fp.y_min)
    apex = max(1, int(apex_ratio * short + 0.5))
    return Roof(fp, overhang, apex)


def _point_block(pad: str, x1: int, y1: int, x2: int, y2: int) -> list[str]:
    return [
        f"{pad}<point>",
        f"{pad}  <x1>{x1}</x1>",
        f"{pad}  <y1>{y1}</y1>",
        f"{pad}  <x2>{x2}</x2>",
        f"{pad}  <y2>{y2}</y2>",
        f"{pad}</point>",
    ]


def to_xml(m: FloorPlanModel) -> bytes:
    """Serialize to the building XML format; deterministic byte output.

    Walls carry w_id/ltexture/rtexture attributes and one point block
    with the centerline; a thickness attribute appears whenever it is
    not 1. Windows, doors and roof follow the same point-block shape.
    """
    m.validate()
    attrs = ""
    if m.source is not None:
        attrs = (f' width="{m.source.width}" height="{m.source.height}"'
                 f' fingerprint="{m.source.fingerprint}"')
    out = ['<?xml version="1.0" ?>', f"<building{attrs}>", f"  <!-- {_COMMENT} -->"]
    for w in m.walls:
        thick = f' thickness="{w.thickness}"' if w.thickness != 1 else ""
        out.append(f'  <wall w_id="{w.id}"{thick} ltexture="{w.left_texture}"'
                   f' rtexture="{w.right_texture}">')
        c = w.centerline
        out.extend(_point_block("    ", c.x1, c.y1, c.x2, c.y2))
        out.append("  </wall>")
    for i, win in enumerate(m.windows):
        b = win.box
        out.append(f'  <window win_id="{i}" w_id="{win.wall_id}"'
                   f' box="{b.x_min} {b.y_min} {b.x_max} {b.y_max}">')
        s = win.segment
        out.extend(_point_block("    ", s.x1, s.y1, s.x2, s.y2))
        out.append("  </window>")
    for i, door in enumerate(m.doors):
        b = door.box
        walls_attr = ""
        if door.attached_wall_ids:
            walls_attr = f' walls="{" ".join(str(w) for w in door.attached_wall_ids)}"'
        aligned = "true" if door.aligned else "false"
        out.append(f'  <door d_id="{i}" aligned="{aligned}"{walls_attr}'
                   f' box="{b.x_min} {b.y_min} {b.x_max} {b.y_max}">')
        s = door.segment
        out.extend(_point_block("    ", s.x1, s.y1, s.x2, s.y2))
        out.append("  </door>")
    if m.roof is not None:
        fp = m.roof.footprint
        out.append("  <roof>")
        out.extend(_point_block("    ", fp.x_min, fp.y_min, fp.x_max, fp.y_max))
        out.append(f"    <overhang>{m.roof.overhang}</overhang>")
        out.append(f"    <apex>{m.roof.apex_height}</apex>")
        out.append("  </roof>")
    out.append("</building>")
    return ("\n".join(out) + "\n").encode("utf-8")


def _parse_int(elem: ET.Element, parent: str) -> int:
    text = (elem.text or "").strip()
    try:
        return int(text)
    except ValueError:
        raise SchemaError(f"non-integer <{elem.tag}> in <{parent}>: {text!r}") from None


def _parse_point(parent: ET.Element) -> tuple[int, int, int, int]:
    point = parent.find("point")
    if point is None:
        raise SchemaError(f"<{parent.tag}> missing <point>")
    vals = []
    for tag in ("x1", "y1", "x2", "y2"):
        child = point.find(tag)
        if child is None:
            raise SchemaError(f"<{parent.tag}> missing <{tag}>")
        vals.append(_parse_int(child, parent.tag))
    for child in point:
        if child.tag not in ("x1", "y1", "x2", "y2"):
            raise SchemaError(f"unknown element <{child.tag}> in <point>")
    return tuple(vals)  # type: ignore[return-value]


def _parse_box_attr(elem: ET.Element) -> BBox | None:
    raw = elem.get("box")
    if raw is None:
        return None
    parts = raw.split()
    if len(parts) != 4:
        raise SchemaError(f"bad box attribute on <{elem.tag}>: {raw!r}")
    try:
        x0, y0, x1, y1 = (int(p) for p in parts)
    except ValueError:
        raise SchemaError(f"bad box attribute on <{elem.tag}>: {raw!r}") from None
    return BBox(x0, y0, x1, y1)


def _attr_int(elem: ET.Element, name: str) -> int:
    raw = elem.get(name)
    if raw is None:
        raise SchemaError(f"<{elem.tag}> missing {name} attribute")
    try:
        return int(raw)
    except ValueError:
        raise SchemaError(f"non-integer {name} on <{elem.tag}>: {raw!r}") from None


def from_xml(data: bytes | str) -> FloorPlanModel:
    """Parse building XML back into a model; unknown elements rejected."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SchemaError(f"malformed XML: {exc}") from None
    if root.tag != "building":
        raise SchemaError(f"expected <building>, found <{root.tag}>")
    source = None
    if root.get("width") is not None or root.get("height") is not None:
        source = SourceInfo(_attr_int(root, "width"), _attr_int(root, "height"),
                            root.get("fingerprint", ""))
    walls: list[Wall] = []
    windows: list[Window] = []
    doors: list[Door] = []
    roof: Roof | None = None
    for elem in root:
        if elem.tag == "wall":
            x1, y1, x2, y2 = _parse_point(elem)
            if y1 == y2:
                orientation = HORIZONTAL
            elif x1 == x2:
                orientation = VERTICAL
            else:
                raise SchemaError(f"wall centerline not axis-aligned: {(x1, y1, x2, y2)}")
            try:
                thickness = int(elem.get("thickness", "1"))
            except ValueError:
                raise SchemaError(f"non-integer thickness: {elem.get('thickness')!r}") from None
            half_lo = (thickness - 1) // 2
            half_hi = thickness - 1 - half_lo
            if orientation == HORIZONTAL:
                box = BBox(min(x1, x2), y1 - half_hi, max(x1, x2), y1 + half_lo)
            else:
                box = BBox(x1 - half_hi, min(y1, y2), x1 + half_lo, max(y1, y2))
            walls.append(Wall(_attr_int(elem, "w_id"), orientation,
                              Segment(x1, y1, x2, y2), thickness, box,
                              elem.get("ltexture", " "), elem.get("rtexture", " ")))
        elif elem.tag == "window":
            x1, y1, x2, y2 = _parse_point(elem)
            box = _parse_box_attr(elem)
            seg = Segment(x1, y1, x2, y2)
            if box is None:
                box = seg.bbox()
            windows.append(Window(_attr_int(elem, "w_id"), seg, box))
        elif elem.tag == "door":
            x1, y1, x2, y2 = _parse_point(elem)
            box = _parse_box_attr(elem)
            seg = Segment(x1, y1, x2, y2)
            if box is None:
                box = seg.bbox()
            aligned_raw = elem.get("aligned", "false")
            if aligned_raw not in ("true", "false"):
                raise SchemaError(f"bad aligned attribute: {aligned_raw!r}")
            attached: tuple[int, ...] = ()
            if elem.get("walls"):
                try:
                    attached = tuple(int(p) for p in elem.get("walls", "").split())
                except ValueError:
                    raise SchemaError(f"bad walls attribute: {elem.get('walls')!r}") from None
            doors.append(Door(box, seg, aligned_raw == "true", attached))
        elif elem.tag == "roof":
            x1, y1, x2, y2 = _parse_point(elem)
            over = elem.find("overhang")
            apex = elem.find("apex")
            if over is None or apex is None:
                raise SchemaError("<roof> missing <overhang> or <apex>")
            roof = Roof(BBox(min(x1, x2), min(y1, y2), max(x1, x2), max(y1, y2)),
                        _parse_int(over, "roof"), _parse_int(apex, "roof"))
        else:
            raise SchemaError(f"unknown element <{elem.tag}> in <building>")
    ids = [w.id for w in walls]
    if len(set(ids)) != len(ids):
        # tolerate the duplicated-id style of legacy files, but only when
        # nothing references walls by id
        if windows or any(d.attached_wall_ids for d in doors):
            raise SchemaError("duplicate wall ids with wall references present")
        for i, w in enumerate(walls):
            w.id = i
    model = FloorPlanModel(walls, windows, doors, roof, source)
    try:
        model.validate()
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    return model
