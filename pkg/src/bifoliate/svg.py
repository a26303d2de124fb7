"""Deterministic SVG pictures of eigenlines, crossings and lozenge complexes.

Output depends only on the scene: elements are emitted in insertion order
and coordinates are rounded to a fixed number of decimals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

from .exactmath import IntMatrix2, QuadraticNumber
from .lattice import (
    RIGHT,
    canonicalize_slopes,
    crossings_in_box,
    eigen_slopes,
    normalize_matrix,
    t_param,
    u_param,
)
from .scalloped import LozengeComplex

__all__ = ["Line", "Dot", "Polygon", "Scene", "eigen_scene", "lozenge_scene", "svg_render"]

STYLE = """
.eigenline{stroke:#333;stroke-width:1.5}
.eigenline.contracting{stroke:#1f6fb4}
.eigenline.expanding{stroke:#c0392b}
.lattice{fill:#999}
.crossing.right{fill:#1f9e55}
.crossing.left{fill:#8e44ad}
.parallelogram{fill:none;stroke:#e6a100;stroke-width:0.8}
.lozenge{stroke:#444;stroke-width:0.6}
.lozenge.even{fill:#f4d58d}
.lozenge.odd{fill:#9cc5e8}
.corner{fill:#222}
""".strip()

Point = tuple[float, float]


@dataclass(frozen=True)
class Line:
    a: Point
    b: Point
    cls: str
    title: str = ""


@dataclass(frozen=True)
class Dot:
    at: Point
    radius: float
    cls: str
    title: str = ""


@dataclass(frozen=True)
class Polygon:
    points: tuple[Point, ...]
    cls: str
    title: str = ""


@dataclass
class Scene:
    bounds: tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0)  # xmin, xmax, ymin, ymax
    items: list = field(default_factory=list)

    def add(self, item) -> None:
        self.items.append(item)

    def count(self, cls: str) -> int:
        return sum(1 for it in self.items if cls in it.cls.split())


def _exact_float(x: QuadraticNumber, digits: int = 12) -> float:
    return float(x.to_decimal(digits + 8))


def _clip_line(slope: float, box: float) -> tuple[Point, Point]:
    """Segment of the line y = slope * x through 0 inside the square |x|, |y| <= box."""
    if abs(slope) <= 1:
        return (-box, -box * slope), (box, box * slope)
    return (-box / slope, -box), (box / slope, box)


def eigen_scene(A: IntMatrix2, box: int, *, parallelograms: bool = True) -> Scene:
    """Lattice, both eigenlines and the crossings with |m|, |n| <= box.

    Drawn in the canonical coordinates used for the crossing search.
    """
    if box < 1:
        raise ValueError("box must be >= 1")
    A0, _ = normalize_matrix(A)
    slopes = canonicalize_slopes(eigen_slopes(A0))
    sc = Scene(bounds=(-box - 0.5, box + 0.5, -box - 0.5, box + 0.5))
    for name, s in (("contracting", slopes.alpha), ("expanding", slopes.beta)):
        a, b = _clip_line(_exact_float(s), box + 0.5)
        sc.add(Line(a, b, f"eigenline {name}", f"slope {s.exact_str()}"))
    for m in range(-box, box + 1):
        for n in range(-box, box + 1):
            sc.add(Dot((m, n), 0.06, "lattice"))
    crossings = crossings_in_box(slopes, box)
    if parallelograms:
        for c in crossings:
            t, u = t_param(c.m, c.n, slopes), u_param(c.m, c.n, slopes)
            p = (_exact_float(t), _exact_float(t * slopes.alpha))
            q = (_exact_float(u), _exact_float(u * slopes.beta))
            sc.add(Polygon(((0.0, 0.0), p, (float(c.m), float(c.n)), q), "parallelogram"))
    for c in crossings:
        side = "right" if c.side == RIGHT else "left"
        sc.add(Dot((c.m, c.n), 0.16, f"crossing {side}", f"({c.m}, {c.n}) {c.side}"))
    return sc


def _tree_layout(c: LozengeComplex) -> list[Point]:
    """Radial layout: each corner owns an angular sector split among its children."""
    pos: list[Point] = [(0.0, 0.0)] * len(c.corner_vertex)
    sector: dict[int, tuple[float, float]] = {0: (0.0, 2 * math.pi)}
    order = sorted(range(len(c.corner_vertex)), key=lambda i: (c.corner_depth[i], i))
    for corner in order:
        lo, hi = sector[corner]
        kids = []
        for slot in sorted(c.corner_slots[corner]):
            lz = c.lozenges[c.corner_slots[corner][slot]]
            (inner, _), (outer, _) = lz.ends
            if inner == corner:
                kids.append(outer)
        if not kids:
            continue
        width = (hi - lo) / len(kids)
        for k, child in enumerate(kids):
            a0 = lo + k * width
            sector[child] = (a0, a0 + width)
            mid = a0 + width / 2
            r = float(c.corner_depth[child])
            pos[child] = (r * math.cos(mid), r * math.sin(mid))
    return pos


def lozenge_scene(c: LozengeComplex) -> Scene:
    """One rhombus per lozenge, its long diagonal joining the two corners."""
    pos = _tree_layout(c)
    R = max(c.radius, 1) + 0.5
    sc = Scene(bounds=(-R, R, -R, R))
    for lz in c.lozenges:
        (x0, y0), (x1, y1) = pos[lz.ends[0][0]], pos[lz.ends[1][0]]
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        dx, dy = (x1 - x0) * 0.25, (y1 - y0) * 0.25
        pts = ((x0, y0), (mx - dy, my + dx), (x1, y1), (mx + dy, my - dx))
        parity = "even" if lz.parity == 0 else "odd"
        sc.add(Polygon(pts, f"lozenge {parity}", f"lozenge {lz.id} edge {lz.edge}"))
    for i, p in enumerate(pos):
        sc.add(Dot(p, 0.03, "corner", f"corner {i} vertex {c.corner_vertex[i]}"))
    return sc


def _fmt(v: float, places: int) -> str:
    d = Decimal(repr(v)).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def svg_render(scene: Scene | None, viewport: tuple[int, int] = (600, 600), places: int = 2) -> str:
    """SVG text for the scene; y grows upward in scene coordinates."""
    w, h = viewport
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
    )
    if scene is None or not scene.items:
        return head + "</svg>\n"
    xmin, xmax, ymin, ymax = scene.bounds
    k = min(w / (xmax - xmin), h / (ymax - ymin))

    def X(x: float) -> str:
        return _fmt((x - xmin) * k, places)

    def Y(y: float) -> str:
        return _fmt((ymax - y) * k, places)

    lines = [head, f"<style>{STYLE}</style>\n"]
    for it in scene.items:
        title = f"<title>{_esc(it.title)}</title>" if it.title else ""
        if isinstance(it, Line):
            attrs = f'x1="{X(it.a[0])}" y1="{Y(it.a[1])}" x2="{X(it.b[0])}" y2="{Y(it.b[1])}"'
            lines.append(f'<line class="{it.cls}" {attrs}>{title}</line>\n')
        elif isinstance(it, Dot):
            r = _fmt(it.radius * k, places)
            attrs = f'cx="{X(it.at[0])}" cy="{Y(it.at[1])}" r="{r}"'
            lines.append(f'<circle class="{it.cls}" {attrs}>{title}</circle>\n')
        elif isinstance(it, Polygon):
            pts = " ".join(f"{X(x)},{Y(y)}" for x, y in it.points)
            lines.append(f'<polygon class="{it.cls}" points="{pts}">{title}</polygon>\n')
        else:
            raise TypeError(f"unknown scene item {type(it).__name__}")
    lines.append("</svg>\n")
    return "".join(lines)

