"""Render-agnostic scene graph and its deterministic SVG serialization.

A scene is an ordered list of named layers holding polylines, filled
regions, arrows, dots, and text badges, all in normalized vocal-tract
coordinates (y up). Serialization is a pure function: identical scenes
yield byte-identical SVG text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class Polyline:
    points: np.ndarray
    closed: bool = False
    style: str = "outline"

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=float))


@dataclass(frozen=True, eq=False)
class Region:
    points: np.ndarray
    style: str = "fill"

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=float))


@dataclass(frozen=True)
class Arrow:
    tail: tuple[float, float]
    head: tuple[float, float]
    style: str = "airflow"


@dataclass(frozen=True)
class Dot:
    center: tuple[float, float]
    radius: float = 0.012
    style: str = "marker"


@dataclass(frozen=True)
class Badge:
    anchor: tuple[float, float]
    text: str
    style: str = "badge"


Primitive = Polyline | Region | Arrow | Dot | Badge


@dataclass(frozen=True)
class Layer:
    name: str
    primitives: tuple[Primitive, ...]


@dataclass(frozen=True)
class SceneGraph:
    layers: tuple[Layer, ...]
    view_box: tuple[float, float, float, float] = (-0.15, -0.05, 1.25, 1.10)

    def layer(self, name: str) -> Layer:
        for layer in self.layers:
            if layer.name == name:
                return layer
        raise KeyError(name)

    def layer_names(self) -> list[str]:
        return [layer.name for layer in self.layers]

    def primitive_count(self) -> int:
        return sum(len(layer.primitives) for layer in self.layers)


def build_scene(layers: Iterable[tuple[str, Sequence[Primitive]]], view_box=None) -> SceneGraph:
    built = tuple(Layer(name, tuple(prims)) for name, prims in layers)
    names = [layer.name for layer in built]
    if len(names) != len(set(names)):
        raise ValueError(f"duplicate layer names: {names}")
    if view_box is None:
        return SceneGraph(built)
    return SceneGraph(built, tuple(float(v) for v in view_box))


def translate_scene(scene: SceneGraph, dx: float, dy: float) -> SceneGraph:
    """Shift every primitive; used when compositing panels side by side."""
    shift = np.array([dx, dy])

    def move(p: Primitive) -> Primitive:
        if isinstance(p, Polyline):
            return Polyline(p.points + shift, p.closed, p.style)
        if isinstance(p, Region):
            return Region(p.points + shift, p.style)
        if isinstance(p, Arrow):
            return Arrow((p.tail[0] + dx, p.tail[1] + dy), (p.head[0] + dx, p.head[1] + dy), p.style)
        if isinstance(p, Dot):
            return Dot((p.center[0] + dx, p.center[1] + dy), p.radius, p.style)
        return Badge((p.anchor[0] + dx, p.anchor[1] + dy), p.text, p.style)

    layers = tuple(Layer(l.name, tuple(move(p) for p in l.primitives)) for l in scene.layers)
    return SceneGraph(layers, scene.view_box)


STYLES: dict[str, dict[str, str]] = {
    "fixedOutline": {"stroke": "#4b4b4b", "stroke-width": "2.4", "fill": "none"},
    "outline": {"stroke": "#333333", "stroke-width": "1.6", "fill": "none"},
    "articulator": {"stroke": "#0b6aa8", "stroke-width": "2.0", "fill": "none"},
    "overlay": {"stroke": "#c2452d", "stroke-width": "1.8", "fill": "none",
                "stroke-dasharray": "7 4"},
    "airflow": {"stroke": "#8c8c8c", "stroke-width": "1.6", "fill": "none"},
    "marker": {"fill": "#9a9a9a", "stroke": "none"},
    "badge": {"fill": "#222222", "stroke": "none"},
    "fill": {"fill": "#dce9f4", "stroke": "none"},
    "panelFrame": {"stroke": "#bbbbbb", "stroke-width": "1.0", "fill": "none"},
    "cellContact": {"fill": "#2e6fb0", "stroke": "none"},
    "cellGroove": {"fill": "#b7d4ee", "stroke": "#6d9fca", "stroke-width": "0.6"},
    "cellLateral": {"fill": "#bfdcbf", "stroke": "#7fae7f", "stroke-width": "0.6"},
    "cellEmpty": {"fill": "#f4f4f4", "stroke": "#dddddd", "stroke-width": "0.4"},
    "fold": {"stroke": "#8c3a52", "stroke-width": "2.2", "fill": "none"},
}


def _style_attrs(style: str) -> str:
    attrs = STYLES.get(style, STYLES["outline"])
    return " ".join(f'{k}="{v}"' for k, v in attrs.items())


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def scene_to_svg(scene: SceneGraph, size: int = 640) -> str:
    """Serialize the scene to standalone SVG text, y flipped to screen space."""
    if size <= 0:
        raise ValueError(f"size must be positive, got {size}")
    vx, vy, vw, vh = scene.view_box
    height = float(size)
    width = height * (vw / vh)

    def px(x: float) -> str:
        return f"{(x - vx) / vw * width:.3f}"

    def py(y: float) -> str:
        return f"{(vy + vh - y) / vh * height:.3f}"

    def path_d(points: np.ndarray, closed: bool) -> str:
        parts = [f"M {px(points[0][0])} {py(points[0][1])}"]
        parts.extend(f"L {px(x)} {py(y)}" for x, y in points[1:])
        if closed:
            parts.append("Z")
        return " ".join(parts)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3f}" height="{height:.3f}" '
        f'viewBox="0 0 {width:.3f} {height:.3f}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    for layer in scene.layers:
        lines.append(f'<g id="{_escape(layer.name)}">')
        for prim in layer.primitives:
            if isinstance(prim, Polyline):
                lines.append(f'<path d="{path_d(prim.points, prim.closed)}" {_style_attrs(prim.style)}/>')
            elif isinstance(prim, Region):
                lines.append(f'<path d="{path_d(prim.points, True)}" {_style_attrs(prim.style)}/>')
            elif isinstance(prim, Arrow):
                tx, ty = prim.tail
                hx, hy = prim.head
                vec = np.array([hx - tx, hy - ty])
                norm = float(np.hypot(*vec))
                if norm == 0.0:
                    continue
                u = vec / norm
                wing = 0.35 * min(norm, 0.035)
                left = (hx - u[0] * wing - u[1] * wing * 0.6, hy - u[1] * wing + u[0] * wing * 0.6)
                right = (hx - u[0] * wing + u[1] * wing * 0.6, hy - u[1] * wing - u[0] * wing * 0.6)
                d = (
                    f"M {px(tx)} {py(ty)} L {px(hx)} {py(hy)} "
                    f"M {px(left[0])} {py(left[1])} L {px(hx)} {py(hy)} L {px(right[0])} {py(right[1])}"
                )
                lines.append(f'<path d="{d}" {_style_attrs(prim.style)}/>')
            elif isinstance(prim, Dot):
                r = prim.radius / vh * height
                lines.append(
                    f'<circle cx="{px(prim.center[0])}" cy="{py(prim.center[1])}" r="{r:.3f}" '
                    f"{_style_attrs(prim.style)}/>"
                )
            elif isinstance(prim, Badge):
                lines.append(
                    f'<text x="{px(prim.anchor[0])}" y="{py(prim.anchor[1])}" font-size="{height * 0.024:.3f}" '
                    f'font-family="sans-serif" {_style_attrs(prim.style)}>{_escape(prim.text)}</text>'
                )
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
