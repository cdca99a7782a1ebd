"""Sagittal, glottal, and palatal visualizations of a solved frame."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import PrototypeLibrary, floor_y, roof_y
from .params import ControlState, ConsonantalControls, DiscreteConstrictionSpec
from .scene import Arrow, Badge, Dot, Polyline, Region, SceneGraph, build_scene, translate_scene
from .solver import ArticulatorFrame

CONTACT = "contact"
NO_CONTACT = "no-contact"
GROOVE = "groove-channel"
LATERAL = "lateral-channel"
LEGEND = (NO_CONTACT, CONTACT, GROOVE, LATERAL)

GROOVE_HALF_SPAN = 0.22  # midsagittal groove, as a fraction of the half palate
LATERAL_MARGIN_SPAN = 0.84  # lateral channels live outside this fraction
BLOCK_EPS = 1e-9

GLOTTAL_MAX_SEPARATION = 0.34
SAGITTAL_VIEW_BOX = (-0.15, -0.05, 1.25, 1.12)
PANEL_VIEW_BOX = (0.0, 0.0, 1.0, 1.0)


class InvalidResolution(ValueError):
    def __init__(self, resolution):
        super().__init__(f"contact grid must be at least 8x16, got {resolution}")


@dataclass(frozen=True)
class ContactMap:
    """EPG-style occupancy grid: rows lateral, columns anterior-posterior."""

    grid: tuple[tuple[str, ...], ...]
    resolution: tuple[int, int]
    legend: tuple[str, ...] = LEGEND

    def cells(self, label: str) -> list[tuple[int, int]]:
        return [
            (r, c)
            for r, row in enumerate(self.grid)
            for c, value in enumerate(row)
            if value == label
        ]

    def to_doc(self) -> dict:
        return {
            "resolution": list(self.resolution),
            "legend": list(self.legend),
            "grid": [list(row) for row in self.grid],
        }


def _movable_polylines(frame: ArticulatorFrame, style: str) -> list[Polyline]:
    return [
        Polyline(c.points, c.closed, style)
        for _name, c in sorted(frame.contours.movable.items())
    ]


def _blockage_x(frame: ArticulatorFrame) -> float | None:
    """Anterior-posterior position of the most posterior full closure."""
    derived = frame.derived
    apertures = {
        "lips": derived.labial_aperture,
        "tongueTip": derived.apical_distance,
        "tongueDorsum": derived.dorsal_distance,
    }
    blocked = [
        con["placeX"]
        for con in frame.annotations["constrictions"]
        if con["manner"] == "full" and apertures[con["articulator"]] <= BLOCK_EPS
    ]
    return max(blocked) if blocked else None


def _airflow_primitives(lib: PrototypeLibrary, frame: ArticulatorFrame) -> list:
    if frame.annotations["lungPressure"] <= 0.0:
        return []
    meta = lib.airflow
    prims: list = [Dot(tuple(meta["subglottalDot"]), 0.016, "marker")]

    trunk = meta["pharynxPath"]
    for tail, head in zip(trunk[:-1], trunk[1:]):
        prims.append(Arrow(tuple(tail), tuple(head)))

    if frame.derived.velopharyngeal_opening > BLOCK_EPS:
        nasal = meta["nasalPath"]
        for tail, head in zip(nasal[:-1], nasal[1:]):
            prims.append(Arrow(tuple(tail), tuple(head)))
        return prims

    fixed = frame.contours.fixed
    movable = frame.contours.movable
    roof = [fixed["hardPalate"], fixed["upperTeeth"], movable["upperLip"]]
    floor = [movable["tongueBody"], movable["tongueTip"], movable["lowerJawTeeth"], movable["lowerLip"]]
    block_x = _blockage_x(frame)
    half = 0.02
    blocked = False
    for x in meta["oralStations"]:
        if block_x is not None and x - half <= block_x:
            blocked = True
            break
        ry = roof_y(roof, x)
        fy = floor_y(floor, x)
        if ry is None or fy is None:
            continue
        gap = ry - fy
        if gap <= BLOCK_EPS:
            blocked = True
            break
        mid = (ry + fy) / 2.0
        prims.append(Arrow((x + half, mid), (x - half, mid)))
    if not blocked and block_x is None:
        (ex0, ey0), (ex1, ey1) = meta["oralExit"]
        prims.append(Arrow((ex0, ey0), (ex1, ey1)))
    return prims


def render_sagittal(
    lib: PrototypeLibrary,
    frame: ArticulatorFrame,
    overlay: ArticulatorFrame | None = None,
    show_airflow: bool = False,
) -> SceneGraph:
    """Midsagittal scene: fixed structures, movables, optional paired overlay.

    With airflow enabled and positive lung pressure, a grey dot marks the
    subglottal pressure and arrows trace the open air path, routed nasally
    whenever the velopharyngeal port is open; arrows never pass a full
    closure.
    """
    layers: list[tuple[str, list]] = [
        (
            "fixed",
            [
                Polyline(c.points, c.closed, "fixedOutline")
                for _n, c in sorted(frame.contours.fixed.items())
            ],
        ),
        ("movable", _movable_polylines(frame, "articulator")),
    ]
    if overlay is not None:
        layers.append(("overlay", _movable_polylines(overlay, "overlay")))
    if show_airflow:
        layers.append(("airflow", _airflow_primitives(lib, frame)))
        badges = []
        if frame.annotations["lungPressure"] > 0.0:
            badges.append(
                Badge((0.78, 0.02), f"pressure {frame.annotations['lungPressure']:.2f}")
            )
        layers.append(("annotations", badges))
    return build_scene(layers, SAGITTAL_VIEW_BOX)


def compute_glottal_view(state: ControlState) -> SceneGraph:
    """Superior (transverse) view of the vocal folds.

    The posterior fold separation scales linearly with glottal aperture:
    open for voiceless sounds, approximated for phonation.
    """
    aperture = max(state.phonatory.glottal_aperture, 0.0)
    sep = aperture * GLOTTAL_MAX_SEPARATION

    theta = np.linspace(0.0, 2.0 * np.pi, 33)
    ring = np.stack([0.5 + 0.30 * np.sin(theta), 0.52 + 0.40 * np.cos(theta)], axis=1)

    commissure = np.array([0.5, 0.80])
    base_y = 0.28
    folds = []
    for side in (-1.0, 1.0):
        end = np.array([0.5 + side * sep / 2.0, base_y])
        ctrl = np.array([0.5 + side * (0.02 + sep * 0.30), 0.56])
        t = np.linspace(0.0, 1.0, 9)[:, None]
        pts = (1 - t) ** 2 * commissure + 2 * (1 - t) * t * ctrl + t**2 * end
        folds.append(Polyline(pts, style="fold"))
    dots = [
        Dot((0.5 - sep / 2.0, base_y), 0.014),
        Dot((0.5 + sep / 2.0, base_y), 0.014),
    ]
    badges = [Badge((0.20, 0.06), f"tension {state.phonatory.vocal_fold_tension:.2f}")]
    if state.phonatory.glottal_aperture < 0.0:
        badges.append(Badge((0.20, 0.01), "tight closure"))
    return build_scene(
        [
            ("outline", [Polyline(ring, closed=True, style="outline")]),
            ("folds", folds + dots),
            ("annotations", badges),
        ],
        PANEL_VIEW_BOX,
    )


def _tongue_clearances(frame: ArticulatorFrame, xs: np.ndarray) -> list:
    palate = frame.contours.fixed["hardPalate"]
    tongue = [
        frame.contours.movable["tongueBody"],
        frame.contours.movable["tongueTip"],
        frame.contours.movable["tongueDorsumMark"],
    ]
    gaps = []
    for x in xs:
        py = roof_y([palate], float(x))
        ty = floor_y(tongue, float(x))
        if py is None or ty is None:
            gaps.append(None)
        else:
            gaps.append(max(0.0, py - ty))
    return gaps


def compute_palatal_contact(
    lib: PrototypeLibrary,
    frame: ArticulatorFrame,
    discrete: DiscreteConstrictionSpec,
    consonantal: ConsonantalControls,
    resolution: tuple[int, int] = (16, 32),
    synthesize_lateral_seal: bool = False,
) -> ContactMap:
    """Estimate tongue-palate contact from the midsagittal frame.

    The tongue is virtually widened by the library's per-station half-width
    profile. A near closure carves a midsagittal groove channel; a lateral
    closure carves channels along both margins. With synthesize_lateral_seal
    the lateral margin rows are sealed shut whenever an apical or dorsal
    full/near closure is engaged; the default reproduces the model's
    apical-only behaviour.
    """
    n_rows, n_cols = int(resolution[0]), int(resolution[1])
    if n_rows < 8 or n_cols < 16:
        raise InvalidResolution(resolution)

    palate_pts = frame.contours.fixed["hardPalate"].points
    x0 = float(np.min(palate_pts[:, 0]))
    x1 = float(np.max(palate_pts[:, 0]))
    xs = x0 + (np.arange(n_cols) + 0.5) / n_cols * (x1 - x0)
    gaps = _tongue_clearances(frame, xs)
    tau = lib.contact_threshold

    positions = (np.arange(n_rows) + 0.5) / n_rows * 2.0 - 1.0

    grid = [[NO_CONTACT] * n_cols for _ in range(n_rows)]
    for j, (x, gap) in enumerate(zip(xs, gaps)):
        if gap is None or gap > tau:
            continue
        width = lib.half_width_at(float(x))
        for r, pos in enumerate(positions):
            if abs(pos) <= width:
                grid[r][j] = CONTACT

    engaged_for_seal = False
    for con in frame.annotations["constrictions"]:
        if con["articulator"] not in ("tongueTip", "tongueDorsum"):
            continue
        place = con["place"]
        manner = con["manner"]
        lo, hi = lib.place_bands[place]
        band_cols = [j for j, x in enumerate(xs) if lo <= x <= hi]
        band_has_contact = any(
            gaps[j] is not None and gaps[j] <= tau for j in band_cols
        )
        if manner in ("full", "near") and band_has_contact:
            engaged_for_seal = True
        if manner == "near":
            for j in band_cols:
                for r, pos in enumerate(positions):
                    if abs(pos) <= GROOVE_HALF_SPAN and grid[r][j] == CONTACT:
                        grid[r][j] = GROOVE
        elif manner == "lateral" and band_has_contact:
            for j in band_cols:
                if gaps[j] is None or gaps[j] > tau:
                    continue
                for r, pos in enumerate(positions):
                    if abs(pos) >= LATERAL_MARGIN_SPAN and grid[r][j] == NO_CONTACT:
                        grid[r][j] = LATERAL

    if synthesize_lateral_seal and engaged_for_seal:
        seal_lo = lib.place_bands["alveolar"][0]
        seal_hi = lib.place_bands["velar"][1]
        margin = max(1, n_rows // 8)
        rows = list(range(margin)) + list(range(n_rows - margin, n_rows))
        for j, x in enumerate(xs):
            if seal_lo <= x <= seal_hi:
                for r in rows:
                    if grid[r][j] == NO_CONTACT:
                        grid[r][j] = CONTACT

    return ContactMap(tuple(tuple(row) for row in grid), (n_rows, n_cols))


def contact_map_to_scene(contact: ContactMap) -> SceneGraph:
    """Palatal-view panel: anterior at top, lateral margins left/right."""
    n_rows, n_cols = contact.resolution
    pad = 0.08
    cell_w = (1.0 - 2 * pad) / n_rows
    cell_h = (1.0 - 2 * pad) / n_cols
    styles = {CONTACT: "cellContact", GROOVE: "cellGroove", LATERAL: "cellLateral", NO_CONTACT: "cellEmpty"}
    cells = []
    for r in range(n_rows):
        for j in range(n_cols):
            x = pad + r * cell_w
            y = 1.0 - pad - (j + 1) * cell_h
            quad = np.array(
                [[x, y], [x + cell_w, y], [x + cell_w, y + cell_h], [x, y + cell_h]]
            )
            cells.append(Region(quad, styles[contact.grid[r][j]]))
    frame_rect = np.array(
        [[pad, pad], [1.0 - pad, pad], [1.0 - pad, 1.0 - pad], [pad, 1.0 - pad]]
    )
    return build_scene(
        [("epgGrid", cells), ("frame", [Polyline(frame_rect, closed=True, style="panelFrame")])],
        PANEL_VIEW_BOX,
    )


def render_composite(
    lib: PrototypeLibrary, frame: ArticulatorFrame, state: ControlState
) -> SceneGraph:
    """Three-panel composite: sagittal, glottal, and palatal views."""
    sagittal = render_sagittal(lib, frame, show_airflow=True)
    glottal = compute_glottal_view(state)
    palatal = contact_map_to_scene(
        compute_palatal_contact(lib, frame, state.discrete, state.consonantal)
    )

    def flatten(scene: SceneGraph, name: str, offset: float, title: str):
        prims = []
        for layer in scene.layers:
            prims.extend(layer.primitives)
        vx, vy, vw, vh = scene.view_box
        prims.append(
            Polyline(
                np.array([[vx, vy], [vx + vw, vy], [vx + vw, vy + vh], [vx, vy + vh]]),
                closed=True,
                style="panelFrame",
            )
        )
        prims.append(Badge((vx + 0.02, vy + vh - 0.045), title))
        moved = translate_scene(SceneGraph((build_scene([(name, prims)]).layers)), offset, 0.0)
        return moved.layers[0]

    spacing = 1.45
    layers = (
        flatten(sagittal, "sagittal", 0.0, "sagittal"),
        flatten(glottal, "glottal", spacing, "glottal"),
        flatten(palatal, "palatal", 2 * spacing, "palatal"),
    )
    sx, sy, sw, sh = SAGITTAL_VIEW_BOX
    return SceneGraph(layers, (sx - 0.02, sy - 0.04, 2 * spacing + 1.0 - sx + 0.06, sh + 0.08))
