"""From control state to articulator geometry: the four-step pipeline.

Step 1a blends the cardinal-vowel prototypes barycentrically, step 1b
refines the lips and jaw toward the rounded /y/ shape, step 2 pulls the
primary articulators toward their place targets, step 3 resolves the jaw
height, and step 4 lets the remaining articulators ride the jaw while
keeping closures exact. Everything here is pure and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .geometry import (
    ArticulatorSet,
    Contour,
    PrototypeLibrary,
    clearance_to_roof,
    point_to_polyline_distance,
)
from .params import ControlState, ConsonantalControls, DiscreteConstrictionSpec

# Vowel-space triangle: /i/ high front, /u/ high back, /a/ low central.
TRI_I = (1.0, 1.0)
TRI_U = (1.0, -1.0)
TRI_A = (-1.0, 0.0)

# (articulator axis, consonantal attr, place attr, manner attr)
CONSTRICTION_AXES = (
    ("lips", "labial_aperture", "lips_place", "lips_manner"),
    ("tongueTip", "tongue_tip_height", "tip_place", "tip_manner"),
    ("tongueDorsum", "tongue_dorsum_height", "dorsum_place", "dorsum_manner"),
)

# Vertical ride on the jaw (step 4); the upper lip is not jaw-borne.
JAW_COUPLING = {
    "tongueBody": 1.0,
    "tongueTip": 1.0,
    "tongueDorsumMark": 1.0,
    "lowerLip": 1.0,
    "upperLip": 0.0,
}


class MissingClosureTarget(KeyError):
    def __init__(self, articulator: str, place: str):
        self.articulator = articulator
        self.place = place
        super().__init__(f"no closure target for ({articulator}, {place})")


@dataclass(frozen=True)
class BarycentricWeights:
    w_i: float
    w_a: float
    w_u: float


@dataclass(frozen=True)
class DerivedScalars:
    """Aperture and position caches, always recomputable from the contours."""

    labial_aperture: float
    apical_distance: float
    dorsal_distance: float
    velopharyngeal_opening: float
    glottal_width: float
    jaw_height: float

    def to_doc(self) -> dict:
        return {
            "labialAperture": self.labial_aperture,
            "apicalDistance": self.apical_distance,
            "dorsalDistance": self.dorsal_distance,
            "velopharyngealOpening": self.velopharyngeal_opening,
            "glottalWidth": self.glottal_width,
            "jawHeight": self.jaw_height,
        }


@dataclass(frozen=True, eq=False)
class ArticulatorFrame:
    contours: ArticulatorSet
    derived: DerivedScalars
    annotations: dict

    def to_doc(self) -> dict:
        return {
            "contours": {
                "fixed": {k: c.to_doc() for k, c in sorted(self.contours.fixed.items())},
                "movable": {k: c.to_doc() for k, c in sorted(self.contours.movable.items())},
            },
            "derived": self.derived.to_doc(),
            "annotations": dict(self.annotations),
        }


def _dot(ax, ay, bx, by):
    return ax * bx + ay * by


def _closest_point_in_triangle(px: float, py: float) -> tuple[float, float]:
    """Orthogonal projection of (px, py) onto the vowel triangle."""
    ax, ay = TRI_I
    bx, by = TRI_U
    cx, cy = TRI_A
    abx, aby = bx - ax, by - ay
    acx, acy = cx - ax, cy - ay
    apx, apy = px - ax, py - ay
    d1 = _dot(abx, aby, apx, apy)
    d2 = _dot(acx, acy, apx, apy)
    if d1 <= 0 and d2 <= 0:
        return ax, ay
    bpx, bpy = px - bx, py - by
    d3 = _dot(abx, aby, bpx, bpy)
    d4 = _dot(acx, acy, bpx, bpy)
    if d3 >= 0 and d4 <= d3:
        return bx, by
    vc = d1 * d4 - d3 * d2
    if vc <= 0 and d1 >= 0 and d3 <= 0:
        v = d1 / (d1 - d3)
        return ax + v * abx, ay + v * aby
    cpx, cpy = px - cx, py - cy
    d5 = _dot(abx, aby, cpx, cpy)
    d6 = _dot(acx, acy, cpx, cpy)
    if d6 >= 0 and d5 <= d6:
        return cx, cy
    vb = d5 * d2 - d1 * d6
    if vb <= 0 and d2 >= 0 and d6 <= 0:
        w = d2 / (d2 - d6)
        return ax + w * acx, ay + w * acy
    va = d3 * d6 - d5 * d4
    if va <= 0 and (d4 - d3) >= 0 and (d5 - d6) >= 0:
        w = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return bx + w * (cx - bx), by + w * (cy - by)
    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    return ax + abx * v + acx * w, ay + aby * v + acy * w


def _raw_weights(px: float, py: float) -> tuple[float, float, float]:
    ix, iy = TRI_I
    ux, uy = TRI_U
    ax, ay = TRI_A
    denom = (uy - ay) * (ix - ax) + (ax - ux) * (iy - ay)
    w_i = ((uy - ay) * (px - ax) + (ax - ux) * (py - ay)) / denom
    w_u = ((ay - iy) * (px - ax) + (ix - ax) * (py - ay)) / denom
    return w_i, 1.0 - w_i - w_u, w_u


def barycentric_weights(high_low: float, front_back: float) -> BarycentricWeights:
    """Convex weights over the /i/, /a/, /u/ prototypes for a vowel point.

    Points outside the triangle are orthogonally projected onto it first,
    so the weights are total over the whole parameter square.
    """
    w_i, w_a, w_u = _raw_weights(high_low, front_back)
    if w_i < 0.0 or w_a < 0.0 or w_u < 0.0:
        px, py = _closest_point_in_triangle(high_low, front_back)
        w_i, w_a, w_u = _raw_weights(px, py)
        w_i = min(1.0, max(0.0, w_i))
        w_u = min(1.0, max(0.0, w_u))
        w_a = min(1.0, max(0.0, 1.0 - w_i - w_u))
    return BarycentricWeights(w_i=w_i, w_a=w_a, w_u=w_u)


def vocalic_blend(lib: PrototypeLibrary, high_low: float, front_back: float) -> ArticulatorSet:
    """Step 1a: vertexwise convex combination of the vowel prototypes."""
    w = barycentric_weights(high_low, front_back)
    protos = lib.vowel_prototypes
    movable: dict[str, Contour] = {}
    for name, ci in protos["i"].movable.items():
        pts = w.w_i * ci.points + w.w_a * protos["a"].movable[name].points
        pts = pts + w.w_u * protos["u"].movable[name].points
        movable[name] = Contour(name, pts, ci.closed)
    return ArticulatorSet(lib.fixed, movable)


def apply_rounding(lib: PrototypeLibrary, aset: ArticulatorSet, rounding: float) -> ArticulatorSet:
    """Step 1b: pull lips and jaw toward the rounded /y/ prototype.

    Negative values spread: the displacement field toward /y/ is applied
    with weight rounding * 0.5, extrapolating away from the rounded shape.
    """
    if rounding == 0.0:
        return aset
    w = rounding if rounding > 0.0 else rounding * 0.5
    updates: dict[str, Contour] = {}
    for name, proto in lib.rounding_prototype.items():
        current = aset.movable[name]
        pts = (1.0 - w) * current.points + w * proto.points
        updates[name] = Contour(name, pts, current.closed)
    return aset.replaced(updates)


def active_constrictions(
    consonantal: ConsonantalControls, discrete: DiscreteConstrictionSpec
) -> list[tuple[str, float, str, str]]:
    """(axis, value, place, manner) for every engaged constriction."""
    out = []
    for axis, c_attr, p_attr, m_attr in CONSTRICTION_AXES:
        c = getattr(consonantal, c_attr)
        if c > 0.0:
            out.append((axis, c, getattr(discrete, p_attr), getattr(discrete, m_attr)))
    return out


def _target_contours(
    lib: PrototypeLibrary, axis: str, place: str, manner: str
) -> dict[str, Contour]:
    if place not in lib.closure_targets:
        raise MissingClosureTarget(axis, place)
    group = lib.closure_targets[place]
    if not group:
        raise MissingClosureTarget(axis, place)
    if manner == "near":
        # A fricative stops short of contact by the library's groove gap;
        # the upper lip keeps its contact-side position.
        shifted = {}
        for name, contour in group.items():
            if name == "upperLip":
                shifted[name] = contour
            else:
                shifted[name] = contour.translated(0.0, -lib.near_gap)
        return shifted
    return group


def apply_constriction(
    lib: PrototypeLibrary,
    aset: ArticulatorSet,
    consonantal: ConsonantalControls,
    discrete: DiscreteConstrictionSpec,
) -> ArticulatorSet:
    """Step 2: interpolate primary articulators toward their place targets."""
    updates: dict[str, Contour] = {}
    for axis, c, place, manner in active_constrictions(consonantal, discrete):
        targets = _target_contours(lib, axis, place, manner)
        for name, target in targets.items():
            current = updates.get(name, aset.movable[name])
            pts = (1.0 - c) * current.points + c * target.points
            updates[name] = Contour(name, pts, current.closed)
    if not updates:
        return aset
    return aset.replaced(updates)


def compute_jaw(
    lib: PrototypeLibrary,
    vocalic_jaw_height: float,
    consonantal: ConsonantalControls,
    discrete: DiscreteConstrictionSpec,
) -> float:
    """Step 3: the most demanding constriction sets the jaw, never lower
    than the vocalic baseline."""
    height = vocalic_jaw_height
    for _axis, c, place, _manner in active_constrictions(consonantal, discrete):
        target = lib.jaw_targets["consonantal"][place]
        height = max(height, (1.0 - c) * vocalic_jaw_height + c * target)
    return height


def _per_articulator_weight(
    lib: PrototypeLibrary,
    consonantal: ConsonantalControls,
    discrete: DiscreteConstrictionSpec,
) -> dict[str, float]:
    weights: dict[str, float] = {}
    for axis, c, place, manner in active_constrictions(consonantal, discrete):
        for name in _target_contours(lib, axis, place, manner):
            weights[name] = max(weights.get(name, 0.0), c)
    return weights


def apply_jaw_coupling(
    lib: PrototypeLibrary,
    aset: ArticulatorSet,
    jaw_delta: float,
    consonantal: ConsonantalControls,
    discrete: DiscreteConstrictionSpec,
) -> ArticulatorSet:
    """Step 4: tongue and lower lip ride the jaw shift.

    An articulator engaged in a constriction rides only the residual
    (1 - c) share, so full closures stay exact after coupling.
    """
    if jaw_delta == 0.0:
        return aset
    weights = _per_articulator_weight(lib, consonantal, discrete)
    updates: dict[str, Contour] = {
        "lowerJawTeeth": aset.movable["lowerJawTeeth"].translated(0.0, jaw_delta)
    }
    for name, kappa in JAW_COUPLING.items():
        if kappa == 0.0:
            continue
        ride = kappa * jaw_delta * (1.0 - weights.get(name, 0.0))
        if ride != 0.0:
            updates[name] = aset.movable[name].translated(0.0, ride)
    return aset.replaced(updates)


def compute_derived(lib: PrototypeLibrary, aset: ArticulatorSet) -> DerivedScalars:
    """Recompute every derived scalar from the contours alone."""
    movable = aset.movable
    fixed = aset.fixed
    iu = int(lib.markers["lipUpperInner"])
    il = int(lib.markers["lipLowerInner"])
    lip_gap = max(0.0, float(movable["upperLip"].points[iu][1] - movable["lowerLip"].points[il][1]))
    teeth_gap = clearance_to_roof(movable["lowerLip"], [fixed["upperTeeth"]])
    vt = int(lib.markers["velumTip"])
    f1, f2 = (int(k) for k in lib.markers["glottisFolds"])
    folds = movable["larynxGlottis"].points
    return DerivedScalars(
        labial_aperture=min(lip_gap, teeth_gap),
        apical_distance=clearance_to_roof(
            movable["tongueTip"], [fixed["upperTeeth"], fixed["hardPalate"]]
        ),
        dorsal_distance=clearance_to_roof(movable["tongueDorsumMark"], [fixed["hardPalate"]]),
        velopharyngeal_opening=point_to_polyline_distance(
            movable["velum"].points[vt], fixed["rearPharynxWall"].points
        ),
        glottal_width=float(np.hypot(*(folds[f1] - folds[f2]))),
        jaw_height=float(movable["lowerJawTeeth"].points[int(lib.markers["jawRef"])][1]),
    )


def solve(lib: PrototypeLibrary, state: ControlState) -> ArticulatorFrame:
    """Run the full pipeline for one control state."""
    voc = state.vocalic
    cons = state.consonantal
    disc = state.discrete
    phon = state.phonatory

    aset = vocalic_blend(lib, voc.high_low, voc.front_back)
    aset = apply_rounding(lib, aset, voc.rounding)
    jaw_ref = int(lib.markers["jawRef"])
    vocalic_jaw = float(aset.movable["lowerJawTeeth"].points[jaw_ref][1])

    aset = apply_constriction(lib, aset, cons, disc)
    jaw_height = compute_jaw(lib, vocalic_jaw, cons, disc)
    aset = apply_jaw_coupling(lib, aset, jaw_height - vocalic_jaw, cons, disc)

    velum_w = max(phon.velum_height, 0.0)
    if velum_w > 0.0:
        closed = lib.velum_extremes["closed"]
        opened = lib.velum_extremes["open"]
        pts = (1.0 - velum_w) * closed.points + velum_w * opened.points
        aset = aset.replaced({"velum": Contour("velum", pts, closed.closed)})

    glottal_w = max(phon.glottal_aperture, 0.0)
    if glottal_w > 0.0:
        delta = lib.glottis_extremes["open"].points - lib.glottis_extremes["closed"].points
        larynx = aset.movable["larynxGlottis"]
        aset = aset.replaced(
            {"larynxGlottis": Contour("larynxGlottis", larynx.points + glottal_w * delta, larynx.closed)}
        )

    constrictions = []
    for axis, c, place, manner in active_constrictions(cons, disc):
        lo, hi = lib.place_bands[place]
        constrictions.append(
            {
                "articulator": axis,
                "place": place,
                "manner": manner,
                "value": c,
                "placeX": (lo + hi) / 2.0,
            }
        )
    annotations = {
        "lungPressure": phon.lung_pressure,
        "vocalFoldTension": phon.vocal_fold_tension,
        "velumTight": phon.velum_height < 0.0,
        "glottalTight": phon.glottal_aperture < 0.0,
        "lateralChannels": [a["articulator"] for a in constrictions if a["manner"] == "lateral"],
        "constrictions": constrictions,
    }
    return ArticulatorFrame(
        contours=aset,
        derived=compute_derived(lib, aset),
        annotations=annotations,
    )
