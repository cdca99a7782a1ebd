#!/usr/bin/env python3
"""Author the bundled contour library and write src/artic2d/data/contours.json.

The shapes are desk-scale, anatomically plausible curves built from simple
parametric functions. Contact points that must be exact (closure targets
touching fixed structures, the closed velum meeting the pharynx wall, the
closed glottal folds) are constructed by copying vertex floats, so the
loaded library satisfies its contact invariants bit-for-bit.

Run from the repository root:  python tools/generate_contours.py
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from artic2d.geometry import load_prototype_library  # noqa: E402

OUT_PATH = Path(__file__).resolve().parents[1] / "src" / "artic2d" / "data" / "contours.json"

# Anterior-posterior anchor stations (on the k/50 grid so palate vertices
# and target apices share exact float values).
X_DENTAL = 0.105
X_ALVEOLAR = 10 / 50
X_POSTALV = 15 / 50
X_PALATAL = 28 / 50
X_VELAR = 34 / 50

NEAR_GAP = 0.006
CONTACT_TAU = 0.01


def palate_y(x: float) -> float:
    """Hard-palate dome: 0.6556 at both ends, apex 0.78 at x = 0.42."""
    u = (x - 0.10) / 0.64
    return 0.60 + 0.18 * math.sin(math.pi * (0.10 + 0.80 * u))


def qbez(p0, c, p1, n):
    t = np.linspace(0.0, 1.0, n)[:, None]
    p0 = np.asarray(p0, float)
    c = np.asarray(c, float)
    p1 = np.asarray(p1, float)
    return (1 - t) ** 2 * p0 + 2 * (1 - t) * t * c + t**2 * p1


def chain(*segments):
    """Concatenate point arrays, dropping duplicated joints."""
    pts = [np.asarray(segments[0], float)]
    for seg in segments[1:]:
        pts.append(np.asarray(seg, float)[1:])
    return np.vstack(pts)


def contour_doc(name, points, closed=False):
    return {"name": name, "closed": closed, "points": np.asarray(points, float).tolist()}


# ---------------------------------------------------------------------------
# fixed structures

PALATE_XS = [k / 50 for k in range(5, 38)]  # 0.10 .. 0.74
PALATE_PTS = [(x, palate_y(x)) for x in PALATE_XS]
PALATE_END = PALATE_PTS[-1]  # velum root
PALATE_START = PALATE_PTS[0]

TEETH_PTS = [
    PALATE_START,
    (0.106, 0.615),
    (0.108, 0.578),
    (X_DENTAL, 0.54),  # dental contact vertex
    (0.100, 0.528),
    (0.095, 0.525),  # labiodental contact vertex
]

WALL_TOP = (0.93, 0.78)  # velum closed-tip contact vertex
WALL_PTS = [(0.948 - 0.018 * t, 0.14 + 0.64 * t) for t in np.linspace(0.0, 1.0, 13)][:-1]
WALL_PTS.append(WALL_TOP)


# ---------------------------------------------------------------------------
# tongue

BODY_XS = [k / 100 for k in range(15, 79)]  # 64 surface stations, 0.15 .. 0.78
MARK_XS = [54 / 100, 56 / 100, 60 / 100, 64 / 100, 68 / 100, 71 / 100, 74 / 100]


def bump(x, center, width, height):
    if abs(x - center) >= width:
        return 0.0
    return height * math.cos(math.pi * (x - center) / (2 * width)) ** 2


def _vowel_ceiling(x):
    """Highest vocalic tongue surface at x.

    Dorsal closure targets must not dip below any prototype surface, or a
    front-vowel base would briefly open the dorsal gap at small blend
    weights before the closure pulls it shut.
    """
    return max(tongue_surface(v)(x) for v in ("i", "a", "u"))


def tongue_surface(kind):
    """y(x) for the tongue's upper surface, per prototype or closure target."""
    def shape(x):
        s = (x - 0.15) / 0.63
        if kind == "i":
            return 0.40 - 0.06 * s + bump(x, 0.42, 0.34, 0.33)
        if kind == "a":
            return 0.40 - 0.10 * s + bump(x, 0.30, 0.25, 0.06)
        if kind == "u":
            return 0.40 - 0.04 * s + bump(x, 0.62, 0.26, 0.27)
        if kind == "dental":
            return 0.40 - 0.05 * s + bump(x, 0.24, 0.28, 0.16)
        if kind == "alveolar":
            return 0.40 - 0.05 * s + bump(x, 0.28, 0.30, 0.22)
        if kind == "postalveolar":
            return 0.40 - 0.05 * s + bump(x, 0.34, 0.30, 0.26)
        if kind == "palatal":
            base = 0.40 - 0.05 * s + bump(x, X_PALATAL, 0.26, 0.379)
            return min(max(base, _vowel_ceiling(x)), palate_y(x) - 0.004)
        if kind == "velar":
            base = 0.40 - 0.04 * s + bump(x, X_VELAR, 0.28, 0.327)
            return min(max(base, _vowel_ceiling(x)), palate_y(x) - 0.004)
        raise ValueError(kind)

    return shape


ROOT_ENDS = {
    "i": (0.82, 0.24),
    "a": (0.88, 0.26),
    "u": (0.84, 0.25),
    "dental": (0.84, 0.25),
    "alveolar": (0.84, 0.25),
    "postalveolar": (0.84, 0.25),
    "palatal": (0.85, 0.25),
    "velar": (0.85, 0.25),
}


def tongue_body(kind):
    surf = tongue_surface(kind)
    pts = [(x, surf(x)) for x in BODY_XS]
    end = np.array(pts[-1])
    root_end = np.array(ROOT_ENDS[kind])
    ctrl = (root_end[0] + 0.01, (end[1] + root_end[1]) / 2 + 0.03)
    root = qbez(end, ctrl, root_end, 9)[1:]
    return np.vstack([pts, root])


def dorsum_mark(kind):
    surf = tongue_surface(kind)
    return np.array([(x, surf(x)) for x in MARK_XS])


# Exact-contact overrides for dorsal closure targets: the apex vertex copies
# the palate's float value at the shared station.
def with_exact_apex(points, apex_x):
    pts = np.array(points, float)
    for i, (x, _y) in enumerate(pts):
        if x == apex_x:
            pts[i, 1] = palate_y(apex_x)
    return pts


def apical_profile(x, center):
    if x == center:
        return 0.0
    return 0.0025 + 2.0 * (x - center) ** 2


def tongue_tip(kind):
    """23-point tongue-tip blade; closure targets carry an exact apex."""
    if kind in ("i", "a", "u"):
        spec = {
            "i": ((0.115, 0.40), (0.105, 0.47), (0.125, 0.52), (0.15, 0.50), (0.16, 0.44)),
            "a": ((0.115, 0.33), (0.105, 0.37), (0.13, 0.40), (0.15, 0.425), (0.16, 0.42)),
            "u": ((0.115, 0.36), (0.105, 0.41), (0.13, 0.44), (0.15, 0.43), (0.16, 0.40)),
        }[kind]
        s, c1, apex, c2, e = spec
        return chain(qbez(s, c1, apex, 12), qbez(apex, c2, e, 12))
    if kind == "dental":
        s, apex, e = (0.125, 0.44), (X_DENTAL, 0.54), (0.15, 0.50)
        return chain(qbez(s, (0.10, 0.49), apex, 12), qbez(apex, (0.13, 0.545), e, 12))
    if kind in ("alveolar", "postalveolar"):
        center = X_ALVEOLAR if kind == "alveolar" else X_POSTALV
        plateau_xs = [center + d for d in
                      (-0.05, -0.04, -0.03, -0.025, -0.02, -0.015, -0.01, -0.005,
                       0.0, 0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.04, 0.05)]
        plateau = [(x, palate_y(x) - apical_profile(x, center)) for x in plateau_xs]
        rise = [(center - 0.09, palate_y(center) - 0.17),
                (center - 0.075, palate_y(center) - 0.10),
                (center - 0.062, palate_y(center) - 0.05)]
        fall = [(center + 0.062, palate_y(center) - 0.06),
                (center + 0.075, palate_y(center) - 0.11),
                (center + 0.09, palate_y(center) - 0.18)]
        return np.array(rise + plateau + fall)
    raise ValueError(kind)


def body_with_plateau(kind, center):
    """Dorsal closure-target body: palate-hugging plateau, exact apex vertex."""
    surf = tongue_surface(kind)
    pts = []
    for x in BODY_XS:
        if x == center:
            pts.append((x, palate_y(x)))
        elif abs(x - center) <= 0.055:
            pts.append((x, palate_y(x) - apical_profile(x, center)))
        else:
            pts.append((x, surf(x)))
    end = np.array(pts[-1])
    root_end = np.array(ROOT_ENDS[kind])
    ctrl = (root_end[0] + 0.01, (end[1] + root_end[1]) / 2 + 0.03)
    root = qbez(end, ctrl, root_end, 9)[1:]
    return np.vstack([pts, root])


def mark_with_apex(kind, center):
    surf = tongue_surface(kind)
    pts = []
    for x in MARK_XS:
        if x == center:
            pts.append((x, palate_y(x)))
        elif abs(x - center) <= 0.055:
            pts.append((x, palate_y(x) - apical_profile(x, center)))
        else:
            pts.append((x, surf(x)))
    return np.array(pts)


# ---------------------------------------------------------------------------
# lips and jaw

LIP_UPPER_INNER_IDX = 15  # last point of the upper-lip chain
LIP_LOWER_INNER_IDX = 7


def upper_lip(dx, y_inner, inner=None):
    inner_pt = inner if inner is not None else (0.046 + dx, y_inner)
    a = (0.048 + dx, 0.655)
    b = (0.010 + dx, 0.60)
    c = (0.006 + dx, y_inner + 0.025)
    seg1 = qbez(a, (0.018 + dx, 0.632), b, 6)
    seg2 = qbez(b, (0.002 + dx, 0.575), c, 6)
    seg3 = qbez(c, (0.012 + dx, y_inner + 0.002), inner_pt, 6)
    pts = chain(seg1, seg2, seg3)
    assert len(pts) == 16
    return pts


def lower_lip(dx, y_inner, inner=None, back=None):
    inner_pt = inner if inner is not None else (0.046 + dx, y_inner)
    back_pt = back if back is not None else (0.098, y_inner - 0.02)
    a = (0.052 + dx, 0.345)
    b = (0.008 + dx, 0.41)
    seg1 = qbez(a, (0.016 + dx, 0.36), b, 4)
    seg2 = qbez(b, (0.002 + dx, y_inner - 0.004), inner_pt, 5)
    seg3 = qbez(inner_pt, (0.072 + dx * 0.5, y_inner + 0.004), back_pt, 9)
    pts = chain(seg1, seg2, seg3)
    assert len(pts) == 16
    assert tuple(pts[LIP_LOWER_INNER_IDX]) == tuple(np.asarray(inner_pt, float))
    return pts


LIP_PARAMS = {
    "i": {"dx": 0.004, "upper": 0.550, "lower": 0.455},
    "a": {"dx": 0.000, "upper": 0.565, "lower": 0.375},
    "u": {"dx": -0.030, "upper": 0.535, "lower": 0.468},
    "y": {"dx": -0.042, "upper": 0.528, "lower": 0.478},
}

JAW_SHAPE = [
    (0.115, 0.0),  # lower-incisor top, the jaw reference vertex
    (0.100, 0.010),
    (0.088, 0.004),
    (0.080, -0.022),
    (0.085, -0.052),
    (0.100, -0.076),
    (0.115, -0.092),
    (0.110, -0.120),
    (0.085, -0.136),
    (0.055, -0.130),
    (0.035, -0.114),
    (0.025, -0.098),
]
JAW_REF_IDX = 0

JAW_VOCALIC = {"i": 0.50, "a": 0.40, "u": 0.49}
JAW_Y = 0.50
JAW_CONSONANTAL = {
    "bilabial": 0.505,
    "labiodental": 0.505,
    "dental": 0.51,
    "alveolar": 0.51,
    "postalveolar": 0.505,
    "palatal": 0.50,
    "velar": 0.50,
}


def jaw_contour(height):
    return np.array([(x, y + height) for x, y in JAW_SHAPE])


# ---------------------------------------------------------------------------
# velum and larynx

VELUM_ROOT = PALATE_END


def velum(kind):
    if kind == "closed":
        mid, ctrl1, ctrl2, tip = (0.85, 0.725), (0.80, 0.685), (0.90, 0.762), WALL_TOP
    else:
        mid, ctrl1, ctrl2, tip = (0.80, 0.662), (0.77, 0.668), (0.825, 0.648), (0.84, 0.62)
    pts = chain(qbez(VELUM_ROOT, ctrl1, mid, 6), qbez(mid, ctrl2, tip, 7))
    assert len(pts) == 12
    return pts


VELUM_TIP_IDX = 11

LARYNX_DROPS = {"i": 0.0, "a": -0.025, "u": -0.05}  # linear in front-back backness
GLOTTIS_FOLD_IDX = (3, 11)
GLOTTIS_MAX_WIDTH = 0.05


def larynx(fold_gap, drop=0.0):
    half = fold_gap / 2.0
    pts = [
        (0.82, 0.26),
        (0.82, 0.21),
        (0.82, 0.19),
        (0.87 - half, 0.175),  # anterior fold edge
        (0.82, 0.155),
        (0.82, 0.10),
        (0.84, 0.075),
        (0.87, 0.065),
        (0.90, 0.075),
        (0.92, 0.10),
        (0.92, 0.155),
        (0.87 + half, 0.175),  # posterior fold edge
        (0.92, 0.19),
        (0.92, 0.21),
        (0.92, 0.26),
    ]
    return np.array([(x, y + drop) for x, y in pts])


# ---------------------------------------------------------------------------
# assembly

def build_doc() -> dict:
    fixed = {
        "hardPalate": contour_doc("hardPalate", PALATE_PTS),
        "upperTeeth": contour_doc("upperTeeth", TEETH_PTS),
        "rearPharynxWall": contour_doc("rearPharynxWall", WALL_PTS),
    }

    def movable_set(vowel):
        lips = LIP_PARAMS[vowel]
        return {
            "tongueBody": contour_doc("tongueBody", tongue_body(vowel)),
            "tongueTip": contour_doc("tongueTip", tongue_tip(vowel)),
            "tongueDorsumMark": contour_doc("tongueDorsumMark", dorsum_mark(vowel)),
            "lowerJawTeeth": contour_doc("lowerJawTeeth", jaw_contour(JAW_VOCALIC[vowel])),
            "upperLip": contour_doc("upperLip", upper_lip(lips["dx"], lips["upper"])),
            "lowerLip": contour_doc("lowerLip", lower_lip(lips["dx"], lips["lower"])),
            "velum": contour_doc("velum", velum("closed")),
            "larynxGlottis": contour_doc("larynxGlottis", larynx(0.0, LARYNX_DROPS[vowel])),
        }

    vowel_prototypes = {v: movable_set(v) for v in ("i", "a", "u")}

    y = LIP_PARAMS["y"]
    rounding_prototype = {
        "upperLip": contour_doc("upperLip", upper_lip(y["dx"], y["upper"])),
        "lowerLip": contour_doc("lowerLip", lower_lip(y["dx"], y["lower"])),
        "lowerJawTeeth": contour_doc("lowerJawTeeth", jaw_contour(JAW_Y)),
    }

    lip_contact = (0.042, 0.50)
    closure_targets = {
        "bilabial": {
            "upperLip": contour_doc("upperLip", upper_lip(-0.004, 0.50, inner=lip_contact)),
            "lowerLip": contour_doc(
                "lowerLip", lower_lip(-0.004, 0.50, inner=lip_contact, back=(0.098, 0.478))
            ),
        },
        "labiodental": {
            "lowerLip": contour_doc(
                "lowerLip", lower_lip(0.004, 0.505, back=(0.095, 0.525))
            ),
        },
        "dental": {
            "tongueTip": contour_doc("tongueTip", tongue_tip("dental")),
            "tongueBody": contour_doc("tongueBody", tongue_body("dental")),
        },
        "alveolar": {
            "tongueTip": contour_doc("tongueTip", tongue_tip("alveolar")),
            "tongueBody": contour_doc("tongueBody", tongue_body("alveolar")),
        },
        "postalveolar": {
            "tongueTip": contour_doc("tongueTip", tongue_tip("postalveolar")),
            "tongueBody": contour_doc("tongueBody", tongue_body("postalveolar")),
        },
        "palatal": {
            "tongueDorsumMark": contour_doc("tongueDorsumMark", mark_with_apex("palatal", X_PALATAL)),
            "tongueBody": contour_doc("tongueBody", body_with_plateau("palatal", X_PALATAL)),
        },
        "velar": {
            "tongueDorsumMark": contour_doc("tongueDorsumMark", mark_with_apex("velar", X_VELAR)),
            "tongueBody": contour_doc("tongueBody", body_with_plateau("velar", X_VELAR)),
        },
    }

    doc = {
        "schemaVersion": 1,
        "fixed": fixed,
        "vowelPrototypes": vowel_prototypes,
        "roundingPrototype": rounding_prototype,
        "closureTargets": closure_targets,
        "velumExtremes": {
            "closed": contour_doc("velum", velum("closed")),
            "open": contour_doc("velum", velum("open")),
        },
        "glottisExtremes": {
            "closed": contour_doc("larynxGlottis", larynx(0.0)),
            "open": contour_doc("larynxGlottis", larynx(GLOTTIS_MAX_WIDTH)),
        },
        "jawTargets": {"vocalic": dict(JAW_VOCALIC), "consonantal": dict(JAW_CONSONANTAL)},
        "nearGap": NEAR_GAP,
        "contactThreshold": CONTACT_TAU,
        "markers": {
            "lipUpperInner": LIP_UPPER_INNER_IDX,
            "lipLowerInner": LIP_LOWER_INNER_IDX,
            "velumTip": VELUM_TIP_IDX,
            "glottisFolds": list(GLOTTIS_FOLD_IDX),
            "jawRef": JAW_REF_IDX,
        },
        "tongueHalfWidth": {
            "stations": [0.10, 0.18, 0.26, 0.36, 0.48, 0.58, 0.68, 0.74],
            "halfWidth": [0.35, 0.60, 0.72, 0.80, 0.80, 0.76, 0.70, 0.64],
        },
        "placeBands": {
            "bilabial": [-0.06, 0.09],
            "labiodental": [0.06, 0.125],
            "dental": [0.095, 0.15],
            "alveolar": [0.16, 0.24],
            "postalveolar": [0.26, 0.36],
            "palatal": [0.50, 0.62],
            "velar": [0.63, 0.745],
        },
        "airflow": {
            "subglottalDot": [0.87, 0.025],
            "pharynxPath": [[0.905, 0.24], [0.905, 0.40], [0.90, 0.55], [0.885, 0.66]],
            "nasalPath": [
                [0.875, 0.72],
                [0.875, 0.80],
                [0.845, 0.865],
                [0.64, 0.915],
                [0.38, 0.925],
                [0.16, 0.90],
                [0.045, 0.835],
            ],
            "oralStations": [round(0.70 - 0.06 * k, 4) for k in range(12)],
            "oralExit": [[0.0, 0.50], [-0.05, 0.50]],
        },
    }
    return doc


def self_check(doc: dict) -> None:
    lib = load_prototype_library(doc)

    from artic2d.geometry import clearance_to_roof

    palate = lib.fixed["hardPalate"]
    teeth = lib.fixed["upperTeeth"]
    report = []
    for vowel in ("i", "a", "u"):
        body = lib.vowel_prototypes[vowel].movable["tongueBody"]
        gap = clearance_to_roof(body, [palate])
        report.append(f"{vowel}: body-palate gap {gap:.4f}")
        assert gap > 0.03, (vowel, gap)
        tip = lib.vowel_prototypes[vowel].movable["tongueTip"]
        tip_gap = clearance_to_roof(tip, [teeth, palate])
        assert tip_gap > 0.03, (vowel, tip_gap)

    for place in ("alveolar", "postalveolar", "dental"):
        tgt = lib.closure_targets[place]["tongueTip"]
        assert clearance_to_roof(tgt, [teeth, palate]) == 0.0, place
    for place in ("palatal", "velar"):
        tgt = lib.closure_targets[place]["tongueDorsumMark"]
        assert clearance_to_roof(tgt, [palate]) == 0.0, place
        body = lib.closure_targets[place]["tongueBody"]
        assert clearance_to_roof(body, [palate]) == 0.0, place
    assert clearance_to_roof(lib.closure_targets["labiodental"]["lowerLip"], [teeth]) == 0.0

    # no tongue shape may poke through the palate
    for vowel, proto in lib.vowel_prototypes.items():
        for part in ("tongueBody", "tongueTip", "tongueDorsumMark"):
            pts = proto.movable[part].points
            for x, yv in pts:
                if 0.10 <= x <= 0.74:
                    assert yv <= palate_y(float(x)) + 1e-9, (vowel, part, x, yv)
    for place, group in lib.closure_targets.items():
        for part, contour in group.items():
            if part.startswith("tongue"):
                for x, yv in contour.points:
                    if 0.10 <= x <= 0.74:
                        assert yv <= palate_y(float(x)) + 1e-9, (place, part, x, yv)

    # velum extremes: exact closure, visible opening
    from artic2d.geometry import point_to_polyline_distance

    wall = lib.fixed["rearPharynxWall"].points
    tip_idx = int(lib.markers["velumTip"])
    closed_gap = point_to_polyline_distance(lib.velum_extremes["closed"].points[tip_idx], wall)
    open_gap = point_to_polyline_distance(lib.velum_extremes["open"].points[tip_idx], wall)
    assert closed_gap == 0.0, closed_gap
    assert open_gap > 0.05, open_gap
    report.append(f"velopharyngeal opening at full: {open_gap:.4f}")

    i1, i2 = (int(k) for k in lib.markers["glottisFolds"])
    closed_folds = lib.glottis_extremes["closed"].points
    open_folds = lib.glottis_extremes["open"].points
    assert float(np.hypot(*(closed_folds[i1] - closed_folds[i2]))) == 0.0
    assert abs(float(np.hypot(*(open_folds[i1] - open_folds[i2]))) - GLOTTIS_MAX_WIDTH) < 1e-12

    print("\n".join(report))
    print("self-check OK")


def main() -> None:
    doc = build_doc()
    self_check(doc)
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT_PATH, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")
    print(f"wrote {OUT_PATH}")


if __name__ == "__main__":
    main()
