"""Contour data model, prototype-library schema, loading, and resampling.

Coordinates live in a normalized vocal-tract frame: the unit square with
x = 0 at the anterior lips, x = 1 at the posterior pharynx wall, y = 0
inferior and y = 1 superior. A slack band of 0.25 on every side absorbs
extrapolated lip spreading.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

COORD_MIN = -0.25
COORD_MAX = 1.25

FIXED_NAMES = ("hardPalate", "upperTeeth", "rearPharynxWall")
MOVABLE_NAMES = (
    "tongueBody",
    "tongueTip",
    "tongueDorsumMark",
    "lowerJawTeeth",
    "upperLip",
    "lowerLip",
    "velum",
    "larynxGlottis",
)
VOWEL_PROTOTYPE_NAMES = ("i", "a", "u")
PLACE_NAMES = ("bilabial", "labiodental", "dental", "alveolar", "postalveolar", "palatal", "velar")


class GeometryError(Exception):
    """Base for all contour-library failures."""


class SchemaViolation(GeometryError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class PointCountMismatch(GeometryError):
    def __init__(self, articulator: str, expected: int, got: int):
        self.articulator = articulator
        self.expected = expected
        self.got = got
        super().__init__(f"{articulator}: expected {expected} points, got {got}")


class MissingPrototype(GeometryError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"missing prototype: {name}")


class InvalidCount(GeometryError):
    def __init__(self, n: Any):
        self.n = n
        super().__init__(f"resample needs n >= 2, got {n!r}")


@dataclass(frozen=True, eq=False)
class Contour:
    """A named, ordered 2D polyline in normalized vocal-tract coordinates."""

    name: str
    points: np.ndarray  # (n, 2) float64
    closed: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def translated(self, dx: float, dy: float) -> "Contour":
        return Contour(self.name, self.points + np.array([dx, dy]), self.closed)

    def to_doc(self) -> dict:
        return {"name": self.name, "closed": self.closed, "points": self.points.tolist()}


def validate_contour(c: Contour, path: str) -> None:
    """Eager invariant check for loaded contours."""
    pts = c.points
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise SchemaViolation(path, f"need an (n>=2, 2) point array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise SchemaViolation(path, "non-finite coordinate")
    if np.any(pts < COORD_MIN) or np.any(pts > COORD_MAX):
        raise SchemaViolation(path, f"coordinate outside [{COORD_MIN}, {COORD_MAX}]")
    if np.any(np.all(pts[1:] == pts[:-1], axis=1)):
        raise SchemaViolation(path, "two consecutive identical points")


def lerp_contours(a: Contour, b: Contour, t: float) -> Contour:
    """Vertexwise linear interpolation; requires matched point counts."""
    if len(a) != len(b):
        raise PointCountMismatch(a.name, len(a), len(b))
    return Contour(a.name, (1.0 - t) * a.points + t * b.points, a.closed)


def polyline_length(points: np.ndarray) -> float:
    seg = np.diff(np.asarray(points, dtype=float), axis=0)
    return float(np.sum(np.hypot(seg[:, 0], seg[:, 1])))


def resample(c: Contour, n: int) -> Contour:
    """Redistribute a contour to exactly n points, uniform by arc length.

    Endpoints are preserved exactly. The point list is treated as an open
    polyline; a closed contour keeps its implied closing edge out of the
    arc-length budget.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidCount(n)
    pts = c.points
    seg = np.diff(pts, axis=0)
    seglen = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    total = cum[-1]
    out = np.empty((n, 2))
    out[0] = pts[0]
    out[-1] = pts[-1]
    targets = np.arange(1, n - 1) * (total / (n - 1))
    idx = np.searchsorted(cum, targets, side="right") - 1
    idx = np.clip(idx, 0, len(seglen) - 1)
    frac = (targets - cum[idx]) / np.where(seglen[idx] > 0, seglen[idx], 1.0)
    out[1:-1] = pts[idx] + frac[:, None] * seg[idx]
    return Contour(c.name, out, c.closed)


# ---------------------------------------------------------------------------
# measurement helpers shared by the solver and the views


def station_ys(points: np.ndarray, x: float) -> list[float]:
    """All y values where the polyline crosses the vertical line at x.

    Exact at vertices: a crossing that lands on a polyline vertex returns
    that vertex's stored y bit-for-bit.
    """
    ys: list[float] = []
    pts = np.asarray(points, dtype=float)
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        if (x0 <= x <= x1) or (x1 <= x <= x0):
            if x == x0:
                ys.append(float(y0))
            elif x == x1:
                ys.append(float(y1))
            elif x0 != x1:
                t = (x - x0) / (x1 - x0)
                ys.append(float(y0 + t * (y1 - y0)))
    return ys


def roof_y(contours: Iterable[Contour], x: float) -> float | None:
    """Lowest surface point of the given roof contours at station x."""
    ys = [y for c in contours for y in station_ys(c.points, x)]
    return min(ys) if ys else None


def floor_y(contours: Iterable[Contour], x: float) -> float | None:
    """Highest surface point of the given floor contours at station x."""
    ys = [y for c in contours for y in station_ys(c.points, x)]
    return max(ys) if ys else None


def clearance_to_roof(moving: Contour, roof: Iterable[Contour]) -> float:
    """Smallest vertical gap from the contour's vertices up to a roof.

    Vertices outside the roof's x-domain are ignored; penetration clamps
    to zero. Exact zero when a moving vertex coincides with a roof vertex.
    """
    roof = list(roof)
    best = None
    for x, y in moving.points:
        ry = roof_y(roof, float(x))
        if ry is None:
            continue
        gap = ry - float(y)
        if best is None or gap < best:
            best = gap
    if best is None:
        return float("inf")
    return max(0.0, best)


def point_to_polyline_distance(p: np.ndarray, points: np.ndarray) -> float:
    """Euclidean distance from a point to the nearest polyline segment."""
    p = np.asarray(p, dtype=float)
    pts = np.asarray(points, dtype=float)
    a = pts[:-1]
    b = pts[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.where(denom > 0, np.einsum("ij,ij->i", p - a, ab) / np.where(denom > 0, denom, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[:, None] * ab
    d = np.hypot(proj[:, 0] - p[0], proj[:, 1] - p[1])
    return float(np.min(d))


def min_contour_distance(a: Contour, b: Contour) -> float:
    """Minimum vertex-to-segment distance between two contours."""
    d1 = min(point_to_polyline_distance(p, b.points) for p in a.points)
    d2 = min(point_to_polyline_distance(p, a.points) for p in b.points)
    return min(d1, d2)


# ---------------------------------------------------------------------------
# the prototype library


@dataclass(frozen=True, eq=False)
class ArticulatorSet:
    """One complete configuration: shared fixed structures + movables."""

    fixed: dict[str, Contour]
    movable: dict[str, Contour]

    def replaced(self, updates: Mapping[str, Contour]) -> "ArticulatorSet":
        movable = dict(self.movable)
        movable.update(updates)
        return ArticulatorSet(self.fixed, movable)


@dataclass(frozen=True, eq=False)
class PrototypeLibrary:
    """Validated reference geometry; immutable after load."""

    fixed: dict[str, Contour]
    vowel_prototypes: dict[str, ArticulatorSet]
    rounding_prototype: dict[str, Contour]
    closure_targets: dict[str, dict[str, Contour]]
    velum_extremes: dict[str, Contour]
    glottis_extremes: dict[str, Contour]
    jaw_targets: dict[str, dict[str, float]]
    near_gap: float
    contact_threshold: float
    markers: dict[str, Any]
    half_width_stations: np.ndarray
    half_width_values: np.ndarray
    place_bands: dict[str, tuple[float, float]]
    airflow: dict[str, Any]
    source_doc: dict = field(repr=False, default_factory=dict)

    def movable_point_count(self, name: str) -> int:
        return len(self.vowel_prototypes["i"].movable[name])

    def half_width_at(self, x: float) -> float:
        return float(np.interp(x, self.half_width_stations, self.half_width_values))

    def to_doc(self) -> dict:
        """Serialize back to the on-disk schema (round-trippable)."""
        return json.loads(json.dumps(self.source_doc))


def default_data_dir() -> Path:
    return Path(__file__).parent / "data"


def _as_doc(source: Any) -> dict:
    if isinstance(source, Mapping):
        return dict(source)
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return json.load(fh)
    if hasattr(source, "read"):
        return json.load(source)
    raise SchemaViolation("$", f"unreadable source: {type(source).__name__}")


def _parse_contour(doc: Any, path: str, expected_name: str | None = None) -> Contour:
    if not isinstance(doc, Mapping):
        raise SchemaViolation(path, "contour must be an object")
    for key in ("name", "closed", "points"):
        if key not in doc:
            raise SchemaViolation(path, f"missing key {key!r}")
    name = doc["name"]
    if expected_name is not None and name != expected_name:
        raise SchemaViolation(path, f"contour named {name!r}, expected {expected_name!r}")
    try:
        pts = np.asarray(doc["points"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaViolation(path, f"bad point array: {exc}") from None
    c = Contour(name, pts, bool(doc["closed"]))
    validate_contour(c, path)
    return c


def _parse_contour_group(
    doc: Any, path: str, required: Iterable[str], keys_are_names: bool = True
) -> dict[str, Contour]:
    if not isinstance(doc, Mapping):
        raise SchemaViolation(path, "expected an object of contours")
    out: dict[str, Contour] = {}
    for name in required:
        if name not in doc:
            raise SchemaViolation(path, f"missing contour {name!r}")
        out[name] = _parse_contour(doc[name], f"{path}.{name}", expected_name=name)
    for name in doc:
        if name not in out:
            expected = name if keys_are_names else None
            out[name] = _parse_contour(doc[name], f"{path}.{name}", expected_name=expected)
    return out


CONTACT_EPSILON = 1e-6  # closure targets must actually touch their fixed structure

_TARGET_ROOF = {
    "dental": ("upperTeeth",),
    "alveolar": ("hardPalate",),
    "postalveolar": ("hardPalate",),
    "palatal": ("hardPalate",),
    "velar": ("hardPalate",),
    "labiodental": ("upperTeeth",),
}


def load_prototype_library(source: Any) -> PrototypeLibrary:
    """Load and eagerly validate a contour data document.

    Raises SchemaViolation, PointCountMismatch, or MissingPrototype; a
    library that loads is safe for unrestricted shared use.
    """
    doc = _as_doc(source)
    if doc.get("schemaVersion") != 1:
        raise SchemaViolation("schemaVersion", f"expected 1, got {doc.get('schemaVersion')!r}")
    for key in (
        "fixed",
        "vowelPrototypes",
        "roundingPrototype",
        "closureTargets",
        "velumExtremes",
        "glottisExtremes",
        "jawTargets",
    ):
        if key not in doc:
            raise SchemaViolation(key, "missing top-level key")

    fixed = _parse_contour_group(doc["fixed"], "fixed", FIXED_NAMES)

    vowels_doc = doc["vowelPrototypes"]
    if not isinstance(vowels_doc, Mapping):
        raise SchemaViolation("vowelPrototypes", "expected an object")
    prototypes: dict[str, ArticulatorSet] = {}
    for vowel in VOWEL_PROTOTYPE_NAMES:
        if vowel not in vowels_doc:
            raise MissingPrototype(vowel)
        movable = _parse_contour_group(vowels_doc[vowel], f"vowelPrototypes.{vowel}", MOVABLE_NAMES)
        prototypes[vowel] = ArticulatorSet(fixed, movable)

    counts = {name: len(prototypes["i"].movable[name]) for name in MOVABLE_NAMES}
    for vowel, proto in prototypes.items():
        for name, contour in proto.movable.items():
            if name in counts and len(contour) != counts[name]:
                raise PointCountMismatch(name, counts[name], len(contour))

    rounding = _parse_contour_group(
        doc["roundingPrototype"], "roundingPrototype", ("upperLip", "lowerLip", "lowerJawTeeth")
    )
    targets_doc = doc["closureTargets"]
    if not isinstance(targets_doc, Mapping):
        raise SchemaViolation("closureTargets", "expected an object")
    targets: dict[str, dict[str, Contour]] = {}
    for place in PLACE_NAMES:
        if place not in targets_doc:
            raise MissingPrototype(place)
        targets[place] = _parse_contour_group(targets_doc[place], f"closureTargets.{place}", ())
    velum_extremes = _parse_contour_group(
        doc["velumExtremes"], "velumExtremes", (), keys_are_names=False
    )
    glottis_extremes = _parse_contour_group(
        doc["glottisExtremes"], "glottisExtremes", (), keys_are_names=False
    )
    for group, path in ((velum_extremes, "velumExtremes"), (glottis_extremes, "glottisExtremes")):
        for key in ("closed", "open"):
            if key not in group:
                raise SchemaViolation(path, f"missing {key!r} extreme")

    # Every stored variant of a movable articulator shares its point count.
    def check_count(contour: Contour, name: str) -> None:
        if name in counts and len(contour) != counts[name]:
            raise PointCountMismatch(name, counts[name], len(contour))

    for name, contour in rounding.items():
        check_count(contour, name)
    for place, group in targets.items():
        for name, contour in group.items():
            check_count(contour, name)
    check_count(velum_extremes["closed"], "velum")
    check_count(velum_extremes["open"], "velum")
    check_count(glottis_extremes["closed"], "larynxGlottis")
    check_count(glottis_extremes["open"], "larynxGlottis")

    jaw_doc = doc["jawTargets"]
    if not isinstance(jaw_doc, Mapping) or "vocalic" not in jaw_doc or "consonantal" not in jaw_doc:
        raise SchemaViolation("jawTargets", "need 'vocalic' and 'consonantal' height tables")
    jaw_targets = {
        "vocalic": {k: float(v) for k, v in jaw_doc["vocalic"].items()},
        "consonantal": {k: float(v) for k, v in jaw_doc["consonantal"].items()},
    }
    for place in PLACE_NAMES:
        if place not in jaw_targets["consonantal"]:
            raise SchemaViolation(f"jawTargets.consonantal.{place}", "missing jaw height")

    markers = dict(doc.get("markers", {}))
    for key in ("lipUpperInner", "lipLowerInner", "velumTip", "glottisFolds", "jawRef"):
        if key not in markers:
            raise SchemaViolation(f"markers.{key}", "missing marker")

    half = doc.get("tongueHalfWidth", {})
    stations = np.asarray(half.get("stations", []), dtype=float)
    widths = np.asarray(half.get("halfWidth", []), dtype=float)
    if stations.size < 2 or stations.shape != widths.shape:
        raise SchemaViolation("tongueHalfWidth", "need matching stations/halfWidth arrays")

    bands_doc = doc.get("placeBands", {})
    place_bands: dict[str, tuple[float, float]] = {}
    for place in PLACE_NAMES:
        if place not in bands_doc:
            raise SchemaViolation(f"placeBands.{place}", "missing band")
        lo, hi = bands_doc[place]
        place_bands[place] = (float(lo), float(hi))

    lib = PrototypeLibrary(
        fixed=fixed,
        vowel_prototypes=prototypes,
        rounding_prototype=rounding,
        closure_targets=targets,
        velum_extremes=velum_extremes,
        glottis_extremes=glottis_extremes,
        jaw_targets=jaw_targets,
        near_gap=float(doc.get("nearGap", 0.006)),
        contact_threshold=float(doc.get("contactThreshold", 0.01)),
        markers=markers,
        half_width_stations=stations,
        half_width_values=widths,
        place_bands=place_bands,
        airflow=dict(doc.get("airflow", {})),
        source_doc=doc,
    )
    _check_contact_invariants(lib)
    return lib


def _check_contact_invariants(lib: PrototypeLibrary) -> None:
    """Closure targets must lie in contact with their fixed structures."""
    for place, roof_names in _TARGET_ROOF.items():
        group = lib.closure_targets[place]
        roof = [lib.fixed[name] for name in roof_names]
        primary = "tongueTip" if place in ("dental", "alveolar", "postalveolar") else None
        if place in ("palatal", "velar"):
            primary = "tongueDorsumMark"
        if place == "labiodental":
            primary = "lowerLip"
        if primary is None or primary not in group:
            raise SchemaViolation(f"closureTargets.{place}", "missing primary articulator contour")
        gap = clearance_to_roof(group[primary], roof)
        if gap > CONTACT_EPSILON:
            raise SchemaViolation(
                f"closureTargets.{place}", f"target clears its fixed structure by {gap:.2e}"
            )
    bil = lib.closure_targets["bilabial"]
    if "upperLip" not in bil or "lowerLip" not in bil:
        raise SchemaViolation("closureTargets.bilabial", "need upperLip and lowerLip contours")
    iu = int(lib.markers["lipUpperInner"])
    il = int(lib.markers["lipLowerInner"])
    gap = float(np.hypot(*(bil["upperLip"].points[iu] - bil["lowerLip"].points[il])))
    if gap > CONTACT_EPSILON:
        raise SchemaViolation("closureTargets.bilabial", f"lip margins {gap:.2e} apart at closure")
