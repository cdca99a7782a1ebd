"""Control-parameter state: validation, the neutral state, and blending.

The articulatory command is ten continuous scalars (three vocalic, three
consonantal, four phonatory) plus six discrete place/manner labels. All
types are immutable values and every operation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

LIPS_PLACES = ("bilabial", "labiodental")
LIPS_MANNERS = ("full", "near")
TIP_PLACES = ("dental", "alveolar", "postalveolar")
TIP_MANNERS = ("full", "near", "lateral")
DORSUM_PLACES = ("palatal", "velar")
DORSUM_MANNERS = ("full", "near")

# Serialized field name -> (attribute path, closed interval).
CONTINUOUS_FIELDS: dict[str, tuple[tuple[str, str], tuple[float, float]]] = {
    "highLow": (("vocalic", "high_low"), (-1.0, 1.0)),
    "frontBack": (("vocalic", "front_back"), (-1.0, 1.0)),
    "rounding": (("vocalic", "rounding"), (-1.0, 1.0)),
    "labialAperture": (("consonantal", "labial_aperture"), (0.0, 1.0)),
    "tongueTipHeight": (("consonantal", "tongue_tip_height"), (0.0, 1.0)),
    "tongueDorsumHeight": (("consonantal", "tongue_dorsum_height"), (0.0, 1.0)),
    "velumHeight": (("phonatory", "velum_height"), (-1.0, 1.0)),
    "glottalAperture": (("phonatory", "glottal_aperture"), (-1.0, 1.0)),
    "vocalFoldTension": (("phonatory", "vocal_fold_tension"), (0.0, 1.0)),
    "lungPressure": (("phonatory", "lung_pressure"), (0.0, 1.0)),
}

DISCRETE_FIELDS: dict[str, tuple[str, tuple[str, ...]]] = {
    "lipsPlace": ("lips_place", LIPS_PLACES),
    "lipsManner": ("lips_manner", LIPS_MANNERS),
    "tipPlace": ("tip_place", TIP_PLACES),
    "tipManner": ("tip_manner", TIP_MANNERS),
    "dorsumPlace": ("dorsum_place", DORSUM_PLACES),
    "dorsumManner": ("dorsum_manner", DORSUM_MANNERS),
}


@dataclass(frozen=True)
class Violation:
    """One validation failure: what kind, which field, what was allowed."""

    kind: str  # "outOfRange" | "unknownLabel" | "missingField" | "unknownField"
    field: str
    value: Any = None
    allowed: Any = None

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "field": self.field,
            "value": self.value,
            "allowed": list(self.allowed) if self.allowed is not None else None,
        }


class ValidationError(ValueError):
    """Carries every violation found; validation never fails fast."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        summary = "; ".join(f"{v.kind}({v.field})" for v in violations)
        super().__init__(f"invalid control state: {summary}")


@dataclass(frozen=True)
class VocalicControls:
    high_low: float = 0.0
    front_back: float = 0.0
    rounding: float = 0.0


@dataclass(frozen=True)
class ConsonantalControls:
    labial_aperture: float = 0.0
    tongue_tip_height: float = 0.0
    tongue_dorsum_height: float = 0.0


@dataclass(frozen=True)
class DiscreteConstrictionSpec:
    lips_place: str = "bilabial"
    lips_manner: str = "full"
    tip_place: str = "alveolar"
    tip_manner: str = "full"
    dorsum_place: str = "velar"
    dorsum_manner: str = "full"


@dataclass(frozen=True)
class PhonatoryControls:
    velum_height: float = 0.0
    glottal_aperture: float = 0.0
    vocal_fold_tension: float = 0.0
    lung_pressure: float = 0.0


@dataclass(frozen=True)
class ControlState:
    """Complete articulatory command: 10 continuous values + 6 labels."""

    vocalic: VocalicControls = field(default_factory=VocalicControls)
    consonantal: ConsonantalControls = field(default_factory=ConsonantalControls)
    discrete: DiscreteConstrictionSpec = field(default_factory=DiscreteConstrictionSpec)
    phonatory: PhonatoryControls = field(default_factory=PhonatoryControls)

    def to_doc(self) -> dict:
        """Flat canonical document with exactly the 16 serialized fields."""
        doc: dict[str, Any] = {}
        for name, ((group, attr), _rng) in CONTINUOUS_FIELDS.items():
            doc[name] = getattr(getattr(self, group), attr)
        for name, (attr, _labels) in DISCRETE_FIELDS.items():
            doc[name] = getattr(self.discrete, attr)
        return doc


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def validate(raw: Mapping[str, Any]) -> ControlState:
    """Check a flat control-state document against the model's ranges.

    Returns the verified ControlState, or raises ValidationError listing
    every violation at once. Values are never clamped; unknown keys are
    rejected.
    """
    violations: list[Violation] = []
    continuous: dict[str, float] = {}
    discrete: dict[str, str] = {}

    for name, (_path, (lo, hi)) in CONTINUOUS_FIELDS.items():
        if name not in raw:
            violations.append(Violation("missingField", name, allowed=(lo, hi)))
            continue
        value = raw[name]
        if not _is_number(value) or not math.isfinite(value) or not lo <= value <= hi:
            violations.append(Violation("outOfRange", name, value, (lo, hi)))
            continue
        continuous[name] = float(value)

    for name, (_attr, labels) in DISCRETE_FIELDS.items():
        if name not in raw:
            violations.append(Violation("missingField", name, allowed=labels))
            continue
        value = raw[name]
        if value not in labels:
            violations.append(Violation("unknownLabel", name, value, labels))
            continue
        discrete[name] = value

    known = set(CONTINUOUS_FIELDS) | set(DISCRETE_FIELDS)
    for name in raw:
        if name not in known:
            violations.append(Violation("unknownField", name, raw[name]))

    if violations:
        raise ValidationError(violations)

    return ControlState(
        vocalic=VocalicControls(
            high_low=continuous["highLow"],
            front_back=continuous["frontBack"],
            rounding=continuous["rounding"],
        ),
        consonantal=ConsonantalControls(
            labial_aperture=continuous["labialAperture"],
            tongue_tip_height=continuous["tongueTipHeight"],
            tongue_dorsum_height=continuous["tongueDorsumHeight"],
        ),
        discrete=DiscreteConstrictionSpec(
            lips_place=discrete["lipsPlace"],
            lips_manner=discrete["lipsManner"],
            tip_place=discrete["tipPlace"],
            tip_manner=discrete["tipManner"],
            dorsum_place=discrete["dorsumPlace"],
            dorsum_manner=discrete["dorsumManner"],
        ),
        phonatory=PhonatoryControls(
            velum_height=continuous["velumHeight"],
            glottal_aperture=continuous["glottalAperture"],
            vocal_fold_tension=continuous["vocalFoldTension"],
            lung_pressure=continuous["lungPressure"],
        ),
    )


def neutral() -> ControlState:
    """The rest configuration: every continuous parameter 0, default labels."""
    return ControlState()


def _lerp(a: float, b: float, t: float) -> float:
    return (1.0 - t) * a + t * b


def blend(a: ControlState, b: ControlState, t: float) -> ControlState:
    """Interpolate two control states.

    Continuous fields blend componentwise and linearly; discrete labels
    switch from a to b at t = 0.5. Exact at both endpoints.
    """
    if not _is_number(t) or not 0.0 <= t <= 1.0:
        raise ValidationError([Violation("outOfRange", "t", t, (0.0, 1.0))])
    pick = a.discrete if t < 0.5 else b.discrete
    return ControlState(
        vocalic=VocalicControls(
            high_low=_lerp(a.vocalic.high_low, b.vocalic.high_low, t),
            front_back=_lerp(a.vocalic.front_back, b.vocalic.front_back, t),
            rounding=_lerp(a.vocalic.rounding, b.vocalic.rounding, t),
        ),
        consonantal=ConsonantalControls(
            labial_aperture=_lerp(a.consonantal.labial_aperture, b.consonantal.labial_aperture, t),
            tongue_tip_height=_lerp(a.consonantal.tongue_tip_height, b.consonantal.tongue_tip_height, t),
            tongue_dorsum_height=_lerp(
                a.consonantal.tongue_dorsum_height, b.consonantal.tongue_dorsum_height, t
            ),
        ),
        discrete=pick,
        phonatory=PhonatoryControls(
            velum_height=_lerp(a.phonatory.velum_height, b.phonatory.velum_height, t),
            glottal_aperture=_lerp(a.phonatory.glottal_aperture, b.phonatory.glottal_aperture, t),
            vocal_fold_tension=_lerp(
                a.phonatory.vocal_fold_tension, b.phonatory.vocal_fold_tension, t
            ),
            lung_pressure=_lerp(a.phonatory.lung_pressure, b.phonatory.lung_pressure, t),
        ),
    )
