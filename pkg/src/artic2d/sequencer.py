"""Keyframe timelines from phoneme strings, and animation-frame sampling.

Each phoneme holds for most of its segment; consecutive segments are
joined by a smoothstep transition spanning a fraction of the segment
duration around the boundary. Sampling is stateless per time point, so
frames at keyframe times reproduce a direct solve bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from dataclasses import replace as _replace

from . import params
from .params import ControlState, VocalicControls
from .presets import PhonemeInventory
from .solver import ArticulatorFrame, solve

DEFAULT_SEGMENT_DURATION = 0.15
DEFAULT_TRANSITION_FRACTION = 0.4

CURVES = ("linear", "smoothstep")


class InvalidTiming(ValueError):
    pass


def _coarticulate(entries) -> list[ControlState]:
    """Fill each consonant segment's vocalic context from flanking vowels.

    Consonant presets are stored with a neutral vocalic posture; in a
    sequence they occur in vocalic context, so the tongue and lips keep the
    nearest vowel's configuration while the constriction is formed. The
    preceding vowel wins, then the following one; rounding keeps whichever
    is stronger so a consonant's own lip posture survives.
    """
    vowel_context: list[VocalicControls | None] = [None] * len(entries)
    last: VocalicControls | None = None
    for i, entry in enumerate(entries):
        if entry.phoneme_class == "vowel":
            last = entry.state.vocalic
        vowel_context[i] = last
    upcoming: VocalicControls | None = None
    for i in range(len(entries) - 1, -1, -1):
        if entries[i].phoneme_class == "vowel":
            upcoming = entries[i].state.vocalic
        elif vowel_context[i] is None:
            vowel_context[i] = upcoming

    states = []
    for entry, context in zip(entries, vowel_context):
        state = entry.state
        if entry.phoneme_class != "vowel" and context is not None:
            rounding = max(state.vocalic.rounding, context.rounding, key=abs)
            state = _replace(
                state,
                vocalic=VocalicControls(context.high_low, context.front_back, rounding),
            )
        states.append(state)
    return states


@dataclass(frozen=True)
class Keyframe:
    time: float
    state: ControlState
    curve: str = "linear"  # interpolation used on the segment leaving this keyframe

    def __post_init__(self):
        if not math.isfinite(self.time) or self.time < 0.0:
            raise InvalidTiming(f"keyframe time must be finite and >= 0, got {self.time}")
        if self.curve not in CURVES:
            raise InvalidTiming(f"unknown curve {self.curve!r}")


@dataclass(frozen=True)
class Timeline:
    keyframes: tuple[Keyframe, ...]

    def __post_init__(self):
        if len(self.keyframes) < 1:
            raise InvalidTiming("timeline needs at least one keyframe")
        times = [k.time for k in self.keyframes]
        if any(b <= a for a, b in zip(times[:-1], times[1:])):
            raise InvalidTiming(f"keyframe times must be strictly increasing: {times}")

    @property
    def span(self) -> float:
        return self.keyframes[-1].time

    def state_at(self, t: float) -> ControlState:
        """Control state at time t; clamped to the timeline's ends."""
        frames = self.keyframes
        if t <= frames[0].time:
            return frames[0].state
        if t >= frames[-1].time:
            return frames[-1].state
        for a, b in zip(frames[:-1], frames[1:]):
            if a.time <= t <= b.time:
                u = (t - a.time) / (b.time - a.time)
                if a.curve == "smoothstep":
                    u = u * u * (3.0 - 2.0 * u)
                return params.blend(a.state, b.state, u)
        raise AssertionError("unreachable: keyframes are ordered")


def from_phoneme_string(
    inventory: PhonemeInventory,
    symbols: str,
    segment_duration: float = DEFAULT_SEGMENT_DURATION,
    transition_fraction: float = DEFAULT_TRANSITION_FRACTION,
) -> Timeline:
    """Build a hold/transition timeline for a SAMPA symbol sequence.

    Each symbol occupies one segment; the hold pair of keyframes is pulled
    in by half the transition width on interior boundaries. Raises
    UnknownPhoneme for unresolvable symbols and InvalidTiming for an empty
    sequence or bad timing parameters.
    """
    if not symbols:
        raise InvalidTiming("empty phoneme sequence")
    if not segment_duration > 0.0:
        raise InvalidTiming(f"segmentDuration must be positive, got {segment_duration}")
    if not 0.0 < transition_fraction < 1.0:
        raise InvalidTiming(f"transitionFraction must be in (0, 1), got {transition_fraction}")

    entries = [inventory.lookup(symbol) for symbol in symbols]
    states = _coarticulate(entries)
    half = transition_fraction * segment_duration / 2.0
    n = len(states)
    keyframes: list[Keyframe] = []
    for k, state in enumerate(states):
        start = k * segment_duration + (half if k > 0 else 0.0)
        end = (k + 1) * segment_duration - (half if k < n - 1 else 0.0)
        keyframes.append(Keyframe(start, state, "linear"))
        keyframes.append(Keyframe(end, state, "smoothstep"))
    return Timeline(tuple(keyframes))


def sample_times(timeline: Timeline, fps: float) -> list[float]:
    """The fps grid over the timeline span, plus the exact final time."""
    if not fps > 0.0:
        raise InvalidTiming(f"fps must be positive, got {fps}")
    span = timeline.span
    count = int(math.floor(span * fps + 1e-9))
    times = [i / fps for i in range(count + 1)]
    if times[-1] < span - 1e-12:
        times.append(span)
    return times


def sample_states(timeline: Timeline, fps: float) -> list[tuple[float, ControlState]]:
    return [(t, timeline.state_at(t)) for t in sample_times(timeline, fps)]


def sample_frames(lib, timeline: Timeline, fps: float) -> list[tuple[float, ArticulatorFrame]]:
    """Solve one frame per sampled time point."""
    return [(t, solve(lib, state)) for t, state in sample_states(timeline, fps)]
