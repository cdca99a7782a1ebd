from __future__ import annotations

import math

import numpy as np
import pytest

from artic2d import params
from artic2d.presets import UnknownPhoneme
from artic2d.sequencer import (
    InvalidTiming,
    Keyframe,
    Timeline,
    from_phoneme_string,
    sample_frames,
    sample_states,
    sample_times,
)
from artic2d.solver import solve


def test_ta_timeline_keyframe_layout(inventory):
    timeline = from_phoneme_string(inventory, "ta", segment_duration=0.2, transition_fraction=0.4)
    times = [k.time for k in timeline.keyframes]
    # hold-transition construction: boundary at 0.2 with a 0.08 s transition
    assert times == pytest.approx([0.0, 0.16, 0.24, 0.4], abs=1e-12)
    assert timeline.span == pytest.approx(0.4)
    assert len(timeline.keyframes) == 4


def test_single_symbol_yields_one_hold_pair(inventory):
    timeline = from_phoneme_string(inventory, "a", segment_duration=0.2)
    times = [k.time for k in timeline.keyframes]
    assert times == [0.0, 0.2]
    assert timeline.keyframes[0].state == timeline.keyframes[1].state


def test_empty_sequence_is_invalid(inventory):
    with pytest.raises(InvalidTiming):
        from_phoneme_string(inventory, "")


def test_unknown_symbol_propagates(inventory):
    with pytest.raises(UnknownPhoneme):
        from_phoneme_string(inventory, "tqa")


def test_bad_timing_parameters_rejected(inventory):
    with pytest.raises(InvalidTiming):
        from_phoneme_string(inventory, "ta", segment_duration=0.0)
    with pytest.raises(InvalidTiming):
        from_phoneme_string(inventory, "ta", transition_fraction=1.0)


def test_timeline_requires_strictly_increasing_times():
    state = params.neutral()
    with pytest.raises(InvalidTiming):
        Timeline((Keyframe(0.0, state), Keyframe(0.0, state)))
    with pytest.raises(InvalidTiming):
        Timeline(())


def test_one_second_at_25fps_gives_26_frames(lib):
    a = params.neutral()
    b = params.validate({**a.to_doc(), "highLow": 1.0})
    timeline = Timeline((Keyframe(0.0, a), Keyframe(1.0, b)))
    frames = sample_frames(lib, timeline, 25)
    assert len(frames) == 26
    assert frames[0][0] == 0.0
    assert frames[-1][0] == 1.0


def test_final_keyframe_off_the_grid_is_appended(lib):
    a = params.neutral()
    b = params.validate({**a.to_doc(), "highLow": 1.0})
    timeline = Timeline((Keyframe(0.0, a), Keyframe(0.73, b)))
    times = sample_times(timeline, 10)
    # floor(span * fps) + 1 grid frames, plus the exact final time
    assert len(times) == math.floor(0.73 * 10) + 1 + 1
    assert times[-1] == 0.73


def test_frames_at_keyframe_times_are_bit_identical_to_direct_solve(lib, inventory):
    timeline = from_phoneme_string(inventory, "ta", segment_duration=0.2)
    frames = dict(sample_frames(lib, timeline, 25))
    for keyframe in timeline.keyframes:
        sampled = frames.get(keyframe.time)
        if sampled is None:
            continue
        direct = solve(lib, keyframe.state)
        for name in direct.contours.movable:
            assert np.array_equal(
                sampled.contours.movable[name].points, direct.contours.movable[name].points
            )
        assert sampled.derived == direct.derived


def test_ata_keeps_the_vowel_context_through_the_consonant(lib, inventory):
    timeline = from_phoneme_string(inventory, "ata")
    states = sample_states(timeline, 50)
    tip = [s.consonantal.tongue_tip_height for _t, s in states]
    lips = [s.consonantal.labial_aperture for _t, s in states]
    high_low = [s.vocalic.high_low for _t, s in states]
    assert tip[0] == 0.0 and max(tip) == 1.0 and tip[-1] == 0.0  # closure forms and releases
    assert all(v == 0.0 for v in lips)
    assert all(v == -1.0 for v in high_low)  # /a/ context persists under /t/
    # the apical gap closes mid-sequence; the lips narrow only via the jaw
    # ride and never engage
    frames = sample_frames(lib, timeline, 25)
    apical = [f.derived.apical_distance for _t, f in frames]
    labial = [f.derived.labial_aperture for _t, f in frames]
    assert min(apical) <= 1e-9
    assert apical[0] > 0.05 and apical[-1] > 0.05
    assert min(labial) > lib.contact_threshold


def test_trajectories_are_piecewise_monotone_between_keyframes(inventory):
    timeline = from_phoneme_string(inventory, "ti", segment_duration=0.2)
    keytimes = [k.time for k in timeline.keyframes]
    states = sample_states(timeline, 200)
    for lo, hi in zip(keytimes[:-1], keytimes[1:]):
        window = [s.vocalic.high_low for t, s in states if lo - 1e-12 <= t <= hi + 1e-12]
        diffs = np.diff(window)
        assert np.all(diffs >= -1e-12) or np.all(diffs <= 1e-12)


def test_frame_count_formula_over_various_spans(lib):
    a = params.neutral()
    b = params.validate({**a.to_doc(), "frontBack": -1.0})
    for span, fps in ((0.5, 25), (0.73, 10), (1.0, 30), (0.04, 25)):
        timeline = Timeline((Keyframe(0.0, a), Keyframe(span, b)))
        times = sample_times(timeline, fps)
        expected = math.floor(span * fps + 1e-9) + 1
        if expected - 1 < span * fps - 1e-9:
            expected += 1
        assert len(times) == expected, (span, fps)


def test_sampling_rejects_bad_fps(lib, inventory):
    timeline = from_phoneme_string(inventory, "a")
    with pytest.raises(InvalidTiming):
        sample_times(timeline, 0)
