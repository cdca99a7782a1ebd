"""Acceptance gate: one test per shipping criterion, each printing a
PASS/FAIL line. Run with `pytest tests/test_acceptance.py -s` to see the
report; the whole suite stays well under desk-scale time.
"""

from __future__ import annotations

import functools

import numpy as np
from click.testing import CliRunner
from fastapi.testclient import TestClient

from artic2d import params, sequencer, solver, views
from artic2d.cli import main as cli_main
from artic2d.geometry import default_data_dir
from artic2d.scene import Arrow
from artic2d.sequencer import Keyframe, Timeline
from artic2d.service import create_app
from artic2d.solver import barycentric_weights, solve

TRIANGLE = {"i": (1.0, 1.0), "u": (1.0, -1.0), "a": (-1.0, 0.0)}

AXIS_FIELDS = {
    "lips": ("labialAperture", "labial_aperture"),
    "tongueTip": ("tongueTipHeight", "apical_distance"),
    "tongueDorsum": ("tongueDorsumHeight", "dorsal_distance"),
}


def criterion(label):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL  {label}")
                raise
            print(f"PASS  {label}")

        return wrapper

    return decorate


def make_state(**overrides):
    doc = params.neutral().to_doc()
    doc.update(overrides)
    return params.validate(doc)


def consonant_presets(inventory):
    return [e for e in inventory.entries if e.phoneme_class != "vowel"]


@criterion("endpoint fidelity: triangle vertices reproduce /i/, /u/, /a/ (<= 1e-9)")
def test_endpoint_fidelity(lib):
    for vowel, (hl, fb) in TRIANGLE.items():
        frame = solve(lib, make_state(highLow=hl, frontBack=fb))
        deviation = max(
            float(np.max(np.abs(frame.contours.movable[name].points - contour.points)))
            for name, contour in lib.vowel_prototypes[vowel].movable.items()
        )
        assert deviation <= 1e-9, (vowel, deviation)


@criterion("neutral weights: (0.25, 0.25, 0.5) within 1e-12, against both oracles")
def test_neutral_weights():
    w = barycentric_weights(0.0, 0.0)
    assert abs(w.w_i - 0.25) <= 1e-12
    assert abs(w.w_u - 0.25) <= 1e-12
    assert abs(w.w_a - 0.50) <= 1e-12

    # Oracle 1: grid search over the weight simplex, refined to 1e-6.
    verts = np.array([TRIANGLE["i"], TRIANGLE["u"], TRIANGLE["a"]])
    target = np.zeros(2)
    lo_i, hi_i, lo_u, hi_u = 0.0, 1.0, 0.0, 1.0
    step = 0.05
    wi = wu = 0.0
    while step > 2.5e-7:
        candidates = []
        for gi in np.arange(lo_i, hi_i + step / 2, step):
            for gu in np.arange(lo_u, hi_u + step / 2, step):
                if gi + gu > 1.0 + 1e-12:
                    continue
                point = gi * verts[0] + gu * verts[1] + (1 - gi - gu) * verts[2]
                candidates.append((float(np.sum((point - target) ** 2)), gi, gu))
        _err, wi, wu = min(candidates)
        lo_i, hi_i = max(0.0, wi - 2 * step), min(1.0, wi + 2 * step)
        lo_u, hi_u = max(0.0, wu - 2 * step), min(1.0, wu + 2 * step)
        step /= 4
    assert abs(wi - w.w_i) <= 1e-5
    assert abs(wu - w.w_u) <= 1e-5

    # Oracle 2: analytic 2x2 solve.
    m = np.column_stack([verts[0] - verts[2], verts[1] - verts[2]])
    ai, au = np.linalg.solve(m, target - verts[2])
    assert abs(ai - w.w_i) <= 1e-12
    assert abs(au - w.w_u) <= 1e-12
    assert abs((1 - ai - au) - w.w_a) <= 1e-12


@criterion("closure exactness: every consonant preset meets its place target (<= 1e-9) "
           "with contact at the right band")
def test_closure_exactness(lib, inventory):
    for entry in consonant_presets(inventory):
        frame = solve(lib, entry.state)
        engaged = solver.active_constrictions(entry.state.consonantal, entry.state.discrete)
        assert engaged, entry.sampa
        for axis, c, place, manner in engaged:
            assert c == 1.0, (entry.sampa, axis)
            targets = solver._target_contours(lib, axis, place, manner)
            for name, target in targets.items():
                deviation = float(
                    np.max(np.abs(frame.contours.movable[name].points - target.points))
                )
                assert deviation <= 1e-9, (entry.sampa, name, deviation)
            if axis == "lips":
                # labial contact: the lips engage within the contact threshold
                assert frame.derived.labial_aperture <= lib.contact_threshold, entry.sampa
            else:
                contact = views.compute_palatal_contact(
                    lib, frame, entry.state.discrete, entry.state.consonantal
                )
                lo, hi = lib.place_bands[place]
                n_cols = contact.resolution[1]
                band = [
                    j for j in range(n_cols)
                    if lo <= 0.10 + (j + 0.5) / n_cols * 0.64 <= hi
                ]
                occupied = {
                    c for row in (contact.cells("contact") + contact.cells("groove-channel"))
                    for c in [row[1]]
                }
                assert occupied & set(band), (entry.sampa, place)


@criterion("aperture monotonicity: non-increasing in c over 5 random vocalic bases")
def test_aperture_monotonicity(lib):
    rng = np.random.default_rng(20250808)
    for _ in range(5):
        hl, fb, rnd = (float(v) for v in rng.uniform(-1, 1, 3))
        for control, derived_name in AXIS_FIELDS.values():
            values = []
            for c in [k / 10 for k in range(11)]:
                frame = solve(lib, make_state(
                    highLow=hl, frontBack=fb, rounding=rnd, **{control: c}
                ))
                values.append(getattr(frame.derived, derived_name))
            assert all(b <= a + 1e-12 for a, b in zip(values[:-1], values[1:])), (
                control, hl, fb, rnd, values
            )


@criterion("voicing contract: open glottis for voiceless only; pairs differ "
           "solely in glottalAperture")
def test_voicing_contract(lib, inventory):
    assert solve(lib, inventory.lookup("t").state).derived.glottal_width > 0.0
    assert solve(lib, inventory.lookup("d").state).derived.glottal_width == 0.0
    for voiceless, voiced in (("p", "b"), ("t", "d"), ("k", "g"), ("f", "v"), ("s", "z")):
        a = inventory.lookup(voiceless).state.to_doc()
        b = inventory.lookup(voiced).state.to_doc()
        differing = [k for k in a if a[k] != b[k]]
        assert differing == ["glottalAperture"], (voiceless, voiced, differing)


@criterion("nasality contract: velopharyngeal opening > 0 exactly for m, n, N")
def test_nasality_contract(lib, inventory):
    for entry in consonant_presets(inventory):
        opening = solve(lib, entry.state).derived.velopharyngeal_opening
        if entry.sampa in ("m", "n", "N"):
            assert opening > 0.0, entry.sampa
        else:
            assert opening == 0.0, entry.sampa


@criterion("airflow blocking: no arrow anterior to a full closure under a closed velum")
def test_airflow_blocking(lib, inventory):
    checked = 0
    for entry in consonant_presets(inventory):
        state = entry.state
        frame = solve(lib, state)
        full_closure = any(
            manner == "full" and c == 1.0
            for _axis, c, _place, manner in solver.active_constrictions(
                state.consonantal, state.discrete
            )
        )
        if not full_closure or state.phonatory.velum_height > 0.0:
            continue
        checked += 1
        block_x = views._blockage_x(frame)
        assert block_x is not None, entry.sampa
        scene = views.render_sagittal(lib, frame, show_airflow=True)
        arrows = [
            p for layer in scene.layers for p in layer.primitives if isinstance(p, Arrow)
        ]
        assert arrows, entry.sampa
        for arrow in arrows:
            assert min(arrow.tail[0], arrow.head[0]) >= block_x, (entry.sampa, arrow)
    assert checked >= 6  # p, b, t, d, k, g


@criterion("animation fidelity: 26 frames per second-long 25 fps timeline, "
           "keyframes bit-identical to direct solve")
def test_animation_fidelity(lib):
    a = params.neutral()
    b = make_state(highLow=1.0, frontBack=1.0, tongueTipHeight=0.6)
    timeline = Timeline((Keyframe(0.0, a), Keyframe(1.0, b)))
    frames = sequencer.sample_frames(lib, timeline, 25)
    assert len(frames) == 26
    by_time = dict(frames)
    for keyframe in timeline.keyframes:
        sampled = by_time[keyframe.time]
        direct = solve(lib, keyframe.state)
        for name in direct.contours.movable:
            assert np.array_equal(
                sampled.contours.movable[name].points,
                direct.contours.movable[name].points,
            ), (keyframe.time, name)
        assert sampled.derived == direct.derived


@criterion("determinism: byte-identical CLI renders and /api/render bodies")
def test_determinism(tmp_path):
    runner = CliRunner()
    outputs = []
    for k in range(2):
        out = tmp_path / f"det{k}.svg"
        result = runner.invoke(
            cli_main, ["render", "--phoneme", "S", "--view", "composite", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]

    app = create_app(default_data_dir())
    with TestClient(app) as client:
        bodies = [
            client.get("/api/render", params={"phoneme": "k", "view": "composite"}).content
            for _ in range(2)
        ]
    assert bodies[0] == bodies[1]


@criterion("lateral-contact limitation toggle: [t] margins empty by default, "
           "sealed alveolar-to-velar when synthesized")
def test_lateral_seal_toggle(lib, inventory):
    state = inventory.lookup("t").state
    frame = solve(lib, state)
    plain = views.compute_palatal_contact(lib, frame, state.discrete, state.consonantal)
    n_rows, n_cols = plain.resolution
    margin = max(1, n_rows // 8)
    margin_rows = set(range(margin)) | set(range(n_rows - margin, n_rows))
    assert not [cell for cell in plain.cells("contact") if cell[0] in margin_rows]

    sealed = views.compute_palatal_contact(
        lib, frame, state.discrete, state.consonantal, synthesize_lateral_seal=True
    )
    lo = lib.place_bands["alveolar"][0]
    hi = lib.place_bands["velar"][1]
    span = [j for j in range(n_cols) if lo <= 0.10 + (j + 0.5) / n_cols * 0.64 <= hi]
    assert span
    for j in span:
        for r in margin_rows:
            assert sealed.grid[r][j] == "contact", (r, j)
