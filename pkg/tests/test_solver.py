from __future__ import annotations

import numpy as np
import pytest

from artic2d import params, solver
from artic2d.params import ConsonantalControls, DiscreteConstrictionSpec
from artic2d.solver import (
    apply_constriction,
    apply_jaw_coupling,
    apply_rounding,
    barycentric_weights,
    compute_derived,
    compute_jaw,
    solve,
    vocalic_blend,
)

# Regression-pinned continuity constant for the bundled library (measured
# 0.365; see test_continuity_bound).
CONTINUITY_L = 0.40

VERTICES = {"i": (1.0, 1.0), "u": (1.0, -1.0), "a": (-1.0, 0.0)}


def state_doc(**overrides):
    doc = params.neutral().to_doc()
    doc.update(overrides)
    return doc


def make_state(**overrides):
    return params.validate(state_doc(**overrides))


def max_movable_deviation(aset, reference):
    return max(
        float(np.max(np.abs(aset.movable[name].points - contour.points)))
        for name, contour in reference.items()
    )


# --- step 1a -----------------------------------------------------------------


def brute_force_weights(p, refine_to=1e-6):
    """Independent oracle: grid search over the weight simplex, refined."""
    verts = np.array([VERTICES["i"], VERTICES["u"], VERTICES["a"]])
    target = np.asarray(p, dtype=float)
    best = (0.0, 0.0)
    lo_i, hi_i, lo_u, hi_u = 0.0, 1.0, 0.0, 1.0
    step = 0.05
    while step > refine_to / 4:
        candidates = []
        for wi in np.arange(lo_i, hi_i + step / 2, step):
            for wu in np.arange(lo_u, hi_u + step / 2, step):
                if wi + wu > 1.0 + 1e-12:
                    continue
                wa = 1.0 - wi - wu
                point = wi * verts[0] + wu * verts[1] + wa * verts[2]
                candidates.append((float(np.sum((point - target) ** 2)), wi, wu))
        _err, wi, wu = min(candidates)
        best = (wi, wu)
        lo_i, hi_i = max(0.0, wi - 2 * step), min(1.0, wi + 2 * step)
        lo_u, hi_u = max(0.0, wu - 2 * step), min(1.0, wu + 2 * step)
        step /= 4
    return best[0], 1.0 - best[0] - best[1], best[1]  # (w_i, w_a, w_u)


def analytic_weights(p):
    """Second independent oracle: solve the 2x2 barycentric system."""
    vi, vu, va = (np.array(VERTICES[k], dtype=float) for k in ("i", "u", "a"))
    m = np.column_stack([vi - va, vu - va])
    wi, wu = np.linalg.solve(m, np.asarray(p, dtype=float) - va)
    return float(wi), float(1.0 - wi - wu), float(wu)


def test_neutral_weights_match_both_oracles():
    w = barycentric_weights(0.0, 0.0)
    assert abs(w.w_i - 0.25) <= 1e-12
    assert abs(w.w_u - 0.25) <= 1e-12
    assert abs(w.w_a - 0.5) <= 1e-12
    bi, ba, bu = brute_force_weights((0.0, 0.0))
    assert abs(bi - w.w_i) <= 1e-5
    assert abs(ba - w.w_a) <= 1e-5
    assert abs(bu - w.w_u) <= 1e-5
    ai, aa, au = analytic_weights((0.0, 0.0))
    assert abs(ai - w.w_i) <= 1e-12
    assert abs(aa - w.w_a) <= 1e-12
    assert abs(au - w.w_u) <= 1e-12


@pytest.mark.parametrize("point", [(0.4, -0.3), (0.8, 0.1), (-0.5, 0.2), (0.0, 0.4)])
def test_interior_weights_match_analytic_oracle(point):
    w = barycentric_weights(*point)
    ai, aa, au = analytic_weights(point)
    assert abs(w.w_i - ai) <= 1e-12
    assert abs(w.w_a - aa) <= 1e-12
    assert abs(w.w_u - au) <= 1e-12


def test_weights_sum_to_one_and_stay_convex_everywhere():
    for hl in np.linspace(-1, 1, 21):
        for fb in np.linspace(-1, 1, 21):
            w = barycentric_weights(float(hl), float(fb))
            assert abs(w.w_i + w.w_a + w.w_u - 1.0) <= 1e-12
            assert -1e-12 <= w.w_i <= 1 + 1e-12
            assert -1e-12 <= w.w_a <= 1 + 1e-12
            assert -1e-12 <= w.w_u <= 1 + 1e-12


def test_exterior_points_project_onto_triangle():
    # (-1, -1) lies outside; its projection sits on the a-u edge.
    w = barycentric_weights(-1.0, -1.0)
    assert w.w_i <= 1e-12
    assert w.w_a + w.w_u == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("vowel,point", list(VERTICES.items()))
def test_vocalic_blend_reproduces_prototypes_at_vertices(lib, vowel, point):
    blended = vocalic_blend(lib, *point)
    assert max_movable_deviation(blended, lib.vowel_prototypes[vowel].movable) <= 1e-9


# --- step 1b -----------------------------------------------------------------


def test_rounding_zero_is_identity(lib):
    base = vocalic_blend(lib, 0.2, -0.4)
    assert apply_rounding(lib, base, 0.0) is base


def test_full_rounding_reaches_the_y_prototype(lib):
    base = vocalic_blend(lib, 1.0, 1.0)
    rounded = apply_rounding(lib, base, 1.0)
    for name, proto in lib.rounding_prototype.items():
        assert np.max(np.abs(rounded.movable[name].points - proto.points)) <= 1e-9


def test_half_rounding_is_the_per_vertex_midpoint(lib):
    base = vocalic_blend(lib, 0.3, 0.5)
    rounded = apply_rounding(lib, base, 0.5)
    for name, proto in lib.rounding_prototype.items():
        midpoint = (base.movable[name].points + proto.points) / 2.0
        assert np.max(np.abs(rounded.movable[name].points - midpoint)) <= 1e-12


def test_negative_rounding_spreads_away_from_y(lib):
    base = vocalic_blend(lib, 0.0, 0.0)
    spread = apply_rounding(lib, base, -1.0)
    for name, proto in lib.rounding_prototype.items():
        expected = base.movable[name].points - 0.5 * (proto.points - base.movable[name].points)
        assert np.max(np.abs(spread.movable[name].points - expected)) <= 1e-12
    untouched = [n for n in base.movable if n not in lib.rounding_prototype]
    for name in untouched:
        assert spread.movable[name] is base.movable[name]


# --- step 2 ------------------------------------------------------------------


def test_no_constriction_is_identity(lib):
    base = vocalic_blend(lib, -0.2, 0.1)
    out = apply_constriction(lib, base, ConsonantalControls(), DiscreteConstrictionSpec())
    assert out is base


def test_full_apical_closure_lands_on_the_target(lib):
    base = vocalic_blend(lib, -1.0, 0.0)
    out = apply_constriction(
        lib, base, ConsonantalControls(tongue_tip_height=1.0), DiscreteConstrictionSpec()
    )
    target = lib.closure_targets["alveolar"]["tongueTip"]
    assert np.max(np.abs(out.movable["tongueTip"].points - target.points)) == 0.0
    assert compute_derived(lib, out).apical_distance == 0.0


def test_partial_labial_closure_narrows_the_gap_strictly(lib):
    gaps = []
    for c in (0.0, 0.5, 1.0):
        frame = solve(lib, make_state(highLow=-1.0, labialAperture=c))
        gaps.append(frame.derived.labial_aperture)
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] == 0.0


def test_missing_closure_target_raises(lib):
    base = vocalic_blend(lib, 0.0, 0.0)
    broken = dict(lib.closure_targets)
    broken.pop("alveolar")
    import dataclasses

    hollow = dataclasses.replace(lib, closure_targets=broken)
    with pytest.raises(solver.MissingClosureTarget):
        apply_constriction(
            lib=hollow,
            aset=base,
            consonantal=ConsonantalControls(tongue_tip_height=0.5),
            discrete=DiscreteConstrictionSpec(),
        )


# --- step 3 ------------------------------------------------------------------


def test_jaw_defaults_to_vocalic_height(lib):
    assert compute_jaw(lib, 0.44, ConsonantalControls(), DiscreteConstrictionSpec()) == 0.44


def test_jaw_reaches_place_target_at_full_closure(lib):
    out = compute_jaw(
        lib, 0.44, ConsonantalControls(tongue_tip_height=1.0), DiscreteConstrictionSpec()
    )
    assert out == lib.jaw_targets["consonantal"]["alveolar"]


def test_simultaneous_constrictions_take_the_max_interpolant(lib):
    voc = 0.42
    cons = ConsonantalControls(tongue_tip_height=1.0, labial_aperture=0.3)
    # Oracle: compute each interpolant independently.
    tip = (1 - 1.0) * voc + 1.0 * lib.jaw_targets["consonantal"]["alveolar"]
    lab = (1 - 0.3) * voc + 0.3 * lib.jaw_targets["consonantal"]["bilabial"]
    assert compute_jaw(lib, voc, cons, DiscreteConstrictionSpec()) == max(voc, tip, lab)


def test_jaw_never_drops_below_vocalic_height(lib):
    voc = max(lib.jaw_targets["consonantal"].values()) + 0.01
    out = compute_jaw(
        lib, voc, ConsonantalControls(labial_aperture=1.0), DiscreteConstrictionSpec()
    )
    assert out == voc


# --- step 4 ------------------------------------------------------------------


def test_zero_jaw_delta_is_identity(lib):
    base = vocalic_blend(lib, 0.0, 0.0)
    out = apply_jaw_coupling(lib, base, 0.0, ConsonantalControls(), DiscreteConstrictionSpec())
    assert out is base


def test_unconstricted_tongue_rides_the_full_jaw_shift(lib):
    base = vocalic_blend(lib, -1.0, 0.0)
    cons = ConsonantalControls(labial_aperture=1.0)
    disc = DiscreteConstrictionSpec()
    constricted = apply_constriction(lib, base, cons, disc)
    delta = 0.05
    coupled = apply_jaw_coupling(lib, constricted, delta, cons, disc)
    shift = coupled.movable["tongueTip"].points - constricted.movable["tongueTip"].points
    assert np.allclose(shift[:, 0], 0.0)
    assert np.allclose(shift[:, 1], delta)
    assert np.allclose(
        coupled.movable["lowerJawTeeth"].points[:, 1] - constricted.movable["lowerJawTeeth"].points[:, 1],
        delta,
    )
    assert coupled.movable["upperLip"] is constricted.movable["upperLip"]


def test_apical_contact_survives_jaw_coupling(lib):
    frame = solve(lib, make_state(highLow=-1.0, tongueTipHeight=1.0))
    assert frame.derived.apical_distance <= 1e-9
    # the lower lip still rode the jaw shift
    base = solve(lib, make_state(highLow=-1.0))
    lip_shift = (
        frame.contours.movable["lowerLip"].points[:, 1]
        - base.contours.movable["lowerLip"].points[:, 1]
    )
    assert np.min(lip_shift) > 0.0


# --- solve -------------------------------------------------------------------


def test_neutral_solve_has_no_engagement(lib):
    frame = solve(lib, params.neutral())
    derived = frame.derived
    assert derived.velopharyngeal_opening == 0.0
    assert derived.glottal_width == 0.0
    assert derived.labial_aperture > 0.0
    assert derived.apical_distance > 0.0
    assert derived.dorsal_distance > 0.0
    # no articulator departs from the pure vocalic blend
    reference = vocalic_blend(lib, 0.0, 0.0)
    assert max_movable_deviation(frame.contours, reference.movable) == 0.0


@pytest.mark.parametrize("vowel,point", list(VERTICES.items()))
def test_endpoint_fidelity_at_triangle_vertices(lib, vowel, point):
    frame = solve(lib, make_state(highLow=point[0], frontBack=point[1]))
    assert max_movable_deviation(frame.contours, lib.vowel_prototypes[vowel].movable) <= 1e-9


def test_bilabial_nasal_frame(lib):
    frame = solve(lib, make_state(labialAperture=1.0, velumHeight=1.0))
    assert frame.derived.labial_aperture == 0.0
    assert frame.derived.velopharyngeal_opening > 0.0


def test_high_front_vowel_sits_higher_and_more_anterior_than_low(lib):
    hi = solve(lib, make_state(highLow=1.0, frontBack=1.0))
    lo = solve(lib, make_state(highLow=-1.0, frontBack=0.0))
    hi_centroid = hi.contours.movable["tongueBody"].points.mean(axis=0)
    lo_centroid = lo.contours.movable["tongueBody"].points.mean(axis=0)
    assert hi_centroid[1] > lo_centroid[1]  # higher
    assert hi_centroid[0] < lo_centroid[0]  # more anterior


def test_closure_exactness_for_every_place_and_manner(lib):
    rng = np.random.default_rng(11)
    cases = [
        ("labialAperture", "lipsPlace", "lipsManner", ["bilabial", "labiodental"], ["full", "near"]),
        ("tongueTipHeight", "tipPlace", "tipManner",
         ["dental", "alveolar", "postalveolar"], ["full", "near", "lateral"]),
        ("tongueDorsumHeight", "dorsumPlace", "dorsumManner", ["palatal", "velar"], ["full", "near"]),
    ]
    axis_articulator = {
        "labialAperture": "lips", "tongueTipHeight": "tongueTip", "tongueDorsumHeight": "tongueDorsum"
    }
    for c_field, p_field, m_field, places, manners in cases:
        for place in places:
            for manner in manners:
                hl, fb = rng.uniform(-1, 1, 2)
                state = make_state(
                    highLow=float(hl), frontBack=float(fb),
                    **{c_field: 1.0, p_field: place, m_field: manner},
                )
                frame = solve(lib, state)
                targets = solver._target_contours(
                    lib, axis_articulator[c_field], place, manner
                )
                for name, target in targets.items():
                    got = frame.contours.movable[name].points
                    assert np.max(np.abs(got - target.points)) <= 1e-9, (place, manner, name)


def test_aperture_monotonicity_over_random_bases(lib):
    rng = np.random.default_rng(20250808)
    axes = [
        ("labialAperture", "labial_aperture"),
        ("tongueTipHeight", "apical_distance"),
        ("tongueDorsumHeight", "dorsal_distance"),
    ]
    for _ in range(5):
        hl, fb, rnd = rng.uniform(-1, 1, 3)
        for c_field, d_field in axes:
            values = []
            for c in np.linspace(0.0, 1.0, 11):
                frame = solve(lib, make_state(
                    highLow=float(hl), frontBack=float(fb), rounding=float(rnd),
                    **{c_field: float(c)},
                ))
                values.append(getattr(frame.derived, d_field))
            diffs = np.diff(values)
            assert np.max(diffs) <= 1e-12, (c_field, hl, fb, rnd, values)


def test_velum_and_glottis_scale_with_their_controls(lib):
    openings = [
        solve(lib, make_state(velumHeight=v)).derived.velopharyngeal_opening
        for v in (-1.0, -0.5, 0.0, 0.5, 1.0)
    ]
    assert openings[0] == openings[1] == openings[2] == 0.0
    assert 0.0 < openings[3] < openings[4]
    widths = [
        solve(lib, make_state(glottalAperture=g)).derived.glottal_width
        for g in (-1.0, 0.0, 0.5, 1.0)
    ]
    assert widths[0] == widths[1] == 0.0
    assert widths[2] == pytest.approx(widths[3] / 2.0, abs=1e-12)


def test_tight_flags_are_recorded(lib):
    frame = solve(lib, make_state(velumHeight=-1.0, glottalAperture=-0.5))
    assert frame.annotations["velumTight"] is True
    assert frame.annotations["glottalTight"] is True
    neutral_frame = solve(lib, params.neutral())
    assert neutral_frame.annotations["velumTight"] is False


def test_larynx_lowers_toward_back_vowels(lib):
    front = solve(lib, make_state(highLow=1.0, frontBack=1.0))
    back = solve(lib, make_state(highLow=1.0, frontBack=-1.0))
    front_y = front.contours.movable["larynxGlottis"].points[:, 1].mean()
    back_y = back.contours.movable["larynxGlottis"].points[:, 1].mean()
    assert back_y < front_y


def test_determinism_bit_identical_frames(lib):
    state = make_state(highLow=0.37, frontBack=-0.21, rounding=0.4,
                       tongueTipHeight=0.66, velumHeight=0.8, glottalAperture=0.3,
                       lungPressure=0.5)
    f1 = solve(lib, state)
    f2 = solve(lib, state)
    for name in f1.contours.movable:
        assert np.array_equal(f1.contours.movable[name].points, f2.contours.movable[name].points)
    assert f1.derived == f2.derived
    assert f1.to_doc() == f2.to_doc()


def test_derived_scalars_recompute_from_contours(lib):
    for overrides in (
        {}, {"tongueTipHeight": 1.0}, {"labialAperture": 0.7, "velumHeight": 1.0},
        {"tongueDorsumHeight": 0.4, "glottalAperture": 1.0},
    ):
        frame = solve(lib, make_state(**overrides))
        assert compute_derived(lib, frame.contours) == frame.derived


def test_continuity_bound(lib):
    rng = np.random.default_rng(7)
    delta = 1e-4
    fields = ["highLow", "frontBack", "rounding", "labialAperture",
              "tongueTipHeight", "tongueDorsumHeight", "velumHeight", "glottalAperture"]
    for _ in range(6):
        doc = state_doc(
            highLow=float(rng.uniform(-1, 1)), frontBack=float(rng.uniform(-1, 1)),
            rounding=float(rng.uniform(-1, 1)),
            labialAperture=float(rng.uniform(0, 1)),
            tongueTipHeight=float(rng.uniform(0, 1)),
            tongueDorsumHeight=float(rng.uniform(0, 1)),
            velumHeight=float(rng.uniform(-1, 1)), glottalAperture=float(rng.uniform(-1, 1)),
        )
        base = solve(lib, params.validate(doc))
        for field in fields:
            lo, hi = (0.0, 1.0) if field in (
                "labialAperture", "tongueTipHeight", "tongueDorsumHeight") else (-1.0, 1.0)
            bumped = dict(doc)
            bumped[field] = doc[field] + delta if doc[field] + delta <= hi else doc[field] - delta
            pert = solve(lib, params.validate(bumped))
            disp = max(
                float(np.max(np.abs(
                    pert.contours.movable[n].points - base.contours.movable[n].points
                )))
                for n in base.contours.movable
            )
            assert disp <= CONTINUITY_L * delta, (field, disp / delta)
