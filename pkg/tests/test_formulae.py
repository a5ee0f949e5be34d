import math
import random

import pytest

from priorlex.formulae import (
    FEATURE_NAMES,
    FORMULA_IDS,
    all_formula_features,
    apply_formula,
    baseline_rnd,
    baseline_swnrnd,
    majority_class_label,
    map_polarity,
)
from priorlex.swn_store import SenseProfile

from oracles import formula_oracle, map_oracle

# Frozen expectations for the cold#a profile, computed with the exact-fraction
# oracle in oracles.py before the fast implementation was written.
COLD_EXPECTED = {
    "fs": (0.0, 0.75),
    "mean": (0.15, 0.375),
    "uni": (0.625, 0.625),
    "uniw": (0.625, 0.625),
    "w1": (0.028225806451612902, 0.6048387096774194),
    "w2": (0.06843065693430657, 0.5337591240875912),
    "w1s": (0.3548387096774194, 0.6290322580645161),
    "w2s": (0.3010948905109489, 0.5474452554744526),
    "w1n": (0.058333333333333334, 0.65),
    "w2n": (0.095, 0.6),
    "w1sn": (0.36666666666666664, 0.65),
    "w2sn": (0.33, 0.6),
    "median": (0.0, 0.375),
    "max": (0.625, 0.75),
}

SCORE_GRID = [i / 8 for i in range(9)]


def random_profile(rng, max_senses=8):
    n = rng.randint(1, max_senses)
    pos = tuple(rng.choice(SCORE_GRID) for _ in range(n))
    neg = tuple(rng.choice(SCORE_GRID) for _ in range(n))
    return SenseProfile("x#n", pos, neg)


@pytest.mark.parametrize("formula_id", FORMULA_IDS)
def test_cold_matches_oracle_and_frozen_values(formula_id, cold_profile):
    out = apply_formula(formula_id, cold_profile)
    exp = formula_oracle(formula_id, cold_profile.pos_scores, cold_profile.neg_scores)
    assert out.f_pos == pytest.approx(exp[0], abs=1e-12)
    assert out.f_neg == pytest.approx(exp[1], abs=1e-12)
    frozen = COLD_EXPECTED[formula_id]
    assert out.f_pos == pytest.approx(frozen[0], abs=1e-9)
    assert out.f_neg == pytest.approx(frozen[1], abs=1e-9)


def test_uni_tie_break_on_cold(cold_profile):
    out = apply_formula("uni", cold_profile)
    # stronglyPos = {sense 5} (weight 1/5), stronglyNeg = {1, 2, 4} (weight 3/5)
    assert out.forced_sign == -1
    for strategy in "md":
        assert map_polarity(out, strategy).value == pytest.approx(-0.625)


def test_uniw_carries_no_sign(cold_profile):
    out = apply_formula("uniw", cold_profile)
    assert out.forced_sign is None
    assert map_polarity(out, "m").value == pytest.approx(0.625)  # tie goes positive
    assert map_polarity(out, "d").value == pytest.approx(0.0)


def test_map_polarity_examples(cold_profile):
    fs = apply_formula("fs", cold_profile)
    assert map_polarity(fs, "m").value == pytest.approx(-0.75)
    mean = apply_formula("mean", cold_profile)
    assert map_polarity(mean, "d").value == pytest.approx(-0.225)


def test_map_polarity_tie_goes_positive():
    from priorlex.formulae import FormulaOutput

    assert map_polarity(FormulaOutput(0.5, 0.5), "m").value == 0.5


def test_zero_profile_nonzero_variants_return_zero():
    p = SenseProfile("null#n", (0.0, 0.0), (0.0, 0.0))
    for fid in ("w1n", "w2n", "w1sn", "w2sn"):
        out = apply_formula(fid, p)
        assert (out.f_pos, out.f_neg) == (0.0, 0.0)
        assert out.forced_sign is None


def test_oracle_equivalence_randomized():
    rng = random.Random(20240811)
    for _ in range(1000):
        p = random_profile(rng)
        for fid in FORMULA_IDS:
            out = apply_formula(fid, p)
            exp = formula_oracle(fid, p.pos_scores, p.neg_scores)
            assert math.isclose(out.f_pos, exp[0], abs_tol=1e-12), (fid, p)
            assert math.isclose(out.f_neg, exp[1], abs_tol=1e-12), (fid, p)
            if fid == "uni":
                assert out.forced_sign == exp[2], (fid, p)


def test_m_and_d_sign_consistency_randomized():
    rng = random.Random(7)
    for _ in range(1000):
        p = random_profile(rng)
        for fid in FORMULA_IDS:
            out = apply_formula(fid, p)
            m = map_polarity(out, "m").value
            d = map_polarity(out, "d").value
            assert abs(m) >= abs(d) - 1e-12
            if out.forced_sign is None and abs(out.f_pos - out.f_neg) > 1e-12:
                assert m * d > 0 or (m == 0 and d == 0)


def test_scaling_linearity_randomized():
    rng = random.Random(99)
    linear = ("fs", "mean", "max", "median", "w1", "w2", "w1s", "w2s")
    for _ in range(1000):
        p = random_profile(rng)
        c = rng.choice([0.125, 0.25, 0.5, 0.75, 1.0])
        scaled = SenseProfile(
            p.lemma_pos,
            tuple(c * v for v in p.pos_scores),
            tuple(c * v for v in p.neg_scores),
        )
        for fid in linear:
            base = apply_formula(fid, p)
            out = apply_formula(fid, scaled)
            assert math.isclose(out.f_pos, c * base.f_pos, abs_tol=1e-12)
            assert math.isclose(out.f_neg, c * base.f_neg, abs_tol=1e-12)


def test_nonzero_variant_equals_variant_on_filtered_profile():
    rng = random.Random(41)
    pairs = [("w1n", "w1"), ("w2n", "w2"), ("w1sn", "w1s"), ("w2sn", "w2s")]
    for _ in range(1000):
        p = random_profile(rng)
        kept = [
            i
            for i in range(len(p.pos_scores))
            if not (p.pos_scores[i] == 0 and p.neg_scores[i] == 0)
        ]
        if not kept:
            continue
        filtered = SenseProfile(
            p.lemma_pos,
            tuple(p.pos_scores[i] for i in kept),
            tuple(p.neg_scores[i] for i in kept),
        )
        for n_variant, variant in pairs:
            a = apply_formula(n_variant, p)
            b = apply_formula(variant, filtered)
            assert math.isclose(a.f_pos, b.f_pos, abs_tol=1e-12)
            assert math.isclose(a.f_neg, b.f_neg, abs_tol=1e-12)


def test_no_zero_senses_makes_n_variants_redundant():
    p = SenseProfile("live#a", (0.25, 0.5), (0.125, 0.25))
    for n_variant, variant in [("w1n", "w1"), ("w2n", "w2"), ("w1sn", "w1s"), ("w2sn", "w2s")]:
        assert apply_formula(n_variant, p) == apply_formula(variant, p)


def test_single_sense_profiles_collapse_to_fs():
    # uni/uniw keep only the dominant side of a mixed sense, so for them the
    # collapse holds for the dominant-score mapping rather than the raw pair.
    rng = random.Random(3)
    for _ in range(1000):
        pos = rng.choice(SCORE_GRID)
        neg = rng.choice(SCORE_GRID)
        p = SenseProfile("one#v", (pos,), (neg,))
        fs = apply_formula("fs", p)
        fs_m = map_polarity(fs, "m").value
        for fid in FORMULA_IDS:
            out = apply_formula(fid, p)
            assert math.isclose(map_polarity(out, "m").value, fs_m, abs_tol=1e-12), fid
            if fid not in ("uni", "uniw"):
                assert math.isclose(out.f_pos, fs.f_pos, abs_tol=1e-12), fid
                assert math.isclose(out.f_neg, fs.f_neg, abs_tol=1e-12), fid


def test_baseline_rnd_is_deterministic_and_bounded():
    for key in ("cold#a", "warm#a", "x#n"):
        a = baseline_rnd(key, 17)
        b = baseline_rnd(key, 17)
        assert a.value == b.value
        assert -1.0 <= a.value <= 1.0
    assert baseline_rnd("cold#a", 17).value != baseline_rnd("cold#a", 18).value


def test_baseline_rnd_mean_near_zero():
    values = [baseline_rnd(f"w{i}#n", 5).value for i in range(10000)]
    assert all(-1.0 <= v <= 1.0 for v in values)
    assert abs(sum(values) / len(values)) < 0.05


def test_baseline_swnrnd_single_sense():
    p = SenseProfile("tiny#n", (0.25,), (0.0,))
    for seed in range(5):
        assert baseline_swnrnd(p, seed).value == pytest.approx(0.25)


def test_baseline_swnrnd_picks_an_actual_sense(cold_profile):
    per_sense = set()
    for i in range(len(cold_profile.pos_scores)):
        single = SenseProfile(
            cold_profile.lemma_pos,
            (cold_profile.pos_scores[i],),
            (cold_profile.neg_scores[i],),
        )
        per_sense.add(round(map_polarity(apply_formula("fs", single), "m").value, 12))
    seen = {round(baseline_swnrnd(cold_profile, seed).value, 12) for seed in range(200)}
    assert seen <= per_sense
    assert len(seen) > 1


def test_baseline_swnrnd_all_zero_profile():
    p = SenseProfile("flat#n", (0.0, 0.0), (0.0, 0.0))
    assert baseline_swnrnd(p, 3).value == 0.0


def test_majority_class_label():
    assert majority_class_label([-1, -1, 1]) == -1
    assert majority_class_label([1, 1, -1, -1]) == 1  # tie rule
    gi_like = [-1] * 2291 + [1] * 1915
    assert majority_class_label(gi_like) == -1
    accuracy = sum(1 for g in gi_like if g == -1) / len(gi_like)
    assert accuracy == pytest.approx(0.5447, abs=5e-4)


def test_feature_vector_layout(cold_profile):
    vec = all_formula_features(cold_profile)
    assert len(vec) == len(FEATURE_NAMES) == 27
    names = list(FEATURE_NAMES)
    assert vec[names.index("fs_m")] == pytest.approx(-0.75)
    assert vec[names.index("mean_d")] == pytest.approx(-0.225)
    assert vec[names.index("uni")] == pytest.approx(-0.625)
    assert names.count("uni") == 1
    assert "uni_d" not in names and "uni_m" not in names


def test_feature_vector_all_zero_profile():
    p = SenseProfile("flat#n", (0.0, 0.0, 0.0), (0.0, 0.0, 0.0))
    assert all(v == 0.0 for v in all_formula_features(p))


def test_feature_vector_matches_mapped_formulas_randomized():
    rng = random.Random(123)
    for _ in range(200):
        p = random_profile(rng)
        vec = all_formula_features(p)
        i = 0
        for fid in FORMULA_IDS:
            out = apply_formula(fid, p)
            if fid == "uni":
                assert vec[i] == pytest.approx(map_polarity(out, "m").value, abs=1e-12)
                i += 1
            else:
                assert vec[i] == pytest.approx(map_polarity(out, "m").value, abs=1e-12)
                assert vec[i + 1] == pytest.approx(map_polarity(out, "d").value, abs=1e-12)
                i += 2
        assert i == 27


def test_feature_matrix_matches_scalar_path(cold_profile):
    from priorlex.formulae import feature_matrix

    rng = random.Random(2024)
    profiles = [cold_profile, SenseProfile("flat#n", (0.0,), (0.0,))]
    profiles += [random_profile(rng) for _ in range(500)]
    # long profiles exist in real resources (dozens of senses)
    profiles += [random_profile(rng, max_senses=40) for _ in range(20)]
    batch = feature_matrix(profiles)
    assert batch.shape == (len(profiles), 27)
    for row, p in zip(batch, profiles):
        scalar = all_formula_features(p)
        for a, b in zip(row, scalar):
            assert math.isclose(a, b, abs_tol=1e-12), p


def test_map_oracle_agreement_randomized():
    rng = random.Random(5)
    for _ in range(1000):
        p = random_profile(rng)
        fid = rng.choice(FORMULA_IDS)
        out = apply_formula(fid, p)
        for strategy in "md":
            got = map_polarity(out, strategy).value
            exp = map_oracle(out.f_pos, out.f_neg, strategy, out.forced_sign)
            assert math.isclose(got, exp, abs_tol=1e-12)
            assert -1.0 <= got <= 1.0
