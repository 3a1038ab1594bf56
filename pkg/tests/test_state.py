import random
import statistics

import pytest

from cogloop.errors import NoUsableChannelsError, UncalibratedChannelError
from cogloop.model import Dimension
from cogloop.state import (
    ALL_CHANNELS,
    CHANNEL_HEART_RATE,
    CHANNEL_NOTE_ERROR,
    CHANNEL_PNN50,
    CHANNEL_PUPIL,
    CHANNEL_RMSSD,
    ChannelFeature,
    Descriptor,
    compute_baseline,
    default_weight_matrix,
    dimension_score,
    infer_state,
    to_descriptor,
    zscore,
)


def _feat(channel, value=0.0, quality=1.0, t=0.0):
    return ChannelFeature(channel_id=channel, value=value, quality=quality, t=t)


def _profile(**stats):
    """Baseline with given (mu, sigma) per channel, built from raw pairs."""
    values = {}
    for channel, (mu, sigma) in stats.items():
        values[channel] = [(mu - sigma, 1.0), (mu + sigma, 1.0)]
    return compute_baseline(values, min_samples=2)


# ---------------------------------------------------------------------------
# baseline

def test_baseline_mean_and_population_sigma():
    profile = compute_baseline({"pupil_mm": [(4.0, 1.0), (6.0, 1.0)]}, min_samples=2)
    baseline = profile.channels["pupil_mm"]
    assert baseline.mu == pytest.approx(5.0)
    assert baseline.sigma == pytest.approx(1.0)  # population, not sample
    assert baseline.n_samples == 2


def test_constant_channel_gets_sigma_floor():
    profile = compute_baseline({"pupil_mm": [(3.0, 1.0)] * 10}, min_samples=2)
    assert profile.channels["pupil_mm"].sigma == pytest.approx(1e-6)
    assert zscore(3.0, profile, "pupil_mm") == 0.0
    # one micrometer off the constant baseline is a huge deviation
    assert zscore(3.001, profile, "pupil_mm") == pytest.approx(1000.0, rel=1e-6)


def test_underfilled_channel_is_reported_not_fatal():
    profile = compute_baseline(
        {"pupil_mm": [(3.0, 1.0)] * 5, "rmssd_ms": [(40.0, 1.0)] * 3},
        min_samples=5,
    )
    assert profile.is_calibrated("pupil_mm")
    assert not profile.is_calibrated("rmssd_ms")
    assert "3 calibration samples" in profile.uncalibrated["rmssd_ms"]
    with pytest.raises(UncalibratedChannelError):
        zscore(40.0, profile, "rmssd_ms")


def test_per_channel_minimum_overrides_global():
    profile = compute_baseline(
        {"note_error": [(0.1, 1.0)] * 4},
        min_samples=30,
        min_samples_per_channel={"note_error": 4},
    )
    assert profile.is_calibrated("note_error")


def test_minimum_never_drops_below_two():
    profile = compute_baseline(
        {"note_error": [(0.1, 1.0)]},
        min_samples=30,
        min_samples_per_channel={"note_error": 0},
    )
    assert not profile.is_calibrated("note_error")


def test_baseline_quality_mean():
    profile = compute_baseline(
        {"pupil_mm": [(3.0, 1.0), (3.1, 0.5), (2.9, 0.9)]}, min_samples=2
    )
    assert profile.channels["pupil_mm"].quality_mean == pytest.approx(0.8)


# ---------------------------------------------------------------------------
# fusion

def test_dimension_score_worked_example():
    # stress row: pnn50 0.4, rmssd 0.3, hr 0.3
    features = [
        _feat(CHANNEL_PNN50, quality=1.0),
        _feat(CHANNEL_RMSSD, quality=0.5),
        _feat(CHANNEL_HEART_RATE, quality=1.0),
    ]
    zs = [-1.8, -1.2, 0.9]
    score, confidence = dimension_score(
        features, zs, default_weight_matrix(), Dimension.STRESS
    )
    num = 0.4 * 1.0 * 1.8 + 0.3 * 0.5 * 1.2 + 0.3 * 1.0 * 0.9
    den = 0.4 * 1.0 + 0.3 * 0.5 + 0.3 * 1.0
    assert score == pytest.approx(num / den, abs=1e-12)
    assert confidence == pytest.approx(den / 1.0, abs=1e-12)
    assert confidence == pytest.approx(0.85, abs=1e-12)


def test_missing_channel_lowers_confidence_not_score():
    features = [_feat(CHANNEL_PNN50, quality=1.0)]
    zs = [2.0]
    score, confidence = dimension_score(
        features, zs, default_weight_matrix(), Dimension.STRESS
    )
    assert score == pytest.approx(2.0, abs=1e-12)
    # only 0.4 of the full 1.0 weight row was observed
    assert confidence == pytest.approx(0.4, abs=1e-12)


def test_fusion_matches_brute_force_oracle():
    rng = random.Random(777)
    weights = default_weight_matrix()
    dims = list(Dimension)
    for _ in range(10_000):
        dimension = rng.choice(dims)
        row = weights[dimension]
        features, zs = [], []
        for channel in ALL_CHANNELS:
            if rng.random() < 0.35:
                continue
            features.append(_feat(channel, quality=rng.random()))
            zs.append(rng.uniform(-4.0, 4.0))
        num = den = 0.0
        for feature, z in zip(features, zs):
            w = row.get(feature.channel_id, 0.0)
            num += w * feature.quality * abs(z)
            den += w * feature.quality
        if den <= 0:
            with pytest.raises(NoUsableChannelsError):
                dimension_score(features, zs, weights, dimension)
            continue
        score, confidence = dimension_score(features, zs, weights, dimension)
        assert score == pytest.approx(num / den, abs=1e-12)
        assert confidence == pytest.approx(den / sum(row.values()), abs=1e-12)


def test_score_is_invariant_under_weight_row_scaling():
    rng = random.Random(888)
    base = default_weight_matrix()
    scaled = default_weight_matrix()
    for row in scaled.values():
        for key in row:
            row[key] *= 7.5
    for _ in range(200):
        features = [_feat(c, quality=rng.uniform(0.1, 1.0)) for c in ALL_CHANNELS]
        zs = [rng.uniform(-3, 3) for _ in ALL_CHANNELS]
        for dimension in Dimension:
            s1, c1 = dimension_score(features, zs, base, dimension)
            s2, c2 = dimension_score(features, zs, scaled, dimension)
            assert s1 == pytest.approx(s2, rel=1e-12)
            assert c1 == pytest.approx(c2, rel=1e-12)


def test_empty_weight_row_raises():
    weights = default_weight_matrix()
    weights[Dimension.STRESS] = {}
    with pytest.raises(NoUsableChannelsError):
        dimension_score([_feat(CHANNEL_PNN50)], [1.0], weights, Dimension.STRESS)


def test_all_quality_at_floor_raises():
    features = [_feat(CHANNEL_PNN50, quality=0.0)]
    with pytest.raises(NoUsableChannelsError):
        dimension_score(features, [2.0], default_weight_matrix(), Dimension.STRESS)
    # quality exactly at the floor is unusable too (strict comparison)
    features = [_feat(CHANNEL_PNN50, quality=0.3)]
    with pytest.raises(NoUsableChannelsError):
        dimension_score(
            features, [2.0], default_weight_matrix(), Dimension.STRESS, quality_floor=0.3
        )


# ---------------------------------------------------------------------------
# descriptors

def test_descriptor_band_edges():
    assert to_descriptor(0.0) is Descriptor.NOMINAL
    assert to_descriptor(0.999) is Descriptor.NOMINAL
    assert to_descriptor(1.0) is Descriptor.MODERATE
    assert to_descriptor(1.499) is Descriptor.MODERATE
    assert to_descriptor(1.5) is Descriptor.PRONOUNCED
    assert to_descriptor(9.0) is Descriptor.PRONOUNCED
    with pytest.raises(ValueError):
        to_descriptor(-0.1)


# ---------------------------------------------------------------------------
# full state inference

def test_infer_state_scores_observed_dimensions():
    profile = _profile(
        pnn50_percent=(30.0, 10.0),
        rmssd_ms=(40.0, 8.0),
        heart_rate_bpm=(70.0, 5.0),
    )
    features = [
        _feat(CHANNEL_PNN50, value=10.0),   # z = -2
        _feat(CHANNEL_RMSSD, value=24.0),   # z = -2
        _feat(CHANNEL_HEART_RATE, value=80.0),  # z = +2
    ]
    state = infer_state(features, profile, default_weight_matrix(), t=100.0)
    stress = state.dims[Dimension.STRESS]
    assert stress.observed
    assert stress.score == pytest.approx(2.0, abs=1e-9)
    assert stress.descriptor is Descriptor.PRONOUNCED
    assert stress.confidence == pytest.approx(1.0)
    # signed average: (0.4*(-2) + 0.3*(-2) + 0.3*2) / 1.0 = -0.8
    assert stress.signed_score == pytest.approx(-0.8, abs=1e-9)
    assert stress.supra_channels == 3
    assert state.score(Dimension.STRESS) == stress.score


def test_infer_state_marks_unobserved_dimensions():
    profile = _profile(pnn50_percent=(30.0, 10.0))
    features = [_feat(CHANNEL_PNN50, value=10.0)]
    state = infer_state(features, profile, default_weight_matrix(), t=0.0)
    attention = state.dims[Dimension.ATTENTION]
    assert not attention.observed
    assert attention.score == 0.0
    assert attention.confidence == 0.0
    assert attention.descriptor is Descriptor.NOMINAL
    assert len(state.dims) == len(Dimension)


def test_infer_state_drops_uncalibrated_channels():
    profile = _profile(pnn50_percent=(30.0, 10.0))
    features = [
        _feat(CHANNEL_PNN50, value=50.0),       # z = +2
        _feat(CHANNEL_NOTE_ERROR, value=0.9),   # no baseline: ignored
    ]
    state = infer_state(features, profile, default_weight_matrix(), t=0.0)
    assert state.dims[Dimension.STRESS].observed
    assert not state.dims[Dimension.UNDERSTANDING].observed


def test_supra_channel_count_uses_trigger_threshold():
    profile = _profile(pnn50_percent=(30.0, 10.0), rmssd_ms=(40.0, 8.0))
    features = [
        _feat(CHANNEL_PNN50, value=14.0),  # z = -1.6
        _feat(CHANNEL_RMSSD, value=44.0),  # z = +0.5
    ]
    state = infer_state(
        features, profile, default_weight_matrix(), t=0.0, trigger_threshold=1.5
    )
    assert state.dims[Dimension.STRESS].supra_channels == 1
    state = infer_state(
        features, profile, default_weight_matrix(), t=0.0, trigger_threshold=0.5
    )
    # |0.5| >= 0.5: the boundary counts
    assert state.dims[Dimension.STRESS].supra_channels == 2


def test_compute_baseline_matches_statistics_oracle():
    rng = random.Random(313)
    for _ in range(100):
        values = [(rng.uniform(0, 100), rng.uniform(0.5, 1.0)) for _ in range(40)]
        profile = compute_baseline({"pupil_mm": values}, min_samples=30)
        baseline = profile.channels["pupil_mm"]
        raw = [v for v, _ in values]
        assert baseline.mu == pytest.approx(statistics.fmean(raw), abs=1e-12)
        assert baseline.sigma == pytest.approx(statistics.pstdev(raw), abs=1e-12)
