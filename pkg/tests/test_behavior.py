import math

import pytest

from cogloop.behavior import (
    PostureCategory,
    categorize_posture,
    ingest_note_assessment,
    score_posture,
)
from cogloop.errors import MalformedReplyError, MissingLandmarksError, OutOfRangeError
from cogloop.model import PostureSample

UPRIGHT = {
    "shoulder_left": (0.38, 0.50),
    "shoulder_right": (0.62, 0.50),
    "ear_left": (0.44, 0.30),
    "ear_right": (0.56, 0.30),
    "hip_left": (0.42, 0.88),
    "hip_right": (0.58, 0.88),
}


def _pose(overrides=None, drop=(), visibility=None):
    landmarks = {k: v for k, v in UPRIGHT.items() if k not in drop}
    landmarks.update(overrides or {})
    return PostureSample(landmarks=landmarks, visibility=visibility or {})


# ---------------------------------------------------------------------------
# scoring

def test_identical_pose_scores_100_ideal():
    score = score_posture(_pose(), _pose())
    assert score.percent == pytest.approx(100.0)
    assert score.category is PostureCategory.IDEAL
    assert set(score.sub_scores) == {"shoulder_level", "neck_alignment", "back_straightness"}
    assert all(v == pytest.approx(100.0) for v in score.sub_scores.values())


def test_shoulder_tilt_degrades_its_sub_score():
    # raise the right shoulder so the shoulder line tilts by 5 degrees:
    # half the 10-degree tolerance, so the sub-score drops to 50
    dx = 0.62 - 0.38
    dy = dx * math.tan(math.radians(5.0))
    tilted = _pose({"shoulder_right": (0.62, 0.50 - dy)})
    score = score_posture(tilted, _pose())
    assert score.sub_scores["shoulder_level"] == pytest.approx(50.0, abs=1e-9)
    assert score.sub_scores["neck_alignment"] == pytest.approx(100.0)


def test_forward_head_drift_degrades_neck_alignment():
    # ear midpoint shifted by the full 0.05 tolerance -> sub-score 0
    shifted = _pose({
        "ear_left": (0.44 + 0.05, 0.30),
        "ear_right": (0.56 + 0.05, 0.30),
    })
    score = score_posture(shifted, _pose())
    assert score.sub_scores["neck_alignment"] == pytest.approx(0.0, abs=1e-9)
    assert score.sub_scores["shoulder_level"] == pytest.approx(100.0)


def test_degradation_is_monotone_in_lean():
    def leaned(deg):
        dx = math.tan(math.radians(deg)) * 0.38
        return _pose({
            "shoulder_left": (0.38 + dx, 0.50),
            "shoulder_right": (0.62 + dx, 0.50),
            "ear_left": (0.44 + dx, 0.30),
            "ear_right": (0.56 + dx, 0.30),
        })

    percents = [score_posture(leaned(d), _pose()).percent for d in (0.0, 2.0, 4.0, 8.0)]
    assert percents == sorted(percents, reverse=True)
    assert percents[0] > percents[-1]


def test_missing_shoulders_raise():
    with pytest.raises(MissingLandmarksError):
        score_posture(_pose(drop=("shoulder_left",)), _pose())
    with pytest.raises(MissingLandmarksError):
        score_posture(_pose(), _pose(drop=("shoulder_right",)))
    # low visibility counts as missing
    with pytest.raises(MissingLandmarksError):
        score_posture(_pose(visibility={"shoulder_left": 0.2}), _pose())


def test_sub_scores_shrink_to_visible_landmarks():
    no_ears = _pose(drop=("ear_left", "ear_right"))
    score = score_posture(no_ears, _pose())
    assert set(score.sub_scores) == {"shoulder_level", "back_straightness"}

    shoulders_only = _pose(drop=("ear_left", "ear_right", "hip_left", "hip_right"))
    score = score_posture(shoulders_only, _pose())
    assert set(score.sub_scores) == {"shoulder_level"}
    assert score.percent == pytest.approx(score.sub_scores["shoulder_level"])


# ---------------------------------------------------------------------------
# banding

def test_posture_bands():
    assert categorize_posture(95.0) is PostureCategory.IDEAL
    assert categorize_posture(90.0) is PostureCategory.IDEAL
    assert categorize_posture(89.999) is PostureCategory.AVERAGE
    assert categorize_posture(80.0) is PostureCategory.AVERAGE
    assert categorize_posture(75.0) is PostureCategory.AVERAGE
    assert categorize_posture(72.0) is PostureCategory.BELOW_AVERAGE
    assert categorize_posture(60.0) is PostureCategory.BELOW_AVERAGE
    assert categorize_posture(59.9) is PostureCategory.POOR
    assert categorize_posture(0.0) is PostureCategory.POOR


def test_posture_band_rejects_out_of_range():
    with pytest.raises(OutOfRangeError):
        categorize_posture(-1.0)
    with pytest.raises(OutOfRangeError):
        categorize_posture(100.5)


# ---------------------------------------------------------------------------
# note assessment replies

def test_reply_parses_score_and_feedback():
    sample = ingest_note_assessment("score=0.8; feedback=solid summary", analyzer_id="a1")
    assert sample.correctness == pytest.approx(0.8)
    assert sample.feedback_text == "solid summary"
    assert sample.analyzer_id == "a1"
    assert not sample.clamped


def test_reply_whitespace_is_tolerated():
    sample = ingest_note_assessment("  score = 0.55 ;  feedback =  needs detail  ")
    assert sample.correctness == pytest.approx(0.55)
    assert sample.feedback_text == "needs detail"


def test_out_of_range_scores_clamp_and_flag():
    high = ingest_note_assessment("score=1.2; feedback=great")
    assert high.correctness == 1.0
    assert high.clamped
    low = ingest_note_assessment("score=-0.3; feedback=off track")
    assert low.correctness == 0.0
    assert low.clamped


def test_malformed_replies_raise():
    for raw in (
        "no structure at all",
        "score=; feedback=x",
        "score=abc; feedback=x",
        "score=nan; feedback=x",
        "score=inf; feedback=x",
        "feedback=x; score=0.5",
        "",
    ):
        with pytest.raises(MalformedReplyError):
            ingest_note_assessment(raw)
