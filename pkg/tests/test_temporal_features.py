from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osnmatch.errors import MixedUserError, ModeMismatchError, SamePlatformError
from osnmatch.profile_features import Platform
from osnmatch.temporal_features import (
    ActivityHistogram,
    ActivityMask,
    HistogramMode,
    PostEvent,
    boolean_jaccard,
    build_histogram,
    extract_temporal_features,
    to_mask,
)

UTC = timezone.utc


def event(hour=12, day_offset=0, platform=Platform.TWITTER, user_id="u1", minute=0):
    # 2022-01-03 is a Monday, so day_offset equals the weekday bin
    ts = datetime(2022, 1, 3, hour, minute, tzinfo=UTC) + timedelta(days=day_offset)
    return PostEvent(platform=platform, user_id=user_id, timestamp=ts)


class TestPostEvent:
    def test_naive_timestamp_rejected(self):
        with pytest.raises(ValueError):
            PostEvent(
                platform=Platform.TWITTER,
                user_id="u1",
                timestamp=datetime(2022, 1, 3, 12, 0),
            )


class TestBuildHistogram:
    def test_empty_events(self):
        h = build_histogram([], HistogramMode.HOUR_OF_DAY)
        assert h.counts == [0] * 24

    def test_hour_binning(self):
        events = [event(hour=9, minute=5), event(hour=9, minute=59), event(hour=21)]
        h = build_histogram(events, HistogramMode.HOUR_OF_DAY)
        assert h.counts[9] == 2
        assert h.counts[21] == 1
        assert sum(h.counts) == 3

    def test_one_event_per_weekday(self):
        events = [event(day_offset=d) for d in range(7)]
        h = build_histogram(events, HistogramMode.DAY_OF_WEEK)
        assert h.counts == [1] * 7

    def test_mixed_users_rejected(self):
        with pytest.raises(MixedUserError):
            build_histogram(
                [event(user_id="u1"), event(user_id="u2")], HistogramMode.HOUR_OF_DAY
            )

    def test_bins_use_utc(self):
        plus_two = timezone(timedelta(hours=2))
        e = PostEvent(
            platform=Platform.TWITTER,
            user_id="u1",
            timestamp=datetime(2022, 1, 3, 1, 0, tzinfo=plus_two),  # 23:00 UTC Sunday
        )
        h = build_histogram([e], HistogramMode.HOUR_OF_DAY)
        assert h.counts[23] == 1
        d = build_histogram([e], HistogramMode.DAY_OF_WEEK)
        assert d.counts[6] == 1  # Sunday

    @given(st.lists(st.integers(0, 23), max_size=40))
    @settings(max_examples=30)
    def test_count_conservation(self, hours):
        events = [event(hour=h, minute=i % 60) for i, h in enumerate(hours)]
        h = build_histogram(events, HistogramMode.HOUR_OF_DAY)
        assert sum(h.counts) == len(events)


class TestToMask:
    def test_all_zero(self):
        h = ActivityHistogram(HistogramMode.DAY_OF_WEEK, [0] * 7)
        assert to_mask(h).active == [False] * 7

    def test_thresholding(self):
        h = ActivityHistogram(HistogramMode.DAY_OF_WEEK, [2, 0, 1, 0, 0, 0, 0])
        assert to_mask(h).active == [True, False, True, False, False, False, False]

    def test_idempotent_through_counts(self):
        h = ActivityHistogram(HistogramMode.DAY_OF_WEEK, [5, 0, 2, 0, 1, 0, 0])
        mask = to_mask(h)
        again = to_mask(
            ActivityHistogram(
                HistogramMode.DAY_OF_WEEK, [1 if v else 0 for v in mask.active]
            )
        )
        assert again.active == mask.active


class TestBooleanJaccard:
    def test_identical_nonempty(self):
        m = ActivityMask(HistogramMode.DAY_OF_WEEK, [True, False, True] + [False] * 4)
        assert boolean_jaccard(m, m) == 1.0

    def test_partial_overlap(self):
        x = ActivityMask(HistogramMode.DAY_OF_WEEK, [True, False, True] + [False] * 4)
        y = ActivityMask(HistogramMode.DAY_OF_WEEK, [True, True, False] + [False] * 4)
        assert boolean_jaccard(x, y) == pytest.approx(1 / 3)

    def test_both_empty(self):
        x = ActivityMask(HistogramMode.DAY_OF_WEEK, [False] * 7)
        assert boolean_jaccard(x, x) == 0.0

    def test_mode_mismatch(self):
        x = ActivityMask(HistogramMode.DAY_OF_WEEK, [False] * 7)
        y = ActivityMask(HistogramMode.HOUR_OF_DAY, [False] * 24)
        with pytest.raises(ModeMismatchError):
            boolean_jaccard(x, y)

    @given(st.lists(st.booleans(), min_size=7, max_size=7),
           st.lists(st.booleans(), min_size=7, max_size=7))
    @settings(max_examples=40)
    def test_symmetric_and_bounded(self, xs, ys):
        x = ActivityMask(HistogramMode.DAY_OF_WEEK, xs)
        y = ActivityMask(HistogramMode.DAY_OF_WEEK, ys)
        j = boolean_jaccard(x, y)
        assert j == boolean_jaccard(y, x)
        assert 0.0 <= j <= 1.0
        if any(xs) or any(ys):
            assert (j == 1.0) == (xs == ys)


class TestExtractTemporalFeatures:
    def test_empty_accounts(self):
        vec = extract_temporal_features([], [], HistogramMode.HOUR_OF_DAY)
        assert vec.values == [0.0] * 49

    def test_identical_streams(self):
        a = [event(hour=h, platform=Platform.TWITTER) for h in (1, 5, 9)]
        b = [
            event(hour=h, platform=Platform.FLICKR, user_id="u2") for h in (1, 5, 9)
        ]
        vec = extract_temporal_features(a, b, HistogramMode.HOUR_OF_DAY)
        assert vec.values[-1] == 1.0
        assert vec.values[:24] == vec.values[24:48]

    def test_hod_dimension(self):
        vec = extract_temporal_features([], [], HistogramMode.HOUR_OF_DAY)
        assert len(vec.values) == 49

    def test_dow_dimension(self):
        vec = extract_temporal_features([], [], HistogramMode.DAY_OF_WEEK)
        assert len(vec.values) == 15

    def test_same_platform_rejected(self):
        a = [event(platform=Platform.TWITTER, user_id="u1")]
        b = [event(platform=Platform.TWITTER, user_id="u2")]
        with pytest.raises(SamePlatformError):
            extract_temporal_features(a, b, HistogramMode.HOUR_OF_DAY)
