import math
import random
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mudslide.aggregation import (
    BadSlideIndexError,
    ColorClass,
    ColorMode,
    HeatmapOptions,
    PlacedPoint,
    baseline_comments,
    color_of,
    featured_slide,
    hit_test,
    points_by_slide,
    slide_comments,
    summary,
)
from mudslide.model import ConfusionRating, Mode, MuddyPoint

from conftest import make_card, make_lecture, seed_point_counts

R = ConfusionRating


def place(x, y, rating=R.MODERATELY_CONFUSING, card_id="c", slide=1):
    return PlacedPoint(
        point=MuddyPoint(slide, x, y, "t"),
        card_id=card_id,
        rating=rating,
        color_class=color_of(rating, ColorMode.TWO_TONE),
    )


class TestPointsBySlide:
    def test_two_slide_share_split(self):
        # 106 points split 7/99 puts 93.4% of the mass on slide 2.
        lecture = make_lecture(n_slides=2)
        cards = seed_point_counts(lecture, {1: 7, 2: 99}, random.Random(7))
        aggs = points_by_slide(cards, lecture)
        assert aggs[1].point_count == 7
        assert aggs[2].point_count == 99
        assert aggs[1].share == pytest.approx(0.066, abs=5e-4)
        assert aggs[2].share == pytest.approx(0.934, abs=5e-4)
        assert aggs[1].share + aggs[2].share == pytest.approx(1.0, abs=1e-9)

    def test_no_cards(self):
        lecture = make_lecture(n_slides=2)
        aggs = points_by_slide([], lecture)
        assert set(aggs) == {1, 2}
        assert all(agg.point_count == 0 and agg.share == 0.0 for agg in aggs.values())

    def test_matches_brute_force_tally(self):
        rng = random.Random(42)
        lecture = make_lecture(n_slides=5)
        cards = [
            make_card(
                lecture,
                points=[
                    (rng.randint(1, 5), rng.random(), rng.random(), f"p{i}-{j}")
                    for j in range(2)
                ],
            )
            for i in range(3)
        ]
        expected = Counter(p.slide_index for c in cards for p in c.points)
        aggs = points_by_slide(cards, lecture)
        for index in range(1, 6):
            assert aggs[index].point_count == expected.get(index, 0)

    def test_partition_no_point_lost_or_duplicated(self):
        rng = random.Random(3)
        lecture = make_lecture(n_slides=4)
        cards = seed_point_counts(lecture, {1: 5, 2: 0, 3: 11, 4: 2}, rng, points_per_card=3)
        aggs = points_by_slide(cards, lecture)
        original = Counter(
            (c.card_id, p.slide_index, p.x, p.y) for c in cards for p in c.points
        )
        bucketed = Counter(
            (pp.card_id, pp.point.slide_index, pp.point.x, pp.point.y)
            for agg in aggs.values()
            for pp in agg.points
        )
        assert original == bucketed

    def test_submission_order_kept_within_slide(self):
        lecture = make_lecture(n_slides=1)
        cards = [
            make_card(lecture, points=[(1, 0.1, 0.1, "first"), (1, 0.2, 0.2, "second")]),
            make_card(lecture, points=[(1, 0.3, 0.3, "third")]),
        ]
        texts = [pp.point.text for pp in points_by_slide(cards, lecture)[1].points]
        assert texts == ["first", "second", "third"]


class TestFeaturedSlide:
    def test_majority_slide_wins(self):
        lecture = make_lecture(n_slides=2)
        cards = seed_point_counts(lecture, {1: 7, 2: 99}, random.Random(1))
        assert featured_slide(points_by_slide(cards, lecture)) == 2

    def test_plurality_of_19_in_60(self):
        lecture = make_lecture(n_slides=13)
        counts = {i: 0 for i in range(1, 14)}
        counts[7] = 19
        rest = 60 - 19
        for i in range(rest):  # spread remaining 41 points off slide 7
            index = (i % 12) + 1
            counts[index if index < 7 else index + 1] += 1
        cards = seed_point_counts(lecture, counts, random.Random(2))
        assert featured_slide(points_by_slide(cards, lecture)) == 7

    def test_tie_breaks_to_lowest_index(self):
        lecture = make_lecture(n_slides=2)
        cards = seed_point_counts(lecture, {1: 5, 2: 5}, random.Random(4))
        assert featured_slide(points_by_slide(cards, lecture)) == 1

    def test_none_without_points(self):
        lecture = make_lecture(n_slides=2)
        assert featured_slide(points_by_slide([], lecture)) is None

    def test_maximality_property(self):
        rng = random.Random(11)
        lecture = make_lecture(n_slides=6)
        for _ in range(25):
            counts = {i: rng.randint(0, 8) for i in range(1, 7)}
            cards = seed_point_counts(lecture, counts, rng)
            aggs = points_by_slide(cards, lecture)
            featured = featured_slide(aggs)
            if sum(counts.values()) == 0:
                assert featured is None
                continue
            top = aggs[featured].point_count
            assert all(agg.point_count <= top for agg in aggs.values())
            assert featured == min(
                i for i, agg in aggs.items() if agg.point_count == top
            )


class TestHitTest:
    def test_click_on_center_hits(self):
        slide = make_lecture().slides[0]
        point = place(0.4, 0.6)
        assert hit_test((0.4, 0.6), slide, [point], HeatmapOptions()) == [point]

    def test_far_click_misses(self):
        slide = make_lecture().slides[0]
        point = place(0.1, 0.1)
        assert hit_test((0.9, 0.9), slide, [point], HeatmapOptions()) == []

    def test_overlapping_circles_both_hit(self):
        # Square slide: both centers sit 0.01*W from the click, radius 0.03*W.
        slide = make_lecture(width=1000, height=1000).slides[0]
        near = place(0.50, 0.50)
        also_near = place(0.52, 0.50)
        hits = hit_test(
            (0.51, 0.50), slide, [near, also_near], HeatmapOptions(radius_frac=0.03)
        )
        assert hits == [near, also_near]

    def test_boundary_is_inclusive(self):
        # Exact arithmetic: r = 0.25 * 4 = 1.0 and the click is 1.0 away.
        slide = make_lecture(width=4, height=4).slides[0]
        point = place(0.5, 0.5)
        hits = hit_test((0.75, 0.5), slide, [point], HeatmapOptions(radius_frac=0.25))
        assert hits == [point]

    def test_aspect_correct_distance(self):
        # On a wide slide, equal coordinate offsets are unequal pixel offsets.
        slide = make_lecture(width=2000, height=500).slides[0]
        point = place(0.5, 0.5)
        opts = HeatmapOptions(radius_frac=0.03)  # radius = 60px
        assert hit_test((0.5, 0.6), slide, [point], opts) == [point]  # dy = 50px
        assert hit_test((0.53, 0.5), slide, [point], opts) == []  # dx = 60.0000...px?

    def test_matches_brute_force_oracle(self):
        rng = random.Random(1234)
        for _ in range(500):
            w, h = rng.randint(100, 2000), rng.randint(100, 2000)
            slide = make_lecture(width=w, height=h).slides[0]
            opts = HeatmapOptions(radius_frac=rng.uniform(0.005, 0.25))
            points = [
                place(rng.random(), rng.random(), card_id=str(i))
                for i in range(rng.randint(0, 12))
            ]
            click = (rng.random(), rng.random())
            expected = [
                pp
                for pp in points
                if math.sqrt(
                    ((click[0] - pp.point.x) * w) ** 2
                    + ((click[1] - pp.point.y) * h) ** 2
                )
                <= opts.radius_frac * w
            ]
            assert hit_test(click, slide, points, opts) == expected


class TestColorOf:
    def test_not_confusing_is_gray(self):
        assert color_of(R.NOT_CONFUSING, ColorMode.TWO_TONE) is ColorClass.GRAY

    @pytest.mark.parametrize(
        "rating", [R.EXTREMELY_CONFUSING, R.MODERATELY_CONFUSING, R.SLIGHTLY_CONFUSING]
    )
    def test_any_confusion_is_red(self, rating):
        assert color_of(rating, ColorMode.TWO_TONE) is ColorClass.RED

    def test_gray_iff_not_confusing(self):
        for rating in R:
            is_gray = color_of(rating, ColorMode.TWO_TONE) is ColorClass.GRAY
            assert is_gray == (rating is R.NOT_CONFUSING)

    def test_four_level_bijection(self):
        mapping = {rating: color_of(rating, ColorMode.FOUR_LEVEL) for rating in R}
        assert mapping == {
            R.EXTREMELY_CONFUSING: ColorClass.L1,
            R.MODERATELY_CONFUSING: ColorClass.L2,
            R.SLIGHTLY_CONFUSING: ColorClass.L3,
            R.NOT_CONFUSING: ColorClass.L4,
        }


class TestSlideComments:
    def test_submission_order(self):
        lecture = make_lecture(n_slides=2)
        cards = [
            make_card(lecture, points=[(2, 0.1, 0.1, "first"), (1, 0.5, 0.5, "other slide")]),
            make_card(lecture, points=[(2, 0.2, 0.2, "second"), (2, 0.3, 0.3, "third")]),
        ]
        got = slide_comments(2, cards, lecture)
        assert [c.text for c in got] == ["first", "second", "third"]
        assert got[0].card_id == cards[0].card_id

    def test_empty_slide(self):
        lecture = make_lecture(n_slides=2)
        cards = [make_card(lecture, points=[(1, 0.5, 0.5, "only slide 1")])]
        assert slide_comments(2, cards, lecture) == []

    def test_bad_index(self):
        lecture = make_lecture(n_slides=2)
        with pytest.raises(BadSlideIndexError):
            slide_comments(99, [], lecture)


class TestBaselineComments:
    def test_most_confusing_first(self):
        lecture = make_lecture(n_slides=0, mode=Mode.BASELINE)
        cards = [
            make_card(lecture, rating=R.NOT_CONFUSING, free_text="meh"),
            make_card(lecture, rating=R.EXTREMELY_CONFUSING, free_text="lost"),
            make_card(lecture, rating=R.SLIGHTLY_CONFUSING, free_text="hmm"),
        ]
        assert [r for _, r in baseline_comments(cards)] == [
            R.EXTREMELY_CONFUSING,
            R.SLIGHTLY_CONFUSING,
            R.NOT_CONFUSING,
        ]

    def test_ties_keep_submission_order(self):
        lecture = make_lecture(n_slides=0, mode=Mode.BASELINE)
        cards = [
            make_card(lecture, rating=R.MODERATELY_CONFUSING, free_text=f"c{i}")
            for i in range(5)
        ]
        assert [t for t, _ in baseline_comments(cards)] == [f"c{i}" for i in range(5)]

    def test_empty(self):
        assert baseline_comments([]) == []

    @given(
        ratings=st.lists(st.sampled_from(list(ConfusionRating)), max_size=30)
    )
    def test_sorted_permutation(self, ratings):
        lecture = make_lecture(n_slides=0, mode=Mode.BASELINE)
        cards = [
            make_card(lecture, rating=r, free_text=f"c{i}")
            for i, r in enumerate(ratings)
        ]
        out = baseline_comments(cards)
        got = [r for _, r in out]
        assert got == sorted(ratings, reverse=True)
        assert Counter(t for t, _ in out) == Counter(c.free_text for c in cards)


class TestSummary:
    def test_figure_like_fixture(self):
        lecture = make_lecture(n_slides=2)
        cards = seed_point_counts(lecture, {1: 7, 2: 99}, random.Random(9))
        stats = summary(cards, lecture)
        assert stats.point_count == 106
        assert stats.featured_slide == 2
        assert sum(stats.rating_histogram.values()) == stats.card_count

    def test_empty(self):
        lecture = make_lecture(n_slides=2)
        stats = summary([], lecture)
        assert stats.card_count == 0
        assert stats.point_count == 0
        assert stats.points_per_card_mean == 0.0
        assert stats.featured_slide is None
        assert all(v == 0 for v in stats.rating_histogram.values())

    def test_matches_independent_recount(self):
        rng = random.Random(17)
        lecture = make_lecture(n_slides=3)
        cards = seed_point_counts(lecture, {1: 4, 2: 9, 3: 1}, rng, points_per_card=3)
        stats = summary(cards, lecture)
        assert stats.card_count == len(cards)
        assert stats.point_count == sum(len(c.points) for c in cards)
        assert stats.points_per_card_mean == pytest.approx(
            sum(len(c.points) for c in cards) / len(cards)
        )
        assert stats.rating_histogram == {
            r: sum(1 for c in cards if c.rating is r) for r in sorted(R, reverse=True)
        }
