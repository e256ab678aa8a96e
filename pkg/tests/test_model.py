import pytest
from hypothesis import given
from hypothesis import strategies as st

from mudslide.model import (
    AccessToken,
    ConfusionRating,
    Lecture,
    Mode,
    Role,
    Slide,
    UnknownRating,
    ViolationCode,
    mint_id,
    parse_rating,
    validate_card,
)

from conftest import make_card, make_lecture


class TestParseRating:
    def test_space_separated(self):
        assert parse_rating("not confusing") is ConfusionRating.NOT_CONFUSING

    def test_underscore_and_case(self):
        assert parse_rating("NOT_CONFUSING") is ConfusionRating.NOT_CONFUSING
        assert parse_rating("Extremely Confusing") is ConfusionRating.EXTREMELY_CONFUSING

    def test_outside_vocabulary(self):
        with pytest.raises(UnknownRating):
            parse_rating("very confusing")

    def test_no_fuzzy_match(self):
        with pytest.raises(UnknownRating):
            parse_rating("not confusin")

    @pytest.mark.parametrize("rating", list(ConfusionRating))
    def test_label_round_trip(self, rating):
        assert parse_rating(rating.label) is rating

    def test_total_order(self):
        assert (
            ConfusionRating.EXTREMELY_CONFUSING
            > ConfusionRating.MODERATELY_CONFUSING
            > ConfusionRating.SLIGHTLY_CONFUSING
            > ConfusionRating.NOT_CONFUSING
        )


class TestLectureInvariants:
    def test_spatial_lecture_needs_slides(self):
        with pytest.raises(ValueError):
            make_lecture(n_slides=0, mode=Mode.SPATIAL)

    def test_baseline_lecture_may_be_slideless(self):
        lecture = make_lecture(n_slides=0, mode=Mode.BASELINE)
        assert lecture.slides == ()

    def test_tokens_must_differ(self):
        token = mint_id()
        with pytest.raises(ValueError):
            Lecture(
                lecture_id=mint_id(),
                title="t",
                slides=(Slide(1, "slides/a.png", 10, 10),),
                student_token=AccessToken(token, Role.STUDENT),
                teacher_token=AccessToken(token, Role.TEACHER),
                mode=Mode.SPATIAL,
            )

    def test_indices_contiguous(self):
        with pytest.raises(ValueError):
            Lecture(
                lecture_id=mint_id(),
                title="t",
                slides=(Slide(2, "slides/a.png", 10, 10),),
                student_token=AccessToken(mint_id(), Role.STUDENT),
                teacher_token=AccessToken(mint_id(), Role.TEACHER),
                mode=Mode.SPATIAL,
            )


def test_minted_ids_are_cli_safe():
    # a leading '-' would make an id unusable as a bare --lecture argument
    assert all(not mint_id().startswith("-") for _ in range(2000))


def codes(violations):
    return [v.code for v in violations]


class TestValidateCard:
    def test_valid_card_passes(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(1, 0.5, 0.5, "unclear equation")])
        assert validate_card(card, lecture) == []

    def test_spatial_card_needs_points(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[])
        assert codes(validate_card(card, lecture)) == [ViolationCode.NO_POINTS]

    def test_whitespace_text_is_empty(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(1, 0.5, 0.5, "   ")])
        assert codes(validate_card(card, lecture)) == [ViolationCode.EMPTY_TEXT]

    def test_coordinate_out_of_range(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(1, 1.2, 0.5, "off the slide")])
        assert codes(validate_card(card, lecture)) == [ViolationCode.COORD_OUT_OF_RANGE]

    def test_boundary_coordinates_are_legal(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(1, 0.0, 1.0, "corner"), (2, 1.0, 0.0, "corner")])
        assert validate_card(card, lecture) == []

    def test_bad_slide_index(self):
        lecture = make_lecture(n_slides=2)
        card = make_card(lecture, points=[(99, 0.5, 0.5, "no such slide")])
        assert codes(validate_card(card, lecture)) == [ViolationCode.BAD_SLIDE_INDEX]

    def test_missing_rating(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(1, 0.5, 0.5, "x")], rating=None)
        assert codes(validate_card(card, lecture)) == [ViolationCode.MISSING_RATING]

    def test_mode_mismatch(self):
        lecture = make_lecture()
        card = make_card(lecture, mode=Mode.BASELINE, free_text="all of it")
        assert ViolationCode.MODE_MISMATCH in codes(validate_card(card, lecture))

    def test_free_text_on_spatial_card(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(1, 0.5, 0.5, "x")], free_text="extra")
        assert codes(validate_card(card, lecture)) == [ViolationCode.MODE_MISMATCH]

    def test_text_too_long(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(1, 0.5, 0.5, "z" * 2001)])
        assert codes(validate_card(card, lecture)) == [ViolationCode.TEXT_TOO_LONG]

    def test_text_at_limit_is_legal(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(1, 0.5, 0.5, "z" * 2000)])
        assert validate_card(card, lecture) == []

    def test_baseline_card(self):
        lecture = make_lecture(n_slides=0, mode=Mode.BASELINE)
        ok = make_card(lecture, free_text="the middle part lost me")
        assert validate_card(ok, lecture) == []
        empty = make_card(lecture, free_text="  \t ")
        assert codes(validate_card(empty, lecture)) == [ViolationCode.EMPTY_TEXT]
        pointy = make_card(lecture, points=[(1, 0.5, 0.5, "x")], free_text="hm")
        assert codes(validate_card(pointy, lecture)) == [ViolationCode.MODE_MISMATCH]

    def test_all_violations_reported_at_once(self):
        lecture = make_lecture(n_slides=2)
        card = make_card(
            lecture,
            points=[(99, 1.5, -0.1, "  "), (1, 0.5, 0.5, "fine")],
            rating=None,
        )
        got = codes(validate_card(card, lecture))
        assert got == [
            ViolationCode.MISSING_RATING,
            ViolationCode.BAD_SLIDE_INDEX,
            ViolationCode.COORD_OUT_OF_RANGE,
            ViolationCode.EMPTY_TEXT,
        ]

    def test_point_index_reported(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(1, 0.5, 0.5, "ok"), (1, 2.0, 0.5, "bad")])
        [violation] = validate_card(card, lecture)
        assert violation.point_index == 1

    def test_pure_and_deterministic(self):
        lecture = make_lecture()
        card = make_card(lecture, points=[(9, 1.5, 0.5, " ")], rating=None)
        assert validate_card(card, lecture) == validate_card(card, lecture)


@given(
    x=st.floats(min_value=0, max_value=1, allow_nan=False),
    y=st.floats(min_value=0, max_value=1, allow_nan=False),
    slide=st.integers(min_value=1, max_value=3),
    rating=st.sampled_from(list(ConfusionRating)),
    text=st.text(min_size=1, max_size=200).filter(lambda t: t.strip()),
)
def test_any_in_range_point_validates(x, y, slide, rating, text):
    lecture = make_lecture(n_slides=3)
    card = make_card(lecture, points=[(slide, x, y, text)], rating=rating)
    assert validate_card(card, lecture) == []
