"""Domain types for lectures, muddy points, and submission validation.

Everything here is an immutable value; the validation entry point
(`validate_card`) is a pure function that reports every problem it finds
rather than stopping at the first one.
"""

from __future__ import annotations

import enum
import secrets
from dataclasses import dataclass
from datetime import datetime, timezone

MAX_TEXT_LENGTH = 2000

# Canonical wire labels, most to least confusing.
RATING_LABELS = (
    "extremely_confusing",
    "moderately_confusing",
    "slightly_confusing",
    "not_confusing",
)


class UnknownRating(ValueError):
    """A rating label outside the four-value vocabulary."""


class Mode(str, enum.Enum):
    SPATIAL = "spatial"
    BASELINE = "baseline"


class Role(str, enum.Enum):
    STUDENT = "student"
    TEACHER = "teacher"


class ConfusionRating(enum.IntEnum):
    """Holistic lecture clarity judgment; larger value = more confusing."""

    NOT_CONFUSING = 1
    SLIGHTLY_CONFUSING = 2
    MODERATELY_CONFUSING = 3
    EXTREMELY_CONFUSING = 4

    @property
    def label(self) -> str:
        return self.name.lower()


def parse_rating(label: str) -> ConfusionRating:
    """Map a canonical rating label to its enum value.

    Matching is case-insensitive and accepts either underscores or spaces
    as the word separator ("not confusing" == "NOT_CONFUSING"). Anything
    else raises UnknownRating; there is no fuzzy matching.
    """
    normalized = label.strip().lower().replace(" ", "_")
    for rating in ConfusionRating:
        if normalized == rating.label:
            return rating
    raise UnknownRating(f"unknown rating label: {label!r}")


def mint_id() -> str:
    """A fresh 128-bit random identifier, URL-safe encoded.

    Values starting with '-' are rejected (re-rolled) so an identifier can
    always be passed as a bare command-line argument.
    """
    while True:
        value = secrets.token_urlsafe(16)
        if not value.startswith("-"):
            return value


@dataclass(frozen=True)
class AccessToken:
    value: str
    role: Role


@dataclass(frozen=True)
class Slide:
    """One slide image in a lecture, identified by its 1-based position."""

    index: int
    image_file: str
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"slide index must be >= 1, got {self.index}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(
                f"slide dimensions must be positive, got {self.width}x{self.height}"
            )


@dataclass(frozen=True)
class Lecture:
    """A slide gallery plus the two capability tokens that gate access."""

    lecture_id: str
    title: str
    slides: tuple[Slide, ...]
    student_token: AccessToken
    teacher_token: AccessToken
    mode: Mode

    def __post_init__(self) -> None:
        if self.mode is Mode.SPATIAL and not self.slides:
            raise ValueError("a spatial lecture needs at least one slide")
        for position, slide in enumerate(self.slides, start=1):
            if slide.index != position:
                raise ValueError("slide indices must be contiguous from 1")
        if self.student_token.value == self.teacher_token.value:
            raise ValueError("student and teacher tokens must differ")
        if self.student_token.role is not Role.STUDENT:
            raise ValueError("student_token must carry the student role")
        if self.teacher_token.role is not Role.TEACHER:
            raise ValueError("teacher_token must carry the teacher role")

    def slide(self, index: int) -> Slide:
        if not 1 <= index <= len(self.slides):
            raise IndexError(f"no slide {index} in lecture {self.lecture_id}")
        return self.slides[index - 1]


@dataclass(frozen=True)
class MuddyPoint:
    """One spatially anchored confusion descriptor.

    Coordinates are fractions of the slide's native width/height, so the
    same anchor lands on the same spot at any thumbnail size. Construction
    is deliberately permissive; `validate_card` reports range and text
    problems with machine-readable codes.
    """

    slide_index: int
    x: float
    y: float
    text: str


@dataclass(frozen=True)
class MuddyCard:
    """One student submission: points or free text, plus a holistic rating.

    `rating` is optional only so that unvalidated wire payloads can be
    represented; validation rejects cards without one.
    """

    card_id: str
    lecture_id: str
    mode: Mode
    rating: ConfusionRating | None
    points: tuple[MuddyPoint, ...] = ()
    free_text: str | None = None
    submitted_at: datetime = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.submitted_at is None:
            object.__setattr__(self, "submitted_at", utc_now())


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class ViolationCode(str, enum.Enum):
    NO_POINTS = "NoPoints"
    EMPTY_TEXT = "EmptyText"
    COORD_OUT_OF_RANGE = "CoordOutOfRange"
    BAD_SLIDE_INDEX = "BadSlideIndex"
    MISSING_RATING = "MissingRating"
    MODE_MISMATCH = "ModeMismatch"
    TEXT_TOO_LONG = "TextTooLong"


@dataclass(frozen=True)
class Violation:
    """One validation failure; point_index is None for card-level problems."""

    code: ViolationCode
    point_index: int | None
    message: str

    def as_dict(self) -> dict:
        return {
            "code": self.code.value,
            "point_index": self.point_index,
            "message": self.message,
        }


def validate_card(card: MuddyCard, lecture: Lecture) -> list[Violation]:
    """Check every card invariant against the lecture; empty list means ok.

    All violations are collected in one pass (deterministic order: card-level
    first, then per point in submission order) so a client can surface every
    problem at once.
    """
    violations: list[Violation] = []

    def add(code: ViolationCode, message: str, point_index: int | None = None) -> None:
        violations.append(Violation(code, point_index, message))

    if card.mode is not lecture.mode:
        add(
            ViolationCode.MODE_MISMATCH,
            f"card mode {card.mode.value!r} does not match "
            f"lecture mode {lecture.mode.value!r}",
        )

    if card.rating is None:
        add(ViolationCode.MISSING_RATING, "a confusion rating is required")

    if card.mode is Mode.SPATIAL:
        if card.free_text is not None:
            add(
                ViolationCode.MODE_MISMATCH,
                "free_text is not allowed on a spatial card",
            )
        if not card.points:
            add(ViolationCode.NO_POINTS, "at least one muddy point is required")
        for i, point in enumerate(card.points):
            if not 1 <= point.slide_index <= len(lecture.slides):
                add(
                    ViolationCode.BAD_SLIDE_INDEX,
                    f"slide {point.slide_index} does not exist "
                    f"(lecture has {len(lecture.slides)} slides)",
                    point_index=i,
                )
            if not (0.0 <= point.x <= 1.0 and 0.0 <= point.y <= 1.0):
                add(
                    ViolationCode.COORD_OUT_OF_RANGE,
                    f"coordinates ({point.x}, {point.y}) fall outside [0,1]",
                    point_index=i,
                )
            _check_text(point.text, i, add)
    else:
        if card.points:
            add(
                ViolationCode.MODE_MISMATCH,
                "muddy points are not allowed on a baseline card",
            )
        if card.free_text is None or not card.free_text.strip():
            add(ViolationCode.EMPTY_TEXT, "free_text must not be empty")
        elif len(card.free_text) > MAX_TEXT_LENGTH:
            add(
                ViolationCode.TEXT_TOO_LONG,
                f"free_text exceeds {MAX_TEXT_LENGTH} characters",
            )

    return violations


def _check_text(text: str, point_index: int, add) -> None:
    if not text.strip():
        add(
            ViolationCode.EMPTY_TEXT,
            "an explanation is required for every point",
            point_index=point_index,
        )
    elif len(text) > MAX_TEXT_LENGTH:
        add(
            ViolationCode.TEXT_TOO_LONG,
            f"explanation exceeds {MAX_TEXT_LENGTH} characters",
            point_index=point_index,
        )
