"""Teacher-side aggregation math.

Per-slide point accumulation, featured-slide selection, click hit-testing,
rating color coding, comment ordering, summary statistics, and the SVG
heatmap renderer. Every operation is a pure function over immutable
snapshots, so concurrent use needs no coordination.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .model import ConfusionRating, Lecture, Mode, MuddyCard, MuddyPoint, Slide


class BadSlideIndexError(IndexError):
    """A slide index outside the lecture's 1..N range."""


class ColorMode(str, enum.Enum):
    TWO_TONE = "two_tone"
    FOUR_LEVEL = "four_level"


class ColorClass(str, enum.Enum):
    RED = "red"
    GRAY = "gray"
    L1 = "l1"
    L2 = "l2"
    L3 = "l3"
    L4 = "l4"


# Default SVG fill per color class; override via render_heatmap_svg(fills=...).
DEFAULT_FILLS: dict[ColorClass, str] = {
    ColorClass.RED: "#d62728",
    ColorClass.GRAY: "#888888",
    ColorClass.L1: "#d62728",
    ColorClass.L2: "#ff7f0e",
    ColorClass.L3: "#ffbb78",
    ColorClass.L4: "#888888",
}

_FOUR_LEVEL = {
    ConfusionRating.EXTREMELY_CONFUSING: ColorClass.L1,
    ConfusionRating.MODERATELY_CONFUSING: ColorClass.L2,
    ConfusionRating.SLIGHTLY_CONFUSING: ColorClass.L3,
    ConfusionRating.NOT_CONFUSING: ColorClass.L4,
}


def color_of(rating: ConfusionRating, mode: ColorMode) -> ColorClass:
    """Color class for a point given its author's holistic rating.

    Two-tone: gray iff the author rated the lecture not confusing, red
    otherwise. Four-level: fixed bijection L1 (extremely) .. L4 (not).
    """
    if mode is ColorMode.TWO_TONE:
        if rating is ConfusionRating.NOT_CONFUSING:
            return ColorClass.GRAY
        return ColorClass.RED
    return _FOUR_LEVEL[rating]


@dataclass(frozen=True)
class PlacedPoint:
    """A muddy point joined with its owning card's identity and rating."""

    point: MuddyPoint
    card_id: str
    rating: ConfusionRating
    color_class: ColorClass


@dataclass(frozen=True)
class SlideAggregate:
    """All points that landed on one slide, plus its share of the total."""

    slide_index: int
    points: tuple[PlacedPoint, ...]
    share: float

    @property
    def point_count(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class HeatmapOptions:
    """Rendering knobs for the circle overlay.

    radius_frac is the circle radius as a fraction of the slide's native
    width; opacity is the per-circle fill opacity. Defaults make roughly
    ten overlapping points saturate visually.
    """

    radius_frac: float = 0.03
    opacity: float = 0.35
    color_mode: ColorMode = ColorMode.TWO_TONE
    visible: bool = True

    def __post_init__(self) -> None:
        if not 0 < self.radius_frac <= 0.25:
            raise ValueError(f"radius_frac must be in (0, 0.25], got {self.radius_frac}")
        if not 0 < self.opacity <= 1:
            raise ValueError(f"opacity must be in (0, 1], got {self.opacity}")


@dataclass(frozen=True, eq=True)
class SummaryStats:
    card_count: int
    point_count: int
    points_per_card_mean: float
    rating_histogram: dict[ConfusionRating, int]
    featured_slide: int | None = None


def points_by_slide(
    cards: Sequence[MuddyCard],
    lecture: Lecture,
    color_mode: ColorMode = ColorMode.TWO_TONE,
) -> dict[int, SlideAggregate]:
    """Partition every point of every card into per-slide aggregates.

    Cards must already have passed validation against this lecture. Every
    slide gets an entry, empty or not; points keep submission order. A
    slide's share is its fraction of the lecture's total points (0 when
    there are none at all).
    """
    buckets: dict[int, list[PlacedPoint]] = {s.index: [] for s in lecture.slides}
    for card in cards:
        for point in card.points:
            buckets[point.slide_index].append(
                PlacedPoint(
                    point=point,
                    card_id=card.card_id,
                    rating=card.rating,
                    color_class=color_of(card.rating, color_mode),
                )
            )
    total = sum(len(points) for points in buckets.values())
    return {
        index: SlideAggregate(
            slide_index=index,
            points=tuple(points),
            share=len(points) / total if total else 0.0,
        )
        for index, points in buckets.items()
    }


def featured_slide(aggregates: Mapping[int, SlideAggregate]) -> int | None:
    """Slide index with the most points; lowest index wins ties.

    None when the lecture has no points at all.
    """
    best: int | None = None
    best_count = 0
    for index in sorted(aggregates):
        count = aggregates[index].point_count
        if count > best_count:
            best, best_count = index, count
    return best


def hit_test(
    click: tuple[float, float],
    slide: Slide,
    points: Sequence[PlacedPoint],
    opts: HeatmapOptions,
) -> list[PlacedPoint]:
    """Every point whose rendered circle contains the click, input order kept.

    Distances are measured in the slide's native pixel space so circles are
    round on non-square slides; the boundary counts as a hit.
    """
    cx, cy = click
    radius = opts.radius_frac * slide.width
    hits = []
    for placed in points:
        dx = (cx - placed.point.x) * slide.width
        dy = (cy - placed.point.y) * slide.height
        if math.hypot(dx, dy) <= radius:
            hits.append(placed)
    return hits


@dataclass(frozen=True)
class SlideComment:
    text: str
    rating: ConfusionRating
    card_id: str


def slide_comments(
    slide_index: int, cards: Sequence[MuddyCard], lecture: Lecture
) -> list[SlideComment]:
    """All point texts anchored to one slide, in submission order."""
    if not 1 <= slide_index <= len(lecture.slides):
        raise BadSlideIndexError(
            f"slide {slide_index} does not exist (lecture has {len(lecture.slides)})"
        )
    comments = []
    for card in cards:
        for point in card.points:
            if point.slide_index == slide_index:
                comments.append(SlideComment(point.text, card.rating, card.card_id))
    return comments


def baseline_comments(cards: Sequence[MuddyCard]) -> list[tuple[str, ConfusionRating]]:
    """Free-text comments ordered most-confusing-first; ties keep submission order."""
    ordered = sorted(cards, key=lambda card: card.rating, reverse=True)
    return [(card.free_text, card.rating) for card in ordered]


def summary(cards: Sequence[MuddyCard], lecture: Lecture) -> SummaryStats:
    """Headline numbers for the teacher view."""
    histogram = {rating: 0 for rating in sorted(ConfusionRating, reverse=True)}
    for card in cards:
        histogram[card.rating] += 1
    if lecture.mode is Mode.SPATIAL:
        aggregates = points_by_slide(cards, lecture)
        point_count = sum(agg.point_count for agg in aggregates.values())
        featured = featured_slide(aggregates)
    else:
        point_count = 0
        featured = None
    return SummaryStats(
        card_count=len(cards),
        point_count=point_count,
        points_per_card_mean=point_count / len(cards) if cards else 0.0,
        rating_histogram=histogram,
        featured_slide=featured,
    )


def _num(value: float) -> str:
    """Compact, deterministic SVG number formatting (500.0 -> "500")."""
    if value == int(value):
        return str(int(value))
    return format(value, ".6g")


def render_heatmap_svg(
    slide: Slide,
    aggregate: SlideAggregate,
    opts: HeatmapOptions = HeatmapOptions(),
    fills: Mapping[ColorClass, str] = DEFAULT_FILLS,
) -> str:
    """Render the circle overlay for one slide as an SVG 1.1 document.

    The slide image sits underneath as an image element referenced by its
    relative path; one circle per point follows in point order. When
    opts.visible is false the circle group is emitted with display:none so
    a client can flip it back on without re-fetching. Output is
    byte-identical for identical inputs.
    """
    w, h = slide.width, slide.height
    radius = _num(opts.radius_frac * w)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" '
        'xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" '
        f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<image xlink:href="{escape(slide.image_file, {chr(34): "&quot;"})}" '
        f'x="0" y="0" width="{w}" height="{h}"/>',
        '<g class="muddy-points">'
        if opts.visible
        else '<g class="muddy-points" style="display:none">',
    ]
    for placed in aggregate.points:
        cx = _num(placed.point.x * w)
        cy = _num(placed.point.y * h)
        lines.append(
            f'<circle cx="{cx}" cy="{cy}" r="{radius}" '
            f'fill="{fills[placed.color_class]}" fill-opacity="{_num(opts.opacity)}"/>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
