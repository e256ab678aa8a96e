from __future__ import annotations

import random
from pathlib import Path

import pytest
from PIL import Image

from mudslide.model import (
    AccessToken,
    ConfusionRating,
    Lecture,
    Mode,
    MuddyCard,
    MuddyPoint,
    Role,
    Slide,
    mint_id,
)
from mudslide.store import LectureStore


def make_png(path: Path, width: int = 800, height: int = 600) -> Path:
    Image.new("RGB", (width, height), color=(230, 230, 230)).save(path, "PNG")
    return path


def make_gallery(root: Path, n_slides: int, width: int = 800, height: int = 600) -> Path:
    gallery = root / "gallery"
    gallery.mkdir(parents=True, exist_ok=True)
    for i in range(1, n_slides + 1):
        make_png(gallery / f"slide{i:02d}.png", width, height)
    return gallery


def make_lecture(n_slides: int = 2, mode: Mode = Mode.SPATIAL,
                 width: int = 800, height: int = 600) -> Lecture:
    """In-memory lecture, no store behind it."""
    return Lecture(
        lecture_id=mint_id(),
        title="Kinetic Energy",
        slides=tuple(
            Slide(index=i, image_file=f"slides/slide{i:02d}.png", width=width, height=height)
            for i in range(1, n_slides + 1)
        ),
        student_token=AccessToken(mint_id(), Role.STUDENT),
        teacher_token=AccessToken(mint_id(), Role.TEACHER),
        mode=mode,
    )


def make_card(
    lecture: Lecture,
    points: list[tuple[int, float, float, str]] = (),
    rating: ConfusionRating | None = ConfusionRating.MODERATELY_CONFUSING,
    mode: Mode | None = None,
    free_text: str | None = None,
) -> MuddyCard:
    return MuddyCard(
        card_id=mint_id(),
        lecture_id=lecture.lecture_id,
        mode=mode if mode is not None else lecture.mode,
        rating=rating,
        points=tuple(MuddyPoint(s, x, y, text) for s, x, y, text in points),
        free_text=free_text,
    )


def seed_point_counts(
    lecture: Lecture,
    counts: dict[int, int],
    rng: random.Random,
    points_per_card: int = 2,
) -> list[MuddyCard]:
    """Cards whose points hit each slide exactly counts[slide] times."""
    flat = [index for index, n in counts.items() for _ in range(n)]
    cards = []
    for start in range(0, len(flat), points_per_card):
        chunk = flat[start : start + points_per_card]
        cards.append(
            make_card(
                lecture,
                points=[
                    (index, rng.random(), rng.random(), f"confusing part {start + j}")
                    for j, index in enumerate(chunk)
                ],
                rating=rng.choice(list(ConfusionRating)),
            )
        )
    return cards


@pytest.fixture
def store(tmp_path: Path) -> LectureStore:
    return LectureStore(tmp_path / "data")


@pytest.fixture
def gallery2(tmp_path: Path) -> Path:
    return make_gallery(tmp_path, 2)


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        status = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\n[acceptance] {status} {name}", flush=True)
