"""Persistence: lecture manifests, slide galleries, and append-only card logs.

Layout, one directory per lecture under a data root:

    data_root/<lecture_id>/lecture.json    manifest
    data_root/<lecture_id>/cards.jsonl     one muddy card per line
    data_root/<lecture_id>/slides/         copied slide images

Appends to the card log are serialized by an exclusive file lock and written
as a single flushed+fsynced line, so readers never see a torn record: a
trailing partial line is a crash artifact, ignored by readers and truncated
by the next writer. There is no database and no schema migration story;
the files are the format.
"""

from __future__ import annotations

import json
import os
import secrets
import shutil
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable

from filelock import FileLock
from PIL import Image, UnidentifiedImageError

from .model import (
    AccessToken,
    Lecture,
    Mode,
    MuddyCard,
    MuddyPoint,
    Role,
    Slide,
    UnknownRating,
    Violation,
    mint_id,
    parse_rating,
    validate_card,
)

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")

MANIFEST_NAME = "lecture.json"
CARD_LOG_NAME = "cards.jsonl"
SLIDES_DIR = "slides"


class StoreError(Exception):
    pass


class UnknownLecture(StoreError):
    def __init__(self, lecture_id: str):
        super().__init__(f"no such lecture: {lecture_id}")
        self.lecture_id = lecture_id


class EmptyGallery(StoreError):
    def __init__(self, image_dir: Path):
        super().__init__(f"no slide images (png/jpg) found in {image_dir}")
        self.image_dir = image_dir


class UnreadableImage(StoreError):
    def __init__(self, file: str, reason: str):
        super().__init__(f"cannot decode slide image {file}: {reason}")
        self.file = file


class CardDecodeError(StoreError):
    """A card record that does not match the wire schema."""


class ImportValidationFailed(StoreError):
    """Import aborted: a line failed to parse or validate. Nothing was appended."""

    def __init__(self, line_no: int, violations: list[Violation], message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.violations = violations


# --- wire serialization -----------------------------------------------------
# Card record schema (one JSON object per log line):
#   {"card_id", "lecture_id", "mode", "rating",
#    "points": [{"slide", "x", "y", "text"}], "free_text", "submitted_at"}
# with canonical rating labels and RFC 3339 timestamps.


def format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat()


def parse_timestamp(raw: str) -> datetime:
    # fromisoformat on 3.10 does not accept the 'Z' suffix.
    dt = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        raise ValueError(f"timestamp must carry a UTC offset: {raw!r}")
    return dt.astimezone(timezone.utc)


def card_to_json(card: MuddyCard) -> dict:
    return {
        "card_id": card.card_id,
        "lecture_id": card.lecture_id,
        "mode": card.mode.value,
        "rating": card.rating.label if card.rating is not None else None,
        "points": [
            {"slide": p.slide_index, "x": p.x, "y": p.y, "text": p.text}
            for p in card.points
        ],
        "free_text": card.free_text,
        "submitted_at": format_timestamp(card.submitted_at),
    }


def card_to_line(card: MuddyCard) -> str:
    return json.dumps(card_to_json(card), ensure_ascii=False, separators=(",", ":"))


def card_from_json(obj: object) -> MuddyCard:
    """Strictly decode one card record; raises CardDecodeError on any mismatch."""
    if not isinstance(obj, dict):
        raise CardDecodeError("card record must be a JSON object")
    try:
        mode = Mode(obj["mode"])
        rating = None if obj.get("rating") is None else parse_rating(obj["rating"])
        points = []
        raw_points = obj.get("points") or []
        if not isinstance(raw_points, list):
            raise CardDecodeError("points must be a list")
        for raw in raw_points:
            points.append(
                MuddyPoint(
                    slide_index=_expect_int(raw["slide"], "slide"),
                    x=_expect_number(raw["x"], "x"),
                    y=_expect_number(raw["y"], "y"),
                    text=_expect_str(raw["text"], "text"),
                )
            )
        free_text = obj.get("free_text")
        if free_text is not None and not isinstance(free_text, str):
            raise CardDecodeError("free_text must be a string or null")
        return MuddyCard(
            card_id=_expect_str(obj["card_id"], "card_id"),
            lecture_id=_expect_str(obj["lecture_id"], "lecture_id"),
            mode=mode,
            rating=rating,
            points=tuple(points),
            free_text=free_text,
            submitted_at=parse_timestamp(_expect_str(obj["submitted_at"], "submitted_at")),
        )
    except CardDecodeError:
        raise
    except (KeyError, TypeError, ValueError, UnknownRating) as exc:
        raise CardDecodeError(str(exc)) from exc


def _expect_str(value, name: str) -> str:
    if not isinstance(value, str):
        raise CardDecodeError(f"{name} must be a string")
    return value


def _expect_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise CardDecodeError(f"{name} must be an integer")
    return value


def _expect_number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CardDecodeError(f"{name} must be a number")
    return float(value)


@dataclass(frozen=True)
class LectureManifest:
    lecture: Lecture
    created_at: datetime


def _manifest_to_json(manifest: LectureManifest) -> dict:
    lecture = manifest.lecture
    return {
        "lecture_id": lecture.lecture_id,
        "title": lecture.title,
        "mode": lecture.mode.value,
        "slides": [
            {"index": s.index, "file": s.image_file, "width": s.width, "height": s.height}
            for s in lecture.slides
        ],
        "student_token": lecture.student_token.value,
        "teacher_token": lecture.teacher_token.value,
        "created_at": format_timestamp(manifest.created_at),
    }


def _manifest_from_json(obj: dict) -> LectureManifest:
    lecture = Lecture(
        lecture_id=obj["lecture_id"],
        title=obj["title"],
        slides=tuple(
            Slide(
                index=s["index"],
                image_file=s["file"],
                width=s["width"],
                height=s["height"],
            )
            for s in obj["slides"]
        ),
        student_token=AccessToken(obj["student_token"], Role.STUDENT),
        teacher_token=AccessToken(obj["teacher_token"], Role.TEACHER),
        mode=Mode(obj["mode"]),
    )
    return LectureManifest(lecture=lecture, created_at=parse_timestamp(obj["created_at"]))


class LectureStore:
    """File-backed lecture and card storage under one data root.

    Many concurrent readers, one serialized writer per lecture; lectures are
    fully independent of each other.
    """

    def __init__(self, data_root: str | Path):
        self.data_root = Path(data_root)
        self.data_root.mkdir(parents=True, exist_ok=True)

    # -- paths --

    def lecture_dir(self, lecture_id: str) -> Path:
        return self.data_root / lecture_id

    def _manifest_path(self, lecture_id: str) -> Path:
        return self.lecture_dir(lecture_id) / MANIFEST_NAME

    def _log_path(self, lecture_id: str) -> Path:
        return self.lecture_dir(lecture_id) / CARD_LOG_NAME

    def _lock(self, lecture_id: str) -> FileLock:
        return FileLock(str(self.lecture_dir(lecture_id) / (CARD_LOG_NAME + ".lock")))

    # -- lectures --

    def create_lecture(
        self,
        image_dir: str | Path,
        title: str,
        mode: Mode = Mode.SPATIAL,
        order: list[str] | None = None,
    ) -> LectureManifest:
        """Ingest a folder of slide images into a new lecture.

        Slides are ordered lexicographically by filename unless `order`
        (a list of filenames) overrides it. Dimensions come from the image
        headers; images are copied under the lecture directory. The manifest
        is written atomically, so a half-created lecture is never visible.
        """
        image_dir = Path(image_dir)
        if order is not None:
            names = list(order)
            for name in names:
                if not (image_dir / name).is_file():
                    raise UnreadableImage(name, "file not found")
        else:
            names = sorted(
                entry.name
                for entry in image_dir.iterdir()
                if entry.is_file() and entry.suffix.lower() in IMAGE_SUFFIXES
            ) if image_dir.is_dir() else []
        if mode is Mode.SPATIAL and not names:
            raise EmptyGallery(image_dir)

        lecture_id = mint_id()
        student = AccessToken(mint_id(), Role.STUDENT)
        teacher = AccessToken(mint_id(), Role.TEACHER)
        while teacher.value == student.value:  # pragma: no cover - 2^-128 chance
            teacher = AccessToken(mint_id(), Role.TEACHER)

        slides = []
        slide_dir = self.lecture_dir(lecture_id) / SLIDES_DIR
        slide_dir.mkdir(parents=True)
        try:
            for index, name in enumerate(names, start=1):
                src = image_dir / name
                try:
                    with Image.open(src) as im:
                        width, height = im.size
                except (UnidentifiedImageError, OSError) as exc:
                    raise UnreadableImage(name, str(exc)) from exc
                shutil.copyfile(src, slide_dir / name)
                slides.append(
                    Slide(
                        index=index,
                        image_file=f"{SLIDES_DIR}/{name}",
                        width=width,
                        height=height,
                    )
                )
            lecture = Lecture(
                lecture_id=lecture_id,
                title=title,
                slides=tuple(slides),
                student_token=student,
                teacher_token=teacher,
                mode=mode,
            )
            manifest = LectureManifest(lecture=lecture, created_at=_now())
            self._log_path(lecture_id).touch()
            _atomic_write_json(self._manifest_path(lecture_id), _manifest_to_json(manifest))
        except Exception:
            shutil.rmtree(self.lecture_dir(lecture_id), ignore_errors=True)
            raise
        return manifest

    def load_manifest(self, lecture_id: str) -> LectureManifest:
        path = self._manifest_path(lecture_id)
        if not path.is_file():
            raise UnknownLecture(lecture_id)
        with open(path, encoding="utf-8") as f:
            return _manifest_from_json(json.load(f))

    def get_lecture(self, lecture_id: str) -> Lecture:
        return self.load_manifest(lecture_id).lecture

    def list_lectures(self) -> list[str]:
        return sorted(
            entry.name
            for entry in self.data_root.iterdir()
            if (entry / MANIFEST_NAME).is_file()
        )

    def resolve_token(self, token_value: str) -> tuple[Lecture, Role] | None:
        """Find the (lecture, role) a token grants, or None.

        Every candidate is checked with a constant-time comparison so the
        lookup leaks nothing about how close a guess was.
        """
        match: tuple[Lecture, Role] | None = None
        for lecture_id in self.list_lectures():
            lecture = self.get_lecture(lecture_id)
            if secrets.compare_digest(lecture.student_token.value, token_value):
                match = (lecture, Role.STUDENT)
            if secrets.compare_digest(lecture.teacher_token.value, token_value):
                match = (lecture, Role.TEACHER)
        return match

    def delete_lecture(self, lecture_id: str) -> None:
        """Remove a lecture and every submission it holds. Irreversible."""
        if not self._manifest_path(lecture_id).is_file():
            raise UnknownLecture(lecture_id)
        shutil.rmtree(self.lecture_dir(lecture_id))

    # -- cards --

    def append_card(self, lecture_id: str, card: MuddyCard) -> str:
        """Durably append one validated card; returns its card_id.

        Commit order is submission order. The write happens under the
        lecture's exclusive writer lock as a single line followed by
        flush+fsync, after truncating any torn tail a crash left behind.
        """
        if not self._manifest_path(lecture_id).is_file():
            raise UnknownLecture(lecture_id)
        line = card_to_line(card) + "\n"
        with self._lock(lecture_id):
            self._append_bytes(lecture_id, line.encode("utf-8"))
        return card.card_id

    def _append_bytes(self, lecture_id: str, data: bytes) -> None:
        path = self._log_path(lecture_id)
        _truncate_torn_tail(path)
        with open(path, "ab") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())

    def snapshot_cards(self, lecture_id: str) -> list[MuddyCard]:
        """Every fully committed card at call time, in commit order.

        Never blocks writers; a torn trailing record (crash artifact) is
        ignored.
        """
        return [card_from_json(json.loads(line)) for line in self._complete_lines(lecture_id)]

    def _complete_lines(self, lecture_id: str) -> list[str]:
        if not self._manifest_path(lecture_id).is_file():
            raise UnknownLecture(lecture_id)
        path = self._log_path(lecture_id)
        if not path.exists():
            return []
        data = path.read_bytes()
        if not data:
            return []
        end = data.rfind(b"\n")
        if end < 0:
            return []
        return data[: end + 1].decode("utf-8").splitlines()

    def export_jsonl(self, lecture_id: str) -> str:
        """The card log, verbatim, minus any torn trailing record."""
        lines = self._complete_lines(lecture_id)
        return "".join(line + "\n" for line in lines)

    def import_jsonl(self, lecture_id: str, stream: str | IO[str] | Iterable[str]) -> int:
        """Append an exported card log to a lecture; all-or-nothing.

        Every line must parse and validate against the destination lecture
        before anything is written; cards keep their identity and timestamps
        but are re-homed to the destination lecture_id.
        """
        lecture = self.get_lecture(lecture_id)
        if isinstance(stream, str):
            raw_lines = stream.splitlines()
        elif hasattr(stream, "read"):
            raw_lines = stream.read().splitlines()
        else:
            raw_lines = [line.rstrip("\n") for line in stream]

        cards: list[MuddyCard] = []
        for line_no, line in enumerate(raw_lines, start=1):
            if not line.strip():
                raise ImportValidationFailed(line_no, [], "blank line")
            try:
                card = card_from_json(json.loads(line))
            except (json.JSONDecodeError, CardDecodeError) as exc:
                raise ImportValidationFailed(line_no, [], str(exc)) from exc
            card = MuddyCard(
                card_id=card.card_id,
                lecture_id=lecture.lecture_id,
                mode=card.mode,
                rating=card.rating,
                points=card.points,
                free_text=card.free_text,
                submitted_at=card.submitted_at,
            )
            violations = validate_card(card, lecture)
            if violations:
                raise ImportValidationFailed(
                    line_no,
                    violations,
                    "; ".join(v.message for v in violations),
                )
            cards.append(card)

        if cards:
            payload = "".join(card_to_line(c) + "\n" for c in cards).encode("utf-8")
            with self._lock(lecture_id):
                self._append_bytes(lecture_id, payload)
        return len(cards)

    def card_count(self, lecture_id: str) -> int:
        return len(self._complete_lines(lecture_id))


def _truncate_torn_tail(path: Path) -> None:
    """Drop a trailing partial line so the log ends on a record boundary."""
    if not path.exists():
        return
    size = path.stat().st_size
    if size == 0:
        return
    with open(path, "rb+") as f:
        f.seek(-1, os.SEEK_END)
        if f.read(1) == b"\n":
            return
        f.seek(0)
        data = f.read()
        end = data.rfind(b"\n")
        f.truncate(end + 1 if end >= 0 else 0)


def _atomic_write_json(path: Path, obj: dict) -> None:
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(obj, f, ensure_ascii=False, indent=2)
        f.write("\n")
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def _now() -> datetime:
    return datetime.now(timezone.utc)
