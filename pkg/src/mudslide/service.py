"""HTTP API: student submission and teacher aggregation behind capability tokens.

Two opaque URLs per lecture, one per role. Unknown tokens and missing
resources are indistinguishable (both 404) so the URL space cannot be
probed; role mismatches are 403. Validation failures come back as 422 with
the complete violation list, never just the first problem.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse, Response

from . import aggregation, textviz
from .aggregation import ColorMode, HeatmapOptions
from .model import (
    RATING_LABELS,
    Lecture,
    Mode,
    MuddyCard,
    MuddyPoint,
    Role,
    UnknownRating,
    mint_id,
    parse_rating,
    utc_now,
    validate_card,
)
from .store import LectureStore, StoreError

SPATIAL_INSTRUCTIONS = (
    "Double-click on exactly where this lecture is most confusing. "
    "The exact location of your click will be shown to the teacher. "
    "You may double-click on multiple confusing points, if you wish."
)
BASELINE_INSTRUCTIONS = (
    "Describe the muddiest (least clear) point of this lecture."
)
RATING_PROMPT = "This lecture was:"

DEFAULT_MAX_CARDS_PER_TOKEN = 50


class ApiError(Exception):
    def __init__(self, status_code: int, message: str):
        super().__init__(message)
        self.status_code = status_code
        self.message = message


def _not_found() -> ApiError:
    return ApiError(404, "not found")


@dataclass(frozen=True)
class ResolvedAccess:
    lecture_id: str
    role: Role


def create_app(
    store: LectureStore,
    *,
    admin_key: str | None = None,
    max_cards_per_token: int = DEFAULT_MAX_CARDS_PER_TOKEN,
    web_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="mudslide", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.store = store
    app.state.max_cards_per_token = max_cards_per_token

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status_code, content={"error": exc.message})

    def resolve(token: str) -> tuple[Lecture, Role]:
        found = store.resolve_token(token)
        if found is None:
            raise _not_found()
        return found

    def require(token: str, role: Role) -> Lecture:
        lecture, actual = resolve(token)
        if actual is not role:
            raise ApiError(403, f"this URL requires the {role.value} role")
        return lecture

    # -- student --

    @app.get("/api/s/{token}")
    def student_view(token: str):
        lecture = require(token, Role.STUDENT)
        spatial = lecture.mode is Mode.SPATIAL
        return JSONResponse(
            {
                "lecture_id": lecture.lecture_id,
                "title": lecture.title,
                "mode": lecture.mode.value,
                "instructions": SPATIAL_INSTRUCTIONS if spatial else BASELINE_INSTRUCTIONS,
                "rating_prompt": RATING_PROMPT,
                "rating_labels": list(RATING_LABELS),
                "slides": [
                    {
                        "index": s.index,
                        "image_url": _image_url(lecture, s.image_file, token),
                        "width": s.width,
                        "height": s.height,
                    }
                    for s in lecture.slides
                ],
            }
        )

    @app.post("/api/s/{token}/cards")
    async def submit_card(token: str, request: Request):
        lecture = require(token, Role.STUDENT)
        try:
            payload = await request.json()
        except Exception:
            raise ApiError(400, "request body must be JSON")
        card = _card_from_payload(payload, lecture)
        if store.card_count(lecture.lecture_id) >= max_cards_per_token:
            raise ApiError(429, "submission limit reached for this lecture")
        violations = validate_card(card, lecture)
        if violations:
            return JSONResponse(
                status_code=422,
                content={"violations": [v.as_dict() for v in violations]},
            )
        card_id = store.append_card(lecture.lecture_id, card)
        return JSONResponse(status_code=201, content={"card_id": card_id})

    # -- teacher --

    @app.get("/api/t/{token}/summary")
    def teacher_summary(
        token: str,
        color_mode: str = ColorMode.TWO_TONE.value,
        root: str | None = None,
        top_n: int = 10,
        max_depth: int = 5,
        min_count: int = 1,
    ):
        lecture = require(token, Role.TEACHER)
        return JSONResponse(
            _summary_payload(
                store,
                lecture,
                token,
                color_mode=_parse_color_mode(color_mode),
                root=root,
                top_n=top_n,
                max_depth=max_depth,
                min_count=min_count,
            )
        )

    @app.get("/api/t/{token}/slides/{slide_index}/comments")
    def slide_comment_list(token: str, slide_index: int):
        lecture = require(token, Role.TEACHER)
        cards = store.snapshot_cards(lecture.lecture_id)
        try:
            comments = aggregation.slide_comments(slide_index, cards, lecture)
        except aggregation.BadSlideIndexError:
            raise _not_found()
        return JSONResponse(
            {
                "slide_index": slide_index,
                "comments": [
                    {"text": c.text, "rating": c.rating.label, "card_id": c.card_id}
                    for c in comments
                ],
            }
        )

    @app.get("/api/t/{token}/heatmap/slides/{file}")
    def heatmap_slide_image(token: str, file: str):
        # Lets the relative image href inside the SVG resolve over HTTP.
        lecture = require(token, Role.TEACHER)
        return _serve_slide(store, lecture, file)

    @app.get("/api/t/{token}/heatmap/{slide_index}.svg")
    def heatmap_svg(
        token: str,
        slide_index: int,
        radius_frac: float = 0.03,
        opacity: float = 0.35,
        color_mode: str = ColorMode.TWO_TONE.value,
        visible: str = "true",
    ):
        lecture = require(token, Role.TEACHER)
        if not 1 <= slide_index <= len(lecture.slides):
            raise _not_found()
        try:
            opts = HeatmapOptions(
                radius_frac=radius_frac,
                opacity=opacity,
                color_mode=_parse_color_mode(color_mode),
                visible=_parse_bool(visible),
            )
        except ValueError as exc:
            raise ApiError(400, str(exc))
        cards = store.snapshot_cards(lecture.lecture_id)
        aggregates = aggregation.points_by_slide(cards, lecture, opts.color_mode)
        svg = aggregation.render_heatmap_svg(
            lecture.slide(slide_index), aggregates[slide_index], opts
        )
        return Response(content=svg, media_type="image/svg+xml")

    @app.get("/api/t/{token}/wordtree")
    def wordtree(
        token: str,
        root: str | None = None,
        max_depth: int = 5,
        min_count: int = 1,
    ):
        lecture = require(token, Role.TEACHER)
        cards = store.snapshot_cards(lecture.lecture_id)
        texts = _comment_corpus(cards, lecture)
        if root is None:
            histogram = textviz.word_histogram(texts, textviz.default_stopwords(), 10)
            root = textviz.default_root(histogram)
        tree = None
        if root is not None:
            try:
                tree = textviz.build_word_tree(
                    texts, root, max_depth=max_depth, min_count=min_count
                ).as_dict()
            except (textviz.InvalidRoot, ValueError) as exc:
                raise ApiError(400, str(exc))
        return JSONResponse(
            {"root": root, "max_depth": max_depth, "min_count": min_count, "tree": tree}
        )

    @app.get("/api/t/{token}/export.jsonl")
    def export_log(token: str):
        lecture = require(token, Role.TEACHER)
        return Response(
            content=store.export_jsonl(lecture.lecture_id),
            media_type="application/x-ndjson",
        )

    # -- slide images (either role) --

    @app.get("/api/slides/{lecture_id}/{file}")
    def slide_image(lecture_id: str, file: str, token: str = ""):
        found = store.resolve_token(token)
        if found is None or found[0].lecture_id != lecture_id:
            raise _not_found()
        return _serve_slide(store, found[0], file)

    # -- admin --

    @app.post("/api/lectures")
    async def create_lecture(request: Request):
        _require_admin(request, admin_key)
        try:
            payload = await request.json()
        except Exception:
            raise ApiError(400, "request body must be JSON")
        if not isinstance(payload, dict):
            raise ApiError(400, "request body must be a JSON object")
        title = payload.get("title")
        image_dir = payload.get("image_dir")
        mode_raw = payload.get("mode", Mode.SPATIAL.value)
        if not isinstance(title, str) or not title.strip():
            raise ApiError(400, "title is required")
        if not isinstance(image_dir, str):
            raise ApiError(400, "image_dir is required")
        try:
            mode = Mode(mode_raw)
        except ValueError:
            raise ApiError(400, f"mode must be one of {[m.value for m in Mode]}")
        try:
            manifest = store.create_lecture(image_dir, title.strip(), mode)
        except StoreError as exc:
            raise ApiError(400, str(exc))
        lecture = manifest.lecture
        return JSONResponse(
            status_code=201,
            content={
                "lecture_id": lecture.lecture_id,
                "student_token": lecture.student_token.value,
                "teacher_token": lecture.teacher_token.value,
                "student_url": f"/s/{lecture.student_token.value}",
                "teacher_url": f"/t/{lecture.teacher_token.value}",
            },
        )

    if web_dir is not None:
        _mount_webapp(app, Path(web_dir))

    return app


def resolve_token(store: LectureStore, token_value: str) -> ResolvedAccess:
    """Token -> (lecture, role) lookup; raises ApiError(404) for anything else."""
    found = store.resolve_token(token_value)
    if found is None:
        raise _not_found()
    lecture, role = found
    return ResolvedAccess(lecture_id=lecture.lecture_id, role=role)


def _parse_color_mode(raw: str) -> ColorMode:
    try:
        return ColorMode(raw)
    except ValueError:
        raise ApiError(400, f"color_mode must be one of {[m.value for m in ColorMode]}")


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ApiError(400, f"expected a boolean, got {raw!r}")


def _image_url(lecture: Lecture, image_file: str, token: str) -> str:
    name = image_file.rsplit("/", 1)[-1]
    return f"/api/slides/{lecture.lecture_id}/{name}?token={token}"


def _serve_slide(store: LectureStore, lecture: Lecture, file: str) -> FileResponse:
    known = {s.image_file.rsplit("/", 1)[-1] for s in lecture.slides}
    if file not in known:
        raise _not_found()
    path = store.lecture_dir(lecture.lecture_id) / "slides" / file
    if not path.is_file():
        raise _not_found()
    return FileResponse(path)


def _require_admin(request: Request, admin_key: str | None) -> None:
    if admin_key is not None:
        supplied = request.headers.get("x-admin-key", "")
        if not secrets.compare_digest(supplied, admin_key):
            raise ApiError(403, "admin key required")
        return
    client = request.client
    if client is None or client.host not in ("127.0.0.1", "::1", "localhost"):
        raise ApiError(403, "lecture creation is limited to localhost")


def _card_from_payload(payload: object, lecture: Lecture) -> MuddyCard:
    """Build an unvalidated card from a submit body; 400 on structural junk.

    Whether the *content* is acceptable is validate_card's job; this only
    rejects bodies that don't have the right shape or types. Leading and
    trailing whitespace around texts is dropped here, at the door.
    """
    if not isinstance(payload, dict):
        raise ApiError(400, "request body must be a JSON object")
    mode_raw = payload.get("mode", lecture.mode.value)
    try:
        mode = Mode(mode_raw)
    except ValueError:
        raise ApiError(400, f"mode must be one of {[m.value for m in Mode]}")

    rating = None
    rating_raw = payload.get("rating")
    if rating_raw is not None:
        if not isinstance(rating_raw, str):
            raise ApiError(400, "rating must be a string label")
        try:
            rating = parse_rating(rating_raw)
        except UnknownRating as exc:
            raise ApiError(400, str(exc))

    raw_points = payload.get("points", [])
    if raw_points is None:
        raw_points = []
    if not isinstance(raw_points, list):
        raise ApiError(400, "points must be a list")
    points = []
    for i, raw in enumerate(raw_points):
        if not isinstance(raw, dict):
            raise ApiError(400, f"points[{i}] must be an object")
        slide = raw.get("slide")
        x, y, text = raw.get("x"), raw.get("y"), raw.get("text")
        if isinstance(slide, bool) or not isinstance(slide, int):
            raise ApiError(400, f"points[{i}].slide must be an integer")
        if not _is_number(x) or not _is_number(y):
            raise ApiError(400, f"points[{i}] coordinates must be numbers")
        if not isinstance(text, str):
            raise ApiError(400, f"points[{i}].text must be a string")
        points.append(
            MuddyPoint(slide_index=slide, x=float(x), y=float(y), text=text.strip())
        )

    free_text = payload.get("free_text")
    if free_text is not None:
        if not isinstance(free_text, str):
            raise ApiError(400, "free_text must be a string or null")
        free_text = free_text.strip()

    return MuddyCard(
        card_id=mint_id(),
        lecture_id=lecture.lecture_id,
        mode=mode,
        rating=rating,
        points=tuple(points),
        free_text=free_text,
        submitted_at=utc_now(),
    )


def _is_number(value: object) -> bool:
    return not isinstance(value, bool) and isinstance(value, (int, float))


def _comment_corpus(cards: list[MuddyCard], lecture: Lecture) -> list[str]:
    """The texts behind the histogram and word tree, in submission order."""
    if lecture.mode is Mode.SPATIAL:
        return [point.text for card in cards for point in card.points]
    return [card.free_text for card in cards if card.free_text]


def _summary_payload(
    store: LectureStore,
    lecture: Lecture,
    token: str,
    *,
    color_mode: ColorMode,
    root: str | None,
    top_n: int,
    max_depth: int,
    min_count: int,
) -> dict:
    cards = store.snapshot_cards(lecture.lecture_id)
    stats = aggregation.summary(cards, lecture)
    payload: dict = {
        "lecture_id": lecture.lecture_id,
        "title": lecture.title,
        "mode": lecture.mode.value,
        "stats": {
            "card_count": stats.card_count,
            "point_count": stats.point_count,
            "points_per_card_mean": stats.points_per_card_mean,
            "rating_histogram": {
                rating.label: count for rating, count in stats.rating_histogram.items()
            },
            "featured_slide": stats.featured_slide,
        },
    }

    if lecture.mode is Mode.SPATIAL:
        aggregates = aggregation.points_by_slide(cards, lecture, color_mode)
        order = sorted(
            aggregates,
            key=lambda index: (index != stats.featured_slide, index),
        )
        payload["slides"] = [
            _slide_entry(lecture, aggregates[index], token, stats.featured_slide)
            for index in order
        ]
        payload["comments"] = [
            {
                "slide_index": slide.index,
                "text": c.text,
                "rating": c.rating.label,
                "card_id": c.card_id,
            }
            for slide in lecture.slides
            for c in aggregation.slide_comments(slide.index, cards, lecture)
        ]
        payload["baseline_comments"] = None
    else:
        payload["slides"] = []
        payload["comments"] = []
        payload["baseline_comments"] = [
            {"text": text, "rating": rating.label}
            for text, rating in aggregation.baseline_comments(cards)
        ]

    texts = _comment_corpus(cards, lecture)
    if top_n < 1:
        raise ApiError(400, "top_n must be >= 1")
    histogram = textviz.word_histogram(texts, textviz.default_stopwords(), top_n)
    payload["histogram"] = [
        {"token": token_, "count": count} for token_, count in histogram.entries
    ]
    tree_root = root if root is not None else textviz.default_root(histogram)
    if tree_root is None:
        payload["word_tree"] = None
    else:
        try:
            payload["word_tree"] = textviz.build_word_tree(
                texts, tree_root, max_depth=max_depth, min_count=min_count
            ).as_dict()
        except (textviz.InvalidRoot, ValueError) as exc:
            raise ApiError(400, str(exc))
    return payload


def _slide_entry(
    lecture: Lecture,
    aggregate: aggregation.SlideAggregate,
    token: str,
    featured: int | None,
) -> dict:
    slide = lecture.slide(aggregate.slide_index)
    return {
        "index": slide.index,
        "image_url": _image_url(lecture, slide.image_file, token),
        "width": slide.width,
        "height": slide.height,
        "featured": slide.index == featured,
        "point_count": aggregate.point_count,
        "share": aggregate.share,
        "points": [
            {
                "x": placed.point.x,
                "y": placed.point.y,
                "text": placed.point.text,
                "card_id": placed.card_id,
                "rating": placed.rating.label,
                "color_class": placed.color_class.value,
                "fill": aggregation.DEFAULT_FILLS[placed.color_class],
            }
            for placed in aggregate.points
        ],
    }


def _mount_webapp(app: FastAPI, web_dir: Path) -> None:
    """Serve the single-page views when a built frontend is available."""
    index = web_dir / "index.html"
    if not index.is_file():
        return

    @app.get("/s/{token}")
    @app.get("/t/{token}")
    def spa(token: str):
        return FileResponse(index)

    assets = web_dir / "assets"
    if assets.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/assets", StaticFiles(directory=assets), name="assets")
