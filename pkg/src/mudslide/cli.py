"""Administrative command line: ingest slides, serve, report, export, delete.

The report does no math of its own: it composes the same store,
aggregation, and textviz operations the HTTP API uses, so its numbers are
always the API's numbers.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import aggregation, textviz
from .model import Mode
from .store import LectureStore, StoreError

DEFAULT_BIND = "127.0.0.1:8000"


class _Parser(argparse.ArgumentParser):
    # Usage errors exit 1, not argparse's default 2.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _data_root(args: argparse.Namespace) -> Path:
    if args.data_root:
        return Path(args.data_root)
    return Path(os.environ.get("MUDSLIDE_DATA_ROOT", "./data"))


def build_parser() -> _Parser:
    parser = _Parser(prog="mudslide", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--data-root",
        help="storage directory (default: $MUDSLIDE_DATA_ROOT or ./data)",
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    ingest = sub.add_parser("ingest", help="create a lecture from a folder of slide images")
    ingest.add_argument("--dir", required=True, help="folder of slide images (png/jpg)")
    ingest.add_argument("--title", required=True)
    ingest.add_argument(
        "--baseline",
        action="store_true",
        help="free-text feedback only, no slide anchors",
    )
    ingest.add_argument(
        "--base-url",
        default="http://localhost:8000",
        help="prefix for the printed student/teacher URLs",
    )

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument(
        "--bind",
        default=os.environ.get("MUDSLIDE_BIND_ADDR", DEFAULT_BIND),
        help=f"host:port (default: $MUDSLIDE_BIND_ADDR or {DEFAULT_BIND})",
    )
    serve.add_argument("--web-dir", help="built frontend to serve at /s and /t")

    report = sub.add_parser("report", help="print a plain-text teacher report")
    report.add_argument("--lecture", required=True, metavar="ID")
    report.add_argument("--top", type=int, default=10, help="histogram size (default 10)")
    report.add_argument("--root", help="word-tree root (default: top histogram word)")

    export = sub.add_parser("export", help="write a lecture's card log")
    export.add_argument("--lecture", required=True, metavar="ID")
    export.add_argument("--out", required=True, help="output file, or - for stdout")

    delete = sub.add_parser("delete", help="remove a lecture and all its cards")
    delete.add_argument("--lecture", required=True, metavar="ID")
    delete.add_argument("--yes", action="store_true", help="confirm the deletion")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    store = LectureStore(_data_root(args))
    try:
        if args.verb == "ingest":
            return _ingest(store, args)
        if args.verb == "serve":
            return _serve(store, args)
        if args.verb == "report":
            return _report(store, args)
        if args.verb == "export":
            return _export(store, args)
        if args.verb == "delete":
            return _delete(store, args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (StoreError, OSError, ValueError) as exc:
        print(f"mudslide: error: {exc}", file=sys.stderr)
        return 2
    return 0


def entrypoint() -> None:
    sys.exit(main())


def _ingest(store: LectureStore, args: argparse.Namespace) -> int:
    mode = Mode.BASELINE if args.baseline else Mode.SPATIAL
    manifest = store.create_lecture(args.dir, args.title, mode)
    lecture = manifest.lecture
    base = args.base_url.rstrip("/")
    print(f"lecture_id: {lecture.lecture_id}")
    print(f"student URL: {base}/s/{lecture.student_token.value}")
    print(f"teacher URL: {base}/t/{lecture.teacher_token.value}")
    return 0


def _serve(store: LectureStore, args: argparse.Namespace) -> int:
    import uvicorn

    from .service import DEFAULT_MAX_CARDS_PER_TOKEN, create_app

    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        print(f"mudslide: error: --bind must look like host:port, got {args.bind!r}",
              file=sys.stderr)
        return 1
    app = create_app(
        store,
        admin_key=os.environ.get("MUDSLIDE_ADMIN_KEY"),
        max_cards_per_token=int(
            os.environ.get("MUDSLIDE_MAX_CARDS_PER_TOKEN", DEFAULT_MAX_CARDS_PER_TOKEN)
        ),
        web_dir=args.web_dir,
    )
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


def _report(store: LectureStore, args: argparse.Namespace) -> int:
    lecture = store.get_lecture(args.lecture)
    cards = store.snapshot_cards(args.lecture)
    out = sys.stdout
    stats = aggregation.summary(cards, lecture)

    print(f"lecture: {lecture.title} ({lecture.lecture_id})", file=out)
    print(f"mode: {lecture.mode.value}", file=out)
    print(f"cards: {stats.card_count}", file=out)
    print(f"points: {stats.point_count}", file=out)
    print(f"points per card: {stats.points_per_card_mean:.2f}", file=out)
    print("ratings:", file=out)
    for rating, count in stats.rating_histogram.items():
        print(f"  {rating.label}: {count}", file=out)

    if lecture.mode is Mode.SPATIAL:
        aggregates = aggregation.points_by_slide(cards, lecture)
        if stats.featured_slide is None:
            print("featured slide: none", file=out)
        else:
            featured = aggregates[stats.featured_slide]
            print(
                f"featured slide: {featured.slide_index} "
                f"({featured.point_count} points, {featured.share * 100:.1f}%)",
                file=out,
            )
        print("points by slide:", file=out)
        for index in sorted(aggregates):
            agg = aggregates[index]
            print(f"  slide {index}: {agg.point_count} ({agg.share * 100:.1f}%)", file=out)
    else:
        print("comments (most confusing first):", file=out)
        for text, rating in aggregation.baseline_comments(cards):
            print(f"  [{rating.label}] {text}", file=out)

    if lecture.mode is Mode.SPATIAL:
        texts = [point.text for card in cards for point in card.points]
    else:
        texts = [card.free_text for card in cards if card.free_text]
    histogram = textviz.word_histogram(texts, textviz.default_stopwords(), args.top)
    print(f"top words (n={args.top}):", file=out)
    for token, count in histogram.entries:
        print(f"  {token}: {count}", file=out)

    root = args.root if args.root else textviz.default_root(histogram)
    if root is None:
        print("word tree: none (no comments)", file=out)
    else:
        tree = textviz.build_word_tree(texts, root)
        print(f"word tree (root {tree.root_token!r}):", file=out)
        _print_tree(tree.root, out, depth=1)
    return 0


def _print_tree(node, out, depth: int) -> None:
    print(f"{'  ' * depth}{node.token} ({node.count})", file=out)
    for child in node.children:
        _print_tree(child, out, depth + 1)


def _export(store: LectureStore, args: argparse.Namespace) -> int:
    text = store.export_jsonl(args.lecture)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(text.splitlines())} cards to {args.out}")
    return 0


def _delete(store: LectureStore, args: argparse.Namespace, parser: _Parser) -> int:
    if not args.yes:
        print("mudslide: error: delete is destructive; pass --yes to confirm",
              file=sys.stderr)
        return 1
    store.delete_lecture(args.lecture)
    print(f"deleted lecture {args.lecture}")
    return 0


if __name__ == "__main__":
    entrypoint()
