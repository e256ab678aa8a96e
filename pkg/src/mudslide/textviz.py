"""Text summaries of muddy-point comments: histogram and word tree.

The tokenizer is deliberately dumb (lowercase, split on anything that is
not a letter or digit, drop one-character fragments) so results are
deterministic and explainable. No stemming, no semantics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import AbstractSet, Iterable, Sequence

_SPLIT = re.compile(r"[\W_]+", re.UNICODE)


class InvalidRoot(ValueError):
    """The requested word-tree root is not a single valid token."""


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[str, ...]
    source_comment_id: str | None = None


def tokenize(text: str, source_comment_id: str | None = None) -> TokenStream:
    """Lowercase, split on every non-alphanumeric, drop tokens shorter than 2."""
    tokens = tuple(t for t in _SPLIT.split(text.lower()) if len(t) >= 2)
    return TokenStream(tokens, source_comment_id)


@dataclass(frozen=True)
class Histogram:
    """Token counts sorted by count descending, ties alphabetical."""

    entries: tuple[tuple[str, int], ...]
    top_n: int


def word_histogram(
    comments: Iterable[str], stopwords: AbstractSet[str], top_n: int
) -> Histogram:
    """Count non-stopword tokens over the whole corpus, keep the top_n."""
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    counts: dict[str, int] = {}
    for comment in comments:
        for token in tokenize(comment).tokens:
            if token not in stopwords:
                counts[token] = counts.get(token, 0) + 1
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return Histogram(entries=tuple(ordered[:top_n]), top_n=top_n)


def default_root(histogram: Histogram) -> str | None:
    """Root token for the word tree: the histogram's top entry, if any."""
    if not histogram.entries:
        return None
    return histogram.entries[0][0]


@dataclass
class WordTreeNode:
    """One phrase step; count covers every occurrence passing through it."""

    token: str
    count: int = 0
    terminal_count: int = 0
    children: list["WordTreeNode"] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "token": self.token,
            "count": self.count,
            "terminal_count": self.terminal_count,
            "children": [child.as_dict() for child in self.children],
        }


@dataclass
class WordTree:
    root: WordTreeNode
    max_depth: int
    min_count: int

    @property
    def root_token(self) -> str:
        return self.root.token

    @property
    def root_count(self) -> int:
        return self.root.count

    def as_dict(self) -> dict:
        return self.root.as_dict()


def build_word_tree(
    comments: Iterable[str],
    root: str,
    max_depth: int = 5,
    min_count: int = 1,
) -> WordTree:
    """Concordance tree of the phrases following `root` across the corpus.

    For every occurrence of the root token in a comment's token stream, the
    up-to-max_depth tokens that follow it are inserted as a path; each node
    counts the occurrences of the phrase from the root down to it, and
    terminal_count the occurrences that stop exactly there. Branches seen
    fewer than min_count times are pruned afterwards, with their occurrences
    re-credited to the parent's terminal_count, so

        count == terminal_count + sum(child.count)

    holds at every node even after pruning. Children are ordered by count
    descending, then alphabetically.
    """
    if tokenize(root).tokens != (root,):
        raise InvalidRoot(f"not a valid root token: {root!r}")
    if max_depth < 0:
        raise ValueError(f"max_depth must be >= 0, got {max_depth}")
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")

    tree_root = WordTreeNode(token=root)
    for comment in comments:
        tokens = tokenize(comment).tokens
        for i, token in enumerate(tokens):
            if token != root:
                continue
            tree_root.count += 1
            suffix = tokens[i + 1 : i + 1 + max_depth]
            if not suffix:
                tree_root.terminal_count += 1
                continue
            node = tree_root
            for step in suffix:
                node = _child(node, step)
                node.count += 1
            node.terminal_count += 1

    if min_count > 1:
        _prune(tree_root, min_count)
    _sort(tree_root)
    return WordTree(root=tree_root, max_depth=max_depth, min_count=min_count)


def _child(node: WordTreeNode, token: str) -> WordTreeNode:
    for child in node.children:
        if child.token == token:
            return child
    child = WordTreeNode(token=token)
    node.children.append(child)
    return child


def _prune(node: WordTreeNode, min_count: int) -> None:
    kept = []
    for child in node.children:
        if child.count < min_count:
            node.terminal_count += child.count
        else:
            _prune(child, min_count)
            kept.append(child)
    node.children = kept


def _sort(node: WordTreeNode) -> None:
    node.children.sort(key=lambda child: (-child.count, child.token))
    for child in node.children:
        _sort(child)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one token per line, UTF-8, '#' starts a comment."""
    return _parse_stopwords(Path(path).read_text(encoding="utf-8"))


def _parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        word = line.split("#", 1)[0].strip()
        if word:
            words.add(word.lower())
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The packaged list of common English function words."""
    text = resources.files(__package__).joinpath("stopwords.txt").read_text("utf-8")
    return _parse_stopwords(text)
