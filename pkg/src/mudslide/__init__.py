"""Spatially anchored muddy-point feedback for slide-based lecture videos.

Students anchor confusion points on lecture slides; teachers get aggregated
heatmaps, a featured slide, comment lists, and text summaries.
"""

from .model import (
    AccessToken,
    ConfusionRating,
    Lecture,
    Mode,
    MuddyCard,
    MuddyPoint,
    Role,
    Slide,
    UnknownRating,
    Violation,
    ViolationCode,
    parse_rating,
    validate_card,
)

__version__ = "0.1.0"

__all__ = [
    "AccessToken",
    "ConfusionRating",
    "Lecture",
    "Mode",
    "MuddyCard",
    "MuddyPoint",
    "Role",
    "Slide",
    "UnknownRating",
    "Violation",
    "ViolationCode",
    "parse_rating",
    "validate_card",
    "__version__",
]
