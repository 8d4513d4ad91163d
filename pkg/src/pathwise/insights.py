"""Entity-level aggregates for the dashboard.

Everything here is counting. Per-post analyses come in, and what goes
out is the payload behind the aspect bars and emotion chips: which
terms people talk about, how often the talk is positive, and which
emotions recur.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "AspectInsight",
    "InsightReport",
    "aspect_report",
    "top_emotions",
    "node_color",
    "build_report",
    "report_to_json",
]

# Fixed display palette; the dashboard maps tokens to actual colors.
_COLORS = {"positive": "green", "negative": "red", "neutral": "gray"}

DEFAULT_TOP_K = 3


@dataclass(frozen=True)
class AspectInsight:
    term: str
    positive_pct: float
    mentions: int


@dataclass(frozen=True)
class InsightReport:
    entity_id: str
    aspects: tuple[AspectInsight, ...]
    top_emotions: tuple[tuple[str, int], ...]


def _term_and_label(item) -> tuple[str, str]:
    # Accepts AspectSentiment objects or plain (term, label) pairs.
    span = getattr(item, "span", None)
    if span is not None:
        return span.surface, item.label
    term, label = item
    return term, label


def aspect_report(
    per_post: Mapping[str, Iterable],
) -> list[AspectInsight]:
    """Count aspect mentions and positive shares across posts.

    ``per_post`` maps post id to that post's aspect sentiments. A post
    contributes at most one mention per distinct term, and counts as
    positive for the term when any of its occurrences is labeled
    positive. Output is sorted by mentions descending, then term.
    """
    mentions: dict[str, int] = {}
    positives: dict[str, int] = {}
    for _, items in sorted(per_post.items()):
        seen: dict[str, bool] = {}
        for item in items:
            term, label = _term_and_label(item)
            seen[term] = seen.get(term, False) or label == "positive"
        for term, is_positive in seen.items():
            mentions[term] = mentions.get(term, 0) + 1
            if is_positive:
                positives[term] = positives.get(term, 0) + 1
    out = [
        AspectInsight(
            term=term,
            positive_pct=100.0 * positives.get(term, 0) / count,
            mentions=count,
        )
        for term, count in mentions.items()
    ]
    out.sort(key=lambda a: (-a.mentions, a.term))
    return out


def top_emotions(
    per_post: Mapping[str, Iterable[str]] | Iterable[Iterable[str]],
    k: int = DEFAULT_TOP_K,
) -> list[tuple[str, int]]:
    """Most frequent emotion labels, counted once per post.

    Returns at most ``k`` pairs, ordered by count descending then
    name. Posts with empty label sets contribute nothing.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if isinstance(per_post, Mapping):
        label_sets = per_post.values()
    else:
        label_sets = per_post
    counts: dict[str, int] = {}
    for labels in label_sets:
        for emotion in set(labels):
            counts[emotion] = counts.get(emotion, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def node_color(annotation) -> str:
    """Map a dominant sentiment to its display token.

    Takes a cluster annotation (anything with ``dominant_sentiment``)
    or the sentiment string itself.
    """
    sentiment = getattr(annotation, "dominant_sentiment", annotation)
    try:
        return _COLORS[sentiment]
    except KeyError:
        raise ValueError(f"unknown sentiment {sentiment!r}") from None


def build_report(
    entity_id: str,
    aspect_analyses: Mapping[str, Iterable],
    emotion_labels: Mapping[str, Iterable[str]],
    k: int = DEFAULT_TOP_K,
) -> InsightReport:
    return InsightReport(
        entity_id=entity_id,
        aspects=tuple(aspect_report(aspect_analyses)),
        top_emotions=tuple(top_emotions(emotion_labels, k)),
    )


def report_to_json(report: InsightReport) -> dict:
    return {
        "entity": report.entity_id,
        "aspects": [
            {
                "term": a.term,
                "positive_pct": a.positive_pct,
                "mentions": a.mentions,
            }
            for a in report.aspects
        ],
        "top_emotions": [
            {"emotion": e, "count": c} for e, c in report.top_emotions
        ],
    }
