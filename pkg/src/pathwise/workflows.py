"""Dataset loading and model training shared by the CLI and tests.

The three labeled formats are deliberately small:

* aspects: JSONL, ``{"text": ..., "aspects": [[start, end], ...]}`` with
  character offsets into the raw text
* sentiment: JSONL, ``{"text": ..., "span": [start, end], "label": ...}``
* emotions: TSV with an id column, a text column, and one 0/1 column per
  emotion (see :func:`pathwise.emotions.load_emotion_tsv`)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .aspects import (
    TAGS,
    AspectSpan,
    AspectTagger,
    align_char_spans,
    decode_spans,
    encode_tags,
    evaluate_spans,
    tag_sentence,
)
from .embeddings import EmbeddingTable, lookup
from .emotions import (
    EMOTIONS,
    EmotionModel,
    detect_emotions,
    evaluate_multilabel,
    load_emotion_tsv,
)
from .errors import DatasetError
from .metrics import Metrics
from .neural.training import TrainConfig, train
from .sentiment import SENTIMENTS, SentimentModel, classify_aspect
from .textprep import NormalizePolicy, NormalizedDoc, normalize, tokenize

__all__ = [
    "AspectExample",
    "SentimentExample",
    "EmotionExample",
    "TrainResult",
    "prepare_doc",
    "embed_doc",
    "load_aspect_dataset",
    "load_sentiment_dataset",
    "load_emotion_dataset",
    "aspect_training_examples",
    "sentiment_training_examples",
    "emotion_training_examples",
    "train_until",
    "aspect_token_accuracy",
    "aspect_span_metrics",
    "sentiment_accuracy",
    "emotion_exact_matches",
    "emotion_metrics",
]


@dataclass(frozen=True)
class AspectExample:
    text: str
    doc: NormalizedDoc
    spans: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class SentimentExample:
    text: str
    doc: NormalizedDoc
    span: tuple[int, int]
    label: str


@dataclass(frozen=True)
class EmotionExample:
    text: str
    doc: NormalizedDoc
    labels: frozenset[str]


def prepare_doc(text: str, policy: NormalizePolicy, doc_id: str = "doc") -> NormalizedDoc:
    """Tokenize and normalize one raw text."""
    return normalize(doc_id, tokenize(text), policy)


def embed_doc(table: EmbeddingTable, doc: NormalizedDoc) -> np.ndarray:
    """The (tokens, dim) embedding matrix the models consume."""
    return np.stack([lookup(table, t.normal) for t in doc.tokens])


def _read_jsonl(path: str | Path) -> list[dict]:
    rows = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{path}:{i}: invalid JSON: {exc}") from exc
        if not isinstance(row, dict):
            raise DatasetError(f"{path}:{i}: expected an object")
        rows.append(row)
    return rows


def load_aspect_dataset(path: str | Path, policy: NormalizePolicy) -> list[AspectExample]:
    """Aspect examples with character spans mapped to token spans.

    Raises:
        DatasetError: A row is malformed or a labeled span does not
            line up with token boundaries.
    """
    examples = []
    for i, row in enumerate(_read_jsonl(path)):
        try:
            text = row["text"]
            char_spans = [(int(s), int(e)) for s, e in row["aspects"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetError(f"{path}: row {i}: {exc}") from exc
        tokens = tokenize(text)
        doc = normalize(f"aspect-{i}", tokens, policy)
        spans, dropped = align_char_spans(text, tokens, doc, char_spans)
        if dropped:
            raise DatasetError(
                f"{path}: row {i}: {dropped} span(s) cross token boundaries"
            )
        examples.append(AspectExample(text, doc, tuple(spans)))
    return examples


def load_sentiment_dataset(path: str | Path, policy: NormalizePolicy) -> list[SentimentExample]:
    """Sentiment examples keyed to a single aspect span per row."""
    examples = []
    for i, row in enumerate(_read_jsonl(path)):
        try:
            text = row["text"]
            start, end = (int(v) for v in row["span"])
            label = row["label"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetError(f"{path}: row {i}: {exc}") from exc
        if label not in SENTIMENTS:
            raise DatasetError(f"{path}: row {i}: unknown label {label!r}")
        tokens = tokenize(text)
        doc = normalize(f"sent-{i}", tokens, policy)
        spans, dropped = align_char_spans(text, tokens, doc, [(start, end)])
        if dropped:
            raise DatasetError(f"{path}: row {i}: span crosses token boundaries")
        examples.append(SentimentExample(text, doc, spans[0], label))
    return examples


def load_emotion_dataset(path: str | Path, policy: NormalizePolicy) -> list[EmotionExample]:
    """Emotion examples from the flag-per-column TSV format."""
    examples = []
    for row_id, text, flags in load_emotion_tsv(path):
        doc = normalize(row_id, tokenize(text), policy)
        labels = frozenset(name for name, flag in zip(EMOTIONS, flags) if flag)
        examples.append(EmotionExample(text, doc, labels))
    return examples


def aspect_training_examples(
    table: EmbeddingTable, dataset: Sequence[AspectExample]
) -> list[tuple[np.ndarray, np.ndarray]]:
    out = []
    for ex in dataset:
        tags = encode_tags(ex.spans, len(ex.doc))
        out.append(
            (embed_doc(table, ex.doc), np.array([TAGS.index(t) for t in tags]))
        )
    return out


def sentiment_training_examples(
    table: EmbeddingTable, dataset: Sequence[SentimentExample]
) -> list[tuple[np.ndarray, tuple[int, int], int]]:
    return [
        (embed_doc(table, ex.doc), ex.span, SENTIMENTS.index(ex.label))
        for ex in dataset
    ]


def emotion_training_examples(
    table: EmbeddingTable, dataset: Sequence[EmotionExample]
) -> list[tuple[np.ndarray, np.ndarray]]:
    return [
        (
            embed_doc(table, ex.doc),
            np.array([1.0 if name in ex.labels else 0.0 for name in EMOTIONS]),
        )
        for ex in dataset
    ]


@dataclass
class TrainResult:
    """Outcome of :func:`train_until`."""

    epochs: int
    metric: float
    reached_target: bool
    losses: list[float] = field(repr=False, default_factory=list)


def train_until(
    model,
    examples: Sequence,
    config: TrainConfig,
    evaluate: Callable[[], float],
    target: float,
    max_epochs: int,
    check_every: int = 10,
) -> TrainResult:
    """Train in short bursts until a metric target or the epoch budget.

    ``evaluate`` is called after every burst; training stops as soon as
    it returns at least ``target``. The final metric and total epoch
    count are reported either way.
    """
    if max_epochs < 1:
        raise ValueError(f"max_epochs must be positive, got {max_epochs}")
    if check_every < 1:
        raise ValueError(f"check_every must be positive, got {check_every}")
    losses: list[float] = []
    done = 0
    metric = evaluate()
    if metric >= target:
        return TrainResult(0, metric, True, losses)
    while done < max_epochs:
        burst = min(check_every, max_epochs - done)
        cfg = replace(config, seed=config.seed + done, epochs=burst)
        losses.extend(train(model, examples, cfg))
        done += burst
        metric = evaluate()
        if metric >= target:
            return TrainResult(done, metric, True, losses)
    return TrainResult(done, metric, False, losses)


def aspect_token_accuracy(
    model: AspectTagger, table: EmbeddingTable, dataset: Sequence[AspectExample]
) -> float:
    """Fraction of tokens tagged exactly as encoded in the gold spans."""
    correct = 0
    total = 0
    for ex in dataset:
        gold = encode_tags(ex.spans, len(ex.doc))
        pred = tag_sentence(model, table, ex.doc)
        correct += sum(1 for g, p in zip(gold, pred) if g == p)
        total += len(gold)
    return correct / total if total else 1.0


def aspect_span_metrics(
    model: AspectTagger,
    table: EmbeddingTable,
    dataset: Sequence[AspectExample],
    matching: str = "exact",
) -> Metrics:
    predicted = [
        decode_spans(ex.doc, tag_sentence(model, table, ex.doc)) for ex in dataset
    ]
    gold = [ex.spans for ex in dataset]
    return evaluate_spans(predicted, gold, matching=matching)


def sentiment_accuracy(
    model: SentimentModel, table: EmbeddingTable, dataset: Sequence[SentimentExample]
) -> float:
    if not dataset:
        return 1.0
    hits = sum(
        1
        for ex in dataset
        if classify_aspect(model, table, ex.doc, ex.span).label == ex.label
    )
    return hits / len(dataset)


def emotion_exact_matches(
    model: EmotionModel,
    table: EmbeddingTable,
    dataset: Sequence[EmotionExample],
    threshold: float = 0.5,
) -> int:
    """How many documents get exactly the gold label set."""
    hits = 0
    for ex in dataset:
        pred = detect_emotions(model, table, ex.doc, threshold=threshold)
        if frozenset(pred.labels) == ex.labels:
            hits += 1
    return hits


def emotion_metrics(
    model: EmotionModel,
    table: EmbeddingTable,
    dataset: Sequence[EmotionExample],
    threshold: float = 0.5,
    average: str = "micro",
) -> Metrics:
    predicted = [
        detect_emotions(model, table, ex.doc, threshold=threshold).labels
        for ex in dataset
    ]
    return evaluate_multilabel(predicted, [ex.labels for ex in dataset], average=average)
