"""Multi-label emotion detection over eleven emotion categories."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .embeddings import EmbeddingTable, lookup
from .errors import EmptyDoc, LengthMismatch
from .metrics import Metrics, prf
from .neural import (
    AdditiveAttention,
    BiGru,
    Checkpoint,
    Dense,
    LayeredModel,
    sigmoid,
    sigmoid_bce,
)
from .textprep import NormalizedDoc

__all__ = [
    "EMOTIONS",
    "EmotionVector",
    "EmotionModel",
    "detect_emotions",
    "evaluate_multilabel",
    "load_emotion_tsv",
]

EMOTIONS = (
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "love",
    "optimism",
    "pessimism",
    "sadness",
    "surprise",
    "trust",
)


@dataclass(frozen=True)
class EmotionVector:
    """Per-emotion probabilities plus the thresholded label set."""

    probabilities: dict[str, float]
    labels: frozenset[str]


class EmotionModel(LayeredModel):
    """Sentence encoder with an independent sigmoid per emotion.

    Training examples are ``(embeddings, targets)``: a (T, input_dim)
    array and an 11-long 0/1 vector ordered like :data:`EMOTIONS`. The
    loss is the mean binary cross entropy over the labels.
    """

    kind = "emotion"

    def __init__(
        self,
        input_dim: int,
        hidden: int,
        attn_dim: int | None = None,
        seed: int = 0,
    ):
        super().__init__()
        self.input_dim = input_dim
        self.hidden = hidden
        self.attn_dim = hidden if attn_dim is None else attn_dim
        rng = np.random.default_rng(seed)
        self.encoder = BiGru(rng, input_dim, hidden)
        self.attention = AdditiveAttention(rng, 2 * hidden, self.attn_dim)
        self.head = Dense(rng, 2 * hidden, len(EMOTIONS))
        self.register("encoder", self.encoder)
        self.register("attention", self.attention)
        self.register("head", self.head)

    def hyperparams(self) -> dict:
        return {
            "input_dim": self.input_dim,
            "hidden": self.hidden,
            "attn_dim": self.attn_dim,
        }

    @classmethod
    def from_checkpoint(cls, ckpt: Checkpoint) -> "EmotionModel":
        model = cls(**ckpt.hyperparams)
        model.load_params(ckpt.params)
        return model

    def logits(self, embeddings: np.ndarray) -> np.ndarray:
        states, _ = self.encoder.forward(embeddings)
        context, _, _ = self.attention.forward(states)
        return self.head.forward(context)

    def loss(self, example) -> float:
        embeddings, targets = example
        value, _ = sigmoid_bce(self.logits(embeddings), targets)
        return value

    def loss_and_grads(self, example) -> float:
        embeddings, targets = example
        states, enc_caches = self.encoder.forward(embeddings)
        context, _, att_cache = self.attention.forward(states)
        logits = self.head.forward(context)
        value, dlogits = sigmoid_bce(logits, targets)
        dcontext = self.head.backward(context, dlogits)
        dstates, _ = self.attention.backward(att_cache, dcontext)
        self.encoder.backward(enc_caches, dstates)
        return value


def detect_emotions(
    model: EmotionModel,
    table: EmbeddingTable,
    doc: NormalizedDoc,
    threshold: float = 0.5,
) -> EmotionVector:
    """Emotion probabilities and labels for one document.

    A label is assigned when its probability strictly exceeds the
    threshold, so an exactly borderline output stays unassigned.

    Raises:
        EmptyDoc: The document has no tokens.
    """
    if len(doc) == 0:
        raise EmptyDoc(f"document {doc.post_id!r} has no tokens")
    embeddings = np.stack([lookup(table, t.normal) for t in doc.tokens])
    probs = sigmoid(model.logits(embeddings))
    probabilities = {name: float(p) for name, p in zip(EMOTIONS, probs)}
    labels = frozenset(name for name, p in probabilities.items() if p > threshold)
    return EmotionVector(probabilities=probabilities, labels=labels)


def evaluate_multilabel(
    predicted: Sequence[Iterable[str]],
    gold: Sequence[Iterable[str]],
    average: str = "micro",
) -> Metrics:
    """Multi-label precision/recall/F1.

    ``average="micro"`` pools label decisions across all examples;
    ``average="macro"`` scores each emotion separately and returns the
    unweighted means.

    Raises:
        LengthMismatch: The two lists differ in length.
    """
    if len(predicted) != len(gold):
        raise LengthMismatch(f"{len(predicted)} predictions, {len(gold)} references")
    if average not in ("micro", "macro"):
        raise ValueError(f"unknown average {average!r}")
    pred_sets = [frozenset(p) for p in predicted]
    gold_sets = [frozenset(g) for g in gold]
    if average == "micro":
        tp = sum(len(p & g) for p, g in zip(pred_sets, gold_sets))
        return prf(tp, sum(map(len, pred_sets)), sum(map(len, gold_sets)))
    per_label = []
    for emotion in EMOTIONS:
        tp = sum(1 for p, g in zip(pred_sets, gold_sets) if emotion in p and emotion in g)
        per_label.append(
            prf(
                tp,
                sum(1 for p in pred_sets if emotion in p),
                sum(1 for g in gold_sets if emotion in g),
            )
        )
    n = len(per_label)
    return Metrics(
        precision=sum(m.precision for m in per_label) / n,
        recall=sum(m.recall for m in per_label) / n,
        f1=sum(m.f1 for m in per_label) / n,
    )


def load_emotion_tsv(
    source: str | Path | Iterable[str] | TextIO,
) -> list[tuple[str, str, np.ndarray]]:
    """Read ``id<TAB>text<TAB>11 binary columns`` rows.

    Accepts a path or any iterable of lines. A header row (non-binary
    third column) is skipped. Returns ``(id, text, targets)`` triples
    with float 0/1 target vectors.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return load_emotion_tsv(handle)
    lines = source
    out: list[tuple[str, str, np.ndarray]] = []
    for line in lines:
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2 + len(EMOTIONS):
            continue
        flags = parts[2:]
        if not all(f in ("0", "1") for f in flags):
            continue  # header or junk
        out.append((parts[0], parts[1], np.array([float(f) for f in flags])))
    return out
