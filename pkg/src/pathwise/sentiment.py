"""Per-aspect sentiment classification.

The classifier reads the whole sentence through a bidirectional GRU,
then pools the states with attention conditioned on the aspect span (the
query is the mean embedding of the span's tokens), so the same sentence
can carry different sentiment for different aspects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .aspects import AspectSpan
from .embeddings import EmbeddingTable, lookup
from .errors import EmptyDoc, SpanOutOfRange
from .neural import (
    AdditiveAttention,
    BiGru,
    Checkpoint,
    Dense,
    LayeredModel,
    softmax,
    softmax_cross_entropy,
)
from .textprep import NormalizedDoc

__all__ = ["SENTIMENTS", "AspectSentiment", "SentimentModel", "classify_aspect", "classify_all"]

# Index order fixes argmax tie-breaking.
SENTIMENTS = ("positive", "negative", "neutral")


@dataclass(frozen=True)
class AspectSentiment:
    span: AspectSpan
    label: str
    confidence: float


class SentimentModel(LayeredModel):
    """Aspect-conditioned sentence classifier.

    Training examples are ``(embeddings, (start, end), label_index)``:
    the sentence embedding matrix, the aspect's token index range, and
    an index into :data:`SENTIMENTS`.
    """

    kind = "aspect_sentiment"

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
        self.attention = AdditiveAttention(rng, 2 * hidden, self.attn_dim, query_dim=input_dim)
        self.head = Dense(rng, 2 * hidden, len(SENTIMENTS))
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
    def from_checkpoint(cls, ckpt: Checkpoint) -> "SentimentModel":
        model = cls(**ckpt.hyperparams)
        model.load_params(ckpt.params)
        return model

    def logits(self, embeddings: np.ndarray, span: tuple[int, int]) -> np.ndarray:
        start, end = span
        states, _ = self.encoder.forward(embeddings)
        query = embeddings[start:end].mean(axis=0)
        context, _, _ = self.attention.forward(states, query)
        return self.head.forward(context)

    def loss(self, example) -> float:
        embeddings, span, label = example
        value, _ = softmax_cross_entropy(self.logits(embeddings, span), label)
        return value

    def loss_and_grads(self, example) -> float:
        embeddings, (start, end), label = example
        states, enc_caches = self.encoder.forward(embeddings)
        query = embeddings[start:end].mean(axis=0)
        context, _, att_cache = self.attention.forward(states, query)
        logits = self.head.forward(context)
        value, dlogits = softmax_cross_entropy(logits, label)
        dcontext = self.head.backward(context, dlogits)
        dstates, _ = self.attention.backward(att_cache, dcontext)
        self.encoder.backward(enc_caches, dstates)
        return value


def classify_aspect(
    model: SentimentModel,
    table: EmbeddingTable,
    doc: NormalizedDoc,
    span: AspectSpan | tuple[int, int],
) -> AspectSentiment:
    """Sentiment of one aspect span within its sentence.

    Ties resolve toward the earlier label in :data:`SENTIMENTS`. The
    confidence is the softmax probability of the chosen label, so it
    always lands in [1/3, 1].

    Raises:
        EmptyDoc: The document has no tokens.
        SpanOutOfRange: The span does not fit the document.
    """
    if len(doc) == 0:
        raise EmptyDoc(f"document {doc.post_id!r} has no tokens")
    if isinstance(span, AspectSpan):
        start, end = span.indices
        out_span = span
    else:
        start, end = span
        normals = doc.normals()
        out_span = AspectSpan(start, end, " ".join(normals[start:end]))
    if not (0 <= start < end <= len(doc)):
        raise SpanOutOfRange(start, end, len(doc))
    embeddings = np.stack([lookup(table, t.normal) for t in doc.tokens])
    probs = softmax(model.logits(embeddings, (start, end)))
    idx = int(np.argmax(probs))
    return AspectSentiment(
        span=out_span, label=SENTIMENTS[idx], confidence=float(probs[idx])
    )


def classify_all(
    model: SentimentModel,
    table: EmbeddingTable,
    doc: NormalizedDoc,
    spans: Sequence[AspectSpan | tuple[int, int]],
) -> list[AspectSentiment]:
    """Classify every aspect span of one document, in order."""
    return [classify_aspect(model, table, doc, span) for span in spans]
