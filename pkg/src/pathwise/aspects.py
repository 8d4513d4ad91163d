"""Aspect extraction as sequence tagging.

Each normalized token gets one of three tags: outside, aspect start, or
aspect continuation. Maximal start+continuation runs decode into aspect
spans, so multi-word aspects like "thai fusion stuff" come out as one
span.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embeddings import EmbeddingTable, lookup
from .errors import EmptyDoc, LengthMismatch, SpanOutOfRange
from .metrics import Metrics, prf
from .neural import BiGru, Checkpoint, Dense, LayeredModel, softmax_cross_entropy
from .textprep import NormalizedDoc, Token
from .textprep.tokenizer import token_char_spans

__all__ = [
    "TAGS",
    "TAG_OUTSIDE",
    "TAG_START",
    "TAG_CONT",
    "AspectSpan",
    "AspectTagger",
    "tag_sentence",
    "decode_spans",
    "encode_tags",
    "evaluate_spans",
    "align_char_spans",
]

# Index order fixes argmax tie-breaking: outside wins, then start.
TAG_OUTSIDE = "O"
TAG_START = "A"
TAG_CONT = "A_"
TAGS = (TAG_OUTSIDE, TAG_START, TAG_CONT)


@dataclass(frozen=True)
class AspectSpan:
    """Half-open token index range into a normalized document."""

    start: int
    end: int
    surface: str

    @property
    def indices(self) -> tuple[int, int]:
        return (self.start, self.end)


class AspectTagger(LayeredModel):
    """Bidirectional GRU tagger with a per-position softmax head.

    Training examples are ``(embeddings, tag_ids)``: a (T, input_dim)
    float array and a length-T integer array over :data:`TAGS`. The loss
    is the mean cross entropy over positions.
    """

    kind = "aspect_tagger"

    def __init__(self, input_dim: int, hidden: int, seed: int = 0):
        super().__init__()
        self.input_dim = input_dim
        self.hidden = hidden
        rng = np.random.default_rng(seed)
        self.encoder = BiGru(rng, input_dim, hidden)
        self.head = Dense(rng, 2 * hidden, len(TAGS))
        self.register("encoder", self.encoder)
        self.register("head", self.head)

    def hyperparams(self) -> dict:
        return {"input_dim": self.input_dim, "hidden": self.hidden}

    @classmethod
    def from_checkpoint(cls, ckpt: Checkpoint) -> "AspectTagger":
        model = cls(**ckpt.hyperparams)
        model.load_params(ckpt.params)
        return model

    def tag_logits(self, embeddings: np.ndarray) -> np.ndarray:
        states, _ = self.encoder.forward(embeddings)
        return self.head.forward(states)

    def loss(self, example) -> float:
        embeddings, tag_ids = example
        logits = self.tag_logits(embeddings)
        total = 0.0
        for t, target in enumerate(tag_ids):
            value, _ = softmax_cross_entropy(logits[t], int(target))
            total += value
        return total / len(tag_ids)

    def loss_and_grads(self, example) -> float:
        embeddings, tag_ids = example
        states, caches = self.encoder.forward(embeddings)
        logits = self.head.forward(states)
        t_len = len(tag_ids)
        dlogits = np.zeros_like(logits)
        total = 0.0
        for t, target in enumerate(tag_ids):
            value, grad = softmax_cross_entropy(logits[t], int(target))
            total += value
            dlogits[t] = grad / t_len
        dstates = self.head.backward(states, dlogits)
        self.encoder.backward(caches, dstates)
        return total / t_len


def _embed(table: EmbeddingTable, doc: NormalizedDoc) -> np.ndarray:
    return np.stack([lookup(table, t.normal) for t in doc.tokens])


def tag_sentence(
    model: AspectTagger, table: EmbeddingTable, doc: NormalizedDoc
) -> list[str]:
    """Predict one tag per normalized token.

    Ties in the output distribution resolve toward the earlier tag in
    :data:`TAGS`, so an uncertain position stays outside.

    Raises:
        EmptyDoc: The document has no tokens.
    """
    if len(doc) == 0:
        raise EmptyDoc(f"document {doc.post_id!r} has no tokens")
    logits = model.tag_logits(_embed(table, doc))
    return [TAGS[int(np.argmax(row))] for row in logits]


def decode_spans(doc: NormalizedDoc, tags: Sequence[str]) -> list[AspectSpan]:
    """Turn a tag sequence into aspect spans.

    A span is a maximal ``A A_*`` run. An orphan continuation (``A_``
    directly after outside, or at the start) is repaired to a span start.

    Raises:
        LengthMismatch: Tags and document tokens differ in length.
    """
    if len(tags) != len(doc):
        raise LengthMismatch(
            f"{len(tags)} tags for {len(doc)} tokens in {doc.post_id!r}"
        )
    spans: list[AspectSpan] = []
    normals = doc.normals()
    start: int | None = None
    for i, tag in enumerate(tags):
        if tag == TAG_OUTSIDE:
            if start is not None:
                spans.append(AspectSpan(start, i, " ".join(normals[start:i])))
                start = None
        elif tag == TAG_START:
            if start is not None:
                spans.append(AspectSpan(start, i, " ".join(normals[start:i])))
            start = i
        else:  # continuation, possibly orphaned
            if start is None:
                start = i
    if start is not None:
        spans.append(AspectSpan(start, len(tags), " ".join(normals[start:])))
    return spans


def encode_tags(spans: Sequence[AspectSpan | tuple[int, int]], length: int) -> list[str]:
    """Inverse of :func:`decode_spans` for well-formed span sets.

    Raises:
        SpanOutOfRange: A span pokes outside the document.
        ValueError: Spans overlap or are empty.
    """
    tags = [TAG_OUTSIDE] * length
    ranges = sorted(
        (s.indices if isinstance(s, AspectSpan) else tuple(s)) for s in spans
    )
    prev_end = 0
    for start, end in ranges:
        if start < 0 or end > length:
            raise SpanOutOfRange(start, end, length)
        if end <= start:
            raise ValueError(f"empty span ({start}, {end})")
        if start < prev_end:
            raise ValueError(f"overlapping span ({start}, {end})")
        tags[start] = TAG_START
        for i in range(start + 1, end):
            tags[i] = TAG_CONT
        prev_end = end
    return tags


def evaluate_spans(
    predicted: Sequence[Sequence[tuple[int, int] | AspectSpan]],
    gold: Sequence[Sequence[tuple[int, int] | AspectSpan]],
    matching: str = "exact",
) -> Metrics:
    """Micro-averaged span precision/recall/F1 over sentences.

    ``matching="exact"`` requires identical index ranges.
    ``matching="overlap"`` credits a predicted span that intersects any
    gold span (and a gold span matched by any prediction), a laxer view
    useful when boundary conventions differ.

    Raises:
        LengthMismatch: The two lists differ in length.
    """
    if len(predicted) != len(gold):
        raise LengthMismatch(f"{len(predicted)} predictions, {len(gold)} references")
    if matching not in ("exact", "overlap"):
        raise ValueError(f"unknown matching mode {matching!r}")
    tp_pred = tp_gold = pred_total = gold_total = 0
    for pred_spans, gold_spans in zip(predicted, gold):
        p = [s.indices if isinstance(s, AspectSpan) else tuple(s) for s in pred_spans]
        g = [s.indices if isinstance(s, AspectSpan) else tuple(s) for s in gold_spans]
        pred_total += len(p)
        gold_total += len(g)
        if matching == "exact":
            hits = len(set(p) & set(g))
            tp_pred += hits
            tp_gold += hits
        else:
            tp_pred += sum(1 for ps, pe in p if any(ps < ge and gs < pe for gs, ge in g))
            tp_gold += sum(1 for gs, ge in g if any(ps < ge and gs < pe for ps, pe in p))
    precision = tp_pred / pred_total if pred_total else 1.0
    recall = tp_gold / gold_total if gold_total else 1.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    if matching == "exact":
        return prf(tp_pred, pred_total, gold_total)
    return Metrics(precision=precision, recall=recall, f1=f1)


def align_char_spans(
    raw: str,
    tokens: Sequence[Token],
    doc: NormalizedDoc,
    char_spans: Sequence[tuple[int, int]],
) -> tuple[list[tuple[int, int]], int]:
    """Map raw-text character spans onto normalized token index spans.

    A character span must cover whole tokens (after trimming whitespace
    at its edges); spans that cut through a token are dropped. Returns
    the aligned index spans and the number dropped.
    """
    tok_chars = token_char_spans(raw, tokens)
    aligned: list[tuple[int, int]] = []
    dropped = 0
    for start, end in char_spans:
        while start < end and raw[start].isspace():
            start += 1
        while end > start and raw[end - 1].isspace():
            end -= 1
        overlapping = [
            i for i, (ts, te) in enumerate(tok_chars) if ts < end and start < te
        ]
        if not overlapping:
            dropped += 1
            continue
        first, last = overlapping[0], overlapping[-1]
        if tok_chars[first][0] != start or tok_chars[last][1] != end:
            dropped += 1
            continue
        norm_idx = [
            i for i, nt in enumerate(doc.tokens) if first <= nt.origin <= last
        ]
        if not norm_idx:
            dropped += 1
            continue
        aligned.append((norm_idx[0], norm_idx[-1] + 1))
    return aligned, dropped
