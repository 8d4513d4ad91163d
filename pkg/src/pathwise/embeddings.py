"""Pretrained word vectors and document vectors.

Vector files use the plain text format common to published embedding
releases: one entry per line, the word followed by its components,
space separated. Everything is kept in float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, TextIO

import numpy as np

from .errors import DimensionMismatch, EmptyFile

__all__ = [
    "EmbeddingTable",
    "DocVector",
    "load_vectors",
    "lookup",
    "doc_vector",
    "compute_idf",
]


@dataclass
class EmbeddingTable:
    """Word vectors plus a fallback for unknown words.

    The fallback is the mean of every stored vector, a serviceable
    stand-in that sits in the middle of the cloud.
    """

    dimension: int
    vectors: dict[str, np.ndarray]
    oov: np.ndarray

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class DocVector:
    values: np.ndarray
    norm: float


def load_vectors(lines: Iterable[str] | TextIO) -> EmbeddingTable:
    """Read a text vector file.

    The first entry fixes the dimension. Repeated words keep their first
    vector. Blank lines are skipped.

    Raises:
        DimensionMismatch: An entry has the wrong component count.
        EmptyFile: No entries at all.
    """
    vectors: dict[str, np.ndarray] = {}
    dimension: int | None = None
    total: np.ndarray | None = None
    count = 0
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split(" ")
        word, comps = parts[0], parts[1:]
        if dimension is None:
            dimension = len(comps)
            if dimension == 0:
                raise DimensionMismatch(line_no, 1, 0)
            total = np.zeros(dimension)
        if len(comps) != dimension:
            raise DimensionMismatch(line_no, dimension, len(comps))
        vec = np.array([float(c) for c in comps])
        count += 1
        total += vec
        if word not in vectors:
            vectors[word] = vec
    if dimension is None or not vectors:
        raise EmptyFile("vector file has no entries")
    return EmbeddingTable(dimension=dimension, vectors=vectors, oov=total / count)


def lookup(table: EmbeddingTable, token: str) -> np.ndarray:
    """The vector for ``token``, or the out-of-vocabulary fallback."""
    vec = table.vectors.get(token)
    return vec if vec is not None else table.oov


def _as_normals(doc) -> list[str]:
    if hasattr(doc, "normals"):
        return doc.normals()
    return list(doc)


def doc_vector(
    table: EmbeddingTable,
    doc,
    idf: Mapping[str, float] | None = None,
) -> DocVector:
    """Idf-weighted mean of the document's word vectors.

    Args:
        table: Vector table.
        doc: A normalized document or any iterable of token strings.
        idf: Per-token weights; tokens not listed weigh 1.0.

    Returns:
        The weighted mean and its L2 norm. An empty document maps to the
        zero vector with norm 0.
    """
    normals = _as_normals(doc)
    if not normals:
        return DocVector(values=np.zeros(table.dimension), norm=0.0)
    weights = idf or {}
    acc = np.zeros(table.dimension)
    weight_sum = 0.0
    for token in normals:
        w = float(weights.get(token, 1.0))
        acc += w * lookup(table, token)
        weight_sum += w
    values = acc / weight_sum if weight_sum else np.zeros(table.dimension)
    return DocVector(values=values, norm=float(np.linalg.norm(values)))


def compute_idf(docs: Iterable[Iterable[str]]) -> dict[str, float]:
    """Inverse document frequency over tokenized documents.

    ``idf(w) = log(N / df(w)) + 1`` with natural log, where ``df`` counts
    documents containing ``w`` at least once.
    """
    doc_sets = [set(d) for d in docs]
    n = len(doc_sets)
    df: dict[str, int] = {}
    for tokens in doc_sets:
        for token in tokens:
            df[token] = df.get(token, 0) + 1
    return {token: math.log(n / count) + 1.0 for token, count in df.items()}
