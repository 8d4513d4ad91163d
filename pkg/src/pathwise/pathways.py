"""Discussion pathways: temporal topic layers linked into a DAG.

Posts are bucketed into fixed-length time windows anchored at the
first post. Each window's posts are grouped by a single pass of
leader clustering over their document vectors, and clusters in
consecutive windows are joined by an edge whenever their centroids
are similar enough. The result reads left to right as a timeline of
discussions splitting and merging.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime, timedelta
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import parse_timestamp
from .errors import MissingAnalysis, NonAdjacentLayers, UnsortedInput
from .insights import node_color

__all__ = [
    "PostVector",
    "PostAnalysis",
    "Cluster",
    "ClusterAnnotation",
    "TopicLayer",
    "Edge",
    "PathwayGraph",
    "cluster_window",
    "build_layers",
    "link_layers",
    "build_graph",
    "label_and_annotate",
    "graph_to_json",
    "graph_from_json",
    "graph_to_dot",
    "UNASSIGNED_SUFFIX",
]

# Posts whose document vector has zero norm cannot be compared by
# cosine; they are parked in a per-layer catch-all cluster instead.
UNASSIGNED_SUFFIX = "U"

TOP_TERM_COUNT = 5


@dataclass(frozen=True)
class PostVector:
    """A post reduced to what clustering needs."""

    post_id: str
    timestamp: datetime
    values: np.ndarray


@dataclass(frozen=True)
class PostAnalysis:
    """Per-post results consumed by annotation.

    ``sentiment`` is the document-level label, ``emotions`` the
    thresholded label set, ``terms`` the stopword-filtered normals
    used for cluster labeling.
    """

    post_id: str
    sentiment: str
    emotions: frozenset[str]
    terms: tuple[str, ...]


@dataclass(frozen=True)
class ClusterAnnotation:
    dominant_sentiment: str
    dominant_emotion: str | None
    sentiment_counts: Mapping[str, int]
    emotion_counts: Mapping[str, int]


@dataclass(frozen=True)
class Cluster:
    id: str
    centroid: np.ndarray
    member_post_ids: tuple[str, ...]
    top_terms: tuple[str, ...] = ()
    annotation: ClusterAnnotation | None = None


@dataclass(frozen=True)
class TopicLayer:
    index: int
    window_start: datetime
    window_end: datetime
    clusters: tuple[Cluster, ...]


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: float


@dataclass(frozen=True)
class PathwayGraph:
    layers: tuple[TopicLayer, ...]
    edges: tuple[Edge, ...]

    def clusters(self) -> Iterable[Cluster]:
        for layer in self.layers:
            yield from layer.clusters

    def find_cluster(self, cluster_id: str) -> Cluster | None:
        for cluster in self.clusters():
            if cluster.id == cluster_id:
                return cluster
        return None


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(a @ b) / (na * nb)


def cluster_window(
    posts: Sequence[PostVector],
    tau: float,
    id_prefix: str = "",
) -> list[Cluster]:
    """Group one window's posts by a single leader pass.

    Posts are visited in input order. Each joins the existing cluster
    whose running centroid is most similar, provided the cosine
    reaches ``tau``; equal similarity favors the earliest cluster.
    Otherwise it founds a new cluster. Zero-norm vectors go to a
    shared unassigned cluster appended after the rest. Centroids are
    recomputed as plain member means at the end of the pass.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    centroids: list[np.ndarray] = []
    members: list[list[int]] = []
    unassigned: list[int] = []
    for idx, post in enumerate(posts):
        values = np.asarray(post.values, dtype=float)
        if float(np.linalg.norm(values)) == 0.0:
            unassigned.append(idx)
            continue
        best = -1
        best_cos = 0.0
        for k, centroid in enumerate(centroids):
            cos = _cosine(values, centroid)
            if cos >= tau and cos > best_cos:
                best, best_cos = k, cos
        if best < 0:
            centroids.append(values.copy())
            members.append([idx])
        else:
            group = members[best]
            group.append(idx)
            # Running mean so later posts see where the cluster is now.
            centroids[best] += (values - centroids[best]) / len(group)

    clusters = [
        Cluster(
            id=f"{id_prefix}C{k}",
            centroid=np.mean([np.asarray(posts[i].values, float) for i in group], axis=0),
            member_post_ids=tuple(posts[i].post_id for i in group),
        )
        for k, group in enumerate(members)
    ]
    if unassigned:
        dim = len(np.asarray(posts[unassigned[0]].values))
        clusters.append(
            Cluster(
                id=f"{id_prefix}{UNASSIGNED_SUFFIX}",
                centroid=np.zeros(dim),
                member_post_ids=tuple(posts[i].post_id for i in unassigned),
            )
        )
    return clusters


def build_layers(
    posts: Sequence[PostVector],
    window_length: timedelta,
    tau: float,
) -> list[TopicLayer]:
    """Partition a sorted post stream into clustered time layers.

    Windows are half-open ``[start, start + length)`` intervals
    anchored at the first post's timestamp. Windows with no posts
    still produce (empty) layers so layer index keeps encoding
    elapsed time.
    """
    if window_length <= timedelta(0):
        raise ValueError(f"window_length must be positive, got {window_length}")
    for prev, cur in zip(posts, posts[1:]):
        if cur.timestamp < prev.timestamp:
            raise UnsortedInput(
                f"post {cur.post_id} out of order after {prev.post_id}"
            )
    if not posts:
        return []

    anchor = posts[0].timestamp
    span = posts[-1].timestamp - anchor
    layer_count = span // window_length + 1
    buckets: list[list[PostVector]] = [[] for _ in range(layer_count)]
    for post in posts:
        buckets[(post.timestamp - anchor) // window_length].append(post)
    return [
        TopicLayer(
            index=i,
            window_start=anchor + i * window_length,
            window_end=anchor + (i + 1) * window_length,
            clusters=tuple(cluster_window(bucket, tau, id_prefix=f"L{i}")),
        )
        for i, bucket in enumerate(buckets)
    ]


def link_layers(
    prev: TopicLayer, nxt: TopicLayer, tau_link: float
) -> list[Edge]:
    """Connect similar clusters of two consecutive layers.

    Every (parent, child) pair whose centroid cosine reaches
    ``tau_link`` gets an edge, so a child may have several parents
    or none at all.
    """
    if prev.index + 1 != nxt.index:
        raise NonAdjacentLayers(
            f"layers {prev.index} and {nxt.index} are not consecutive"
        )
    edges = []
    for parent in prev.clusters:
        for child in nxt.clusters:
            weight = _cosine(parent.centroid, child.centroid)
            if weight >= tau_link:
                edges.append(Edge(parent.id, child.id, weight))
    return edges


def build_graph(
    posts: Sequence[PostVector],
    window_length: timedelta,
    tau: float,
    tau_link: float,
) -> PathwayGraph:
    layers = build_layers(posts, window_length, tau)
    edges: list[Edge] = []
    for prev, nxt in zip(layers, layers[1:]):
        edges.extend(link_layers(prev, nxt, tau_link))
    return PathwayGraph(layers=tuple(layers), edges=tuple(edges))


def _dominant_sentiment(counts: Mapping[str, int]) -> str:
    if not counts:
        return "neutral"
    top = max(counts.values())
    leaders = [label for label, count in counts.items() if count == top]
    return leaders[0] if len(leaders) == 1 else "neutral"


def _dominant_emotion(counts: Mapping[str, int]) -> str | None:
    if not counts:
        return None
    top = max(counts.values())
    return min(label for label, count in counts.items() if count == top)


def label_and_annotate(
    graph: PathwayGraph,
    analyses: Mapping[str, PostAnalysis],
) -> PathwayGraph:
    """Attach top terms and dominant sentiment/emotion to each cluster.

    Top terms are the cluster's highest tf-idf terms (idf over all
    analyzed posts), ties broken alphabetically. Dominant sentiment is
    the plurality vote among members, falling back to neutral on a
    tie; the dominant emotion is the most frequent label with ties
    going to the alphabetically first.

    Raises:
        MissingAnalysis: A member post has no analysis entry.
    """
    doc_count = max(len(analyses), 1)
    df: dict[str, int] = {}
    for analysis in analyses.values():
        for term in set(analysis.terms):
            df[term] = df.get(term, 0) + 1

    def annotate(cluster: Cluster) -> Cluster:
        tf: dict[str, int] = {}
        sentiment_counts: dict[str, int] = {}
        emotion_counts: dict[str, int] = {}
        for post_id in cluster.member_post_ids:
            analysis = analyses.get(post_id)
            if analysis is None:
                raise MissingAnalysis(post_id)
            for term in analysis.terms:
                tf[term] = tf.get(term, 0) + 1
            label = analysis.sentiment
            sentiment_counts[label] = sentiment_counts.get(label, 0) + 1
            for emotion in analysis.emotions:
                emotion_counts[emotion] = emotion_counts.get(emotion, 0) + 1
        scored = sorted(
            tf,
            key=lambda t: (-tf[t] * (np.log(doc_count / df[t]) + 1.0), t),
        )
        annotation = ClusterAnnotation(
            dominant_sentiment=_dominant_sentiment(sentiment_counts),
            dominant_emotion=_dominant_emotion(emotion_counts),
            sentiment_counts=dict(sorted(sentiment_counts.items())),
            emotion_counts=dict(sorted(emotion_counts.items())),
        )
        return replace(
            cluster,
            top_terms=tuple(scored[:TOP_TERM_COUNT]),
            annotation=annotation,
        )

    layers = tuple(
        replace(layer, clusters=tuple(annotate(c) for c in layer.clusters))
        for layer in graph.layers
    )
    return PathwayGraph(layers=layers, edges=graph.edges)


def _stamp(moment: datetime) -> str:
    return moment.isoformat().replace("+00:00", "Z")


def graph_to_json(graph: PathwayGraph) -> dict:
    """Plain-dict form of the graph, annotated nodes included."""
    layers = []
    for layer in graph.layers:
        clusters = []
        for cluster in layer.clusters:
            entry: dict = {
                "id": cluster.id,
                "centroid": [float(v) for v in cluster.centroid],
                "member_post_ids": list(cluster.member_post_ids),
                "top_terms": list(cluster.top_terms),
                "annotation": None,
                "color": None,
            }
            if cluster.annotation is not None:
                ann = cluster.annotation
                entry["annotation"] = {
                    "dominant_sentiment": ann.dominant_sentiment,
                    "dominant_emotion": ann.dominant_emotion,
                    "sentiment_counts": dict(ann.sentiment_counts),
                    "emotion_counts": dict(ann.emotion_counts),
                }
                entry["color"] = node_color(ann)
            clusters.append(entry)
        layers.append(
            {
                "index": layer.index,
                "window": {
                    "start": _stamp(layer.window_start),
                    "end": _stamp(layer.window_end),
                },
                "clusters": clusters,
            }
        )
    return {
        "layers": layers,
        "edges": [
            {"from": e.source, "to": e.target, "weight": e.weight}
            for e in graph.edges
        ],
    }


def graph_from_json(data: Mapping) -> PathwayGraph:
    layers = []
    for entry in data["layers"]:
        clusters = []
        for raw in entry["clusters"]:
            ann = raw.get("annotation")
            annotation = None
            if ann is not None:
                annotation = ClusterAnnotation(
                    dominant_sentiment=ann["dominant_sentiment"],
                    dominant_emotion=ann["dominant_emotion"],
                    sentiment_counts=dict(ann["sentiment_counts"]),
                    emotion_counts=dict(ann["emotion_counts"]),
                )
            clusters.append(
                Cluster(
                    id=raw["id"],
                    centroid=np.array(raw["centroid"], dtype=float),
                    member_post_ids=tuple(raw["member_post_ids"]),
                    top_terms=tuple(raw["top_terms"]),
                    annotation=annotation,
                )
            )
        layers.append(
            TopicLayer(
                index=entry["index"],
                window_start=parse_timestamp(entry["window"]["start"]),
                window_end=parse_timestamp(entry["window"]["end"]),
                clusters=tuple(clusters),
            )
        )
    edges = tuple(
        Edge(e["from"], e["to"], float(e["weight"])) for e in data["edges"]
    )
    return PathwayGraph(layers=tuple(layers), edges=edges)


def graph_to_dot(graph: PathwayGraph) -> str:
    """GraphViz rendering with one rank per time window."""
    lines = ["digraph pathways {", "  rankdir=LR;"]
    for layer in graph.layers:
        lines.append(f"  subgraph cluster_layer_{layer.index} {{")
        lines.append("    rank=same;")
        lines.append(f'    label="{_stamp(layer.window_start)}";')
        for cluster in layer.clusters:
            caption = cluster.id
            if cluster.top_terms:
                caption += r"\n" + " ".join(cluster.top_terms)
            color = ""
            if cluster.annotation is not None:
                color = f', fillcolor="{node_color(cluster.annotation)}", style=filled'
            lines.append(f'    "{cluster.id}" [label="{caption}"{color}];')
        lines.append("  }")
    for edge in graph.edges:
        lines.append(
            f'  "{edge.source}" -> "{edge.target}" [label="{edge.weight:.2f}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
