"""End-to-end analysis runs: query, preprocess, model, cluster, report.

A run is an immutable directory ``runs/<entity>/<run_id>/`` holding four
artifacts:

* ``pathways.json``: the annotated discussion graph (plus entity/run keys)
* ``insights.json``: the aspect/emotion report (plus entity/run keys)
* ``analyses.json``: per-post detail backing the drill-down endpoint
* ``run.json``: the run summary (config snapshot, timings, counts)

The first three are byte-deterministic for identical inputs and config;
``run.json`` carries wall-clock timings and is not. Artifacts are staged
in a dot-prefixed temp directory and published with a single rename, so
readers never observe a partial run.
"""

from __future__ import annotations

import json
import os
import re
import time
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

try:
    import tomllib as _toml
except ImportError:
    import tomli as _toml

from .aspects import AspectTagger, decode_spans, tag_sentence
from .corpus import Post, PostStore
from .embeddings import compute_idf, doc_vector, load_vectors
from .emotions import EMOTIONS, EmotionModel, detect_emotions
from .errors import ConfigError, NoPosts
from .insights import build_report, report_to_json
from .neural.checkpoint import load_checkpoint
from .pathways import (
    PathwayGraph,
    PostAnalysis,
    PostVector,
    build_graph,
    graph_to_json,
    label_and_annotate,
)
from .sentiment import AspectSentiment, SentimentModel, classify_aspect
from .textprep import (
    NormalizePolicy,
    default_emoji_words,
    default_lexicon,
    default_stopwords,
    normalize,
    remove_stopwords,
    split_sentences,
    tokenize,
)

__all__ = [
    "PipelineConfig",
    "PipelineRun",
    "parse_duration",
    "format_duration",
    "run_pipeline",
    "analyze_entity",
    "list_runs",
    "latest_run",
    "run_dir",
    "load_artifact",
    "ARTIFACT_NAMES",
]

ARTIFACT_NAMES = ("pathways.json", "insights.json", "analyses.json", "run.json")

_DURATION_PART = re.compile(r"(\d+)([smhd])")
_UNIT_SECONDS = {"s": 1, "m": 60, "h": 3600, "d": 86400}

_CONFIG_KEYS = {
    "window",
    "tau",
    "tau_link",
    "emotion_threshold",
    "top_k",
    "vectors",
    "aspect_checkpoint",
    "sentiment_checkpoint",
    "emotion_checkpoint",
}


def parse_duration(text: str) -> timedelta:
    """Parse durations like ``24h``, ``90m``, ``7d``, or ``1h30m``.

    Raises:
        ConfigError: Empty, zero, or unrecognized duration.
    """
    if not isinstance(text, str):
        raise ConfigError(f"duration must be a string, got {type(text).__name__}")
    parts = _DURATION_PART.findall(text)
    if not parts or "".join(f"{n}{u}" for n, u in parts) != text:
        raise ConfigError(f"cannot parse duration {text!r} (use e.g. 24h, 90m, 7d)")
    seconds = sum(int(n) * _UNIT_SECONDS[u] for n, u in parts)
    if seconds <= 0:
        raise ConfigError(f"duration must be positive, got {text!r}")
    return timedelta(seconds=seconds)


def format_duration(window: timedelta) -> str:
    """Render a window back into the compact config form."""
    seconds = int(window.total_seconds())
    for unit, size in (("d", 86400), ("h", 3600), ("m", 60)):
        if seconds % size == 0 and seconds >= size:
            return f"{seconds // size}{unit}"
    return f"{seconds}s"


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a run needs: thresholds, window, and model files."""

    vectors: Path
    aspect_checkpoint: Path
    sentiment_checkpoint: Path
    emotion_checkpoint: Path
    window: timedelta = timedelta(hours=24)
    tau: float = 0.55
    tau_link: float = 0.5
    emotion_threshold: float = 0.5
    top_k: int = 3

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ConfigError(f"tau must be in (0, 1), got {self.tau}")
        if not 0.0 < self.tau_link < 1.0:
            raise ConfigError(f"tau_link must be in (0, 1), got {self.tau_link}")
        if not 0.0 < self.emotion_threshold < 1.0:
            raise ConfigError(
                f"emotion_threshold must be in (0, 1), got {self.emotion_threshold}"
            )
        if self.top_k < 1:
            raise ConfigError(f"top_k must be positive, got {self.top_k}")
        if self.window <= timedelta(0):
            raise ConfigError(f"window must be positive, got {self.window!r}")

    @classmethod
    def from_toml(cls, path: str | Path) -> "PipelineConfig":
        """Load a config document; relative paths resolve next to it.

        Raises:
            ConfigError: Unknown keys, missing model paths, bad values.
        """
        path = Path(path)
        try:
            with open(path, "rb") as fh:
                raw = _toml.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except _toml.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        missing = [
            k
            for k in ("vectors", "aspect_checkpoint", "sentiment_checkpoint", "emotion_checkpoint")
            if k not in raw
        ]
        if missing:
            raise ConfigError(f"config is missing keys: {', '.join(missing)}")
        base = path.parent

        def resolve(key: str) -> Path:
            value = raw[key]
            if not isinstance(value, str):
                raise ConfigError(f"{key} must be a string path")
            p = Path(value)
            return p if p.is_absolute() else (base / p).resolve()

        kwargs = {}
        if "window" in raw:
            kwargs["window"] = parse_duration(raw["window"])
        for key in ("tau", "tau_link", "emotion_threshold"):
            if key in raw:
                value = raw[key]
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ConfigError(f"{key} must be a number, got {value!r}")
                kwargs[key] = float(value)
        if "top_k" in raw:
            if not isinstance(raw["top_k"], int) or isinstance(raw["top_k"], bool):
                raise ConfigError(f"top_k must be an integer, got {raw['top_k']!r}")
            kwargs["top_k"] = raw["top_k"]
        return cls(
            vectors=resolve("vectors"),
            aspect_checkpoint=resolve("aspect_checkpoint"),
            sentiment_checkpoint=resolve("sentiment_checkpoint"),
            emotion_checkpoint=resolve("emotion_checkpoint"),
            **kwargs,
        )

    def snapshot(self) -> dict:
        """The JSON-safe form recorded in ``run.json``."""
        return {
            "window": format_duration(self.window),
            "tau": self.tau,
            "tau_link": self.tau_link,
            "emotion_threshold": self.emotion_threshold,
            "top_k": self.top_k,
            "vectors": str(self.vectors),
            "aspect_checkpoint": str(self.aspect_checkpoint),
            "sentiment_checkpoint": str(self.sentiment_checkpoint),
            "emotion_checkpoint": str(self.emotion_checkpoint),
        }


@dataclass
class PipelineRun:
    """Summary of one completed analysis run."""

    run_id: str
    entity_id: str
    created_at: str
    config: dict
    counts: dict[str, int] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "run_id": self.run_id,
            "entity": self.entity_id,
            "created_at": self.created_at,
            "config": self.config,
            "counts": self.counts,
            "timings": self.timings,
        }


def _default_policy() -> NormalizePolicy:
    return NormalizePolicy(lexicon=default_lexicon(), emoji_table=default_emoji_words())


def _document_sentiment(aspects: Sequence[AspectSentiment]) -> str:
    """Plurality label over a post's aspect sentiments; ties go neutral."""
    if not aspects:
        return "neutral"
    counts: dict[str, int] = {}
    for a in aspects:
        counts[a.label] = counts.get(a.label, 0) + 1
    best = max(counts.values())
    winners = [label for label, n in counts.items() if n == best]
    return winners[0] if len(winners) == 1 else "neutral"


def _stamp(dt: datetime) -> str:
    return dt.isoformat().replace("+00:00", "Z")


def _analyze_posts(
    posts: Sequence[Post],
    config: PipelineConfig,
    tagger: AspectTagger,
    sentiment: SentimentModel,
    emotion: EmotionModel,
    table,
    policy: NormalizePolicy,
    stopwords,
) -> tuple[dict, dict, list[PostVector], dict[str, PostAnalysis], dict]:
    """Per-post model outputs plus the doc vectors for clustering."""
    per_post_aspects: dict[str, list[AspectSentiment]] = {}
    per_post_emotions: dict[str, tuple[str, ...]] = {}
    filtered_docs = {}
    sentence_count = 0
    for post in posts:
        tokens = tokenize(post.raw_text)
        full_doc = normalize(post.id, tokens, policy)
        aspects: list[AspectSentiment] = []
        for s_idx, sent_tokens in enumerate(split_sentences(tokens)):
            sent_doc = normalize(f"{post.id}#s{s_idx}", sent_tokens, policy)
            if len(sent_doc) == 0:
                continue
            sentence_count += 1
            tags = tag_sentence(tagger, table, sent_doc)
            for span in decode_spans(sent_doc, tags):
                aspects.append(classify_aspect(sentiment, table, sent_doc, span))
        per_post_aspects[post.id] = aspects
        if len(full_doc) == 0:
            per_post_emotions[post.id] = ()
        else:
            vector = detect_emotions(
                emotion, table, full_doc, threshold=config.emotion_threshold
            )
            per_post_emotions[post.id] = tuple(vector.labels)
        filtered_docs[post.id] = remove_stopwords(full_doc, stopwords)

    idf = compute_idf([d.normals() for d in filtered_docs.values()])
    post_vectors = [
        PostVector(
            post.id,
            post.timestamp,
            np.array(doc_vector(table, filtered_docs[post.id], idf).values),
        )
        for post in posts
    ]
    analyses = {
        post.id: PostAnalysis(
            post.id,
            _document_sentiment(per_post_aspects[post.id]),
            frozenset(per_post_emotions[post.id]),
            tuple(filtered_docs[post.id].normals()),
        )
        for post in posts
    }
    stats = {"sentences": sentence_count}
    return per_post_aspects, per_post_emotions, post_vectors, analyses, stats


def _cluster_of(graph: PathwayGraph) -> dict[str, str]:
    assignment = {}
    for layer in graph.layers:
        for cluster in layer.clusters:
            for pid in cluster.member_post_ids:
                assignment[pid] = cluster.id
    return assignment


def _analyses_payload(
    entity_id: str,
    posts: Sequence[Post],
    per_post_aspects: Mapping[str, Sequence[AspectSentiment]],
    per_post_emotions: Mapping[str, Sequence[str]],
    analyses: Mapping[str, PostAnalysis],
    assignment: Mapping[str, str],
) -> dict:
    body = {}
    for post in posts:
        body[post.id] = {
            "text": post.raw_text,
            "timestamp": _stamp(post.timestamp),
            "sentiment": analyses[post.id].sentiment,
            "emotions": sorted(per_post_emotions[post.id]),
            "aspects": [
                {
                    "term": a.span.surface,
                    "label": a.label,
                    "confidence": a.confidence,
                }
                for a in per_post_aspects[post.id]
            ],
            "cluster": assignment.get(post.id),
        }
    return {"entity": entity_id, "posts": body}


def run_pipeline(
    store: PostStore,
    entity_id: str,
    config: PipelineConfig,
    out_dir: str | Path,
    run_id: str,
) -> PipelineRun:
    """Analyze one entity's posts and persist the artifact directory.

    Raises:
        NoPosts: The entity has nothing stored.
        MissingCheckpoint: A model file named in the config is absent.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    posts = store.query_posts(entity_id)
    if not posts:
        raise NoPosts(entity_id)
    timings["query"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    tagger = AspectTagger.from_checkpoint(load_checkpoint(config.aspect_checkpoint))
    sentiment = SentimentModel.from_checkpoint(
        load_checkpoint(config.sentiment_checkpoint)
    )
    emotion = EmotionModel.from_checkpoint(load_checkpoint(config.emotion_checkpoint))
    table = load_vectors(Path(config.vectors).read_text(encoding="utf-8").splitlines())
    timings["load_models"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    policy = _default_policy()
    stopwords = default_stopwords()
    per_post_aspects, per_post_emotions, post_vectors, analyses, stats = _analyze_posts(
        posts, config, tagger, sentiment, emotion, table, policy, stopwords
    )
    timings["analyze"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    graph = build_graph(post_vectors, config.window, config.tau, config.tau_link)
    graph = label_and_annotate(graph, analyses)
    timings["cluster"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    report = build_report(
        entity_id,
        per_post_aspects,
        {pid: labels for pid, labels in per_post_emotions.items()},
        k=config.top_k,
    )
    timings["aggregate"] = time.perf_counter() - t0

    created_at = _stamp(datetime.now(timezone.utc).replace(microsecond=0))
    run = PipelineRun(
        run_id=run_id,
        entity_id=entity_id,
        created_at=created_at,
        config=config.snapshot(),
        counts={
            "posts": len(posts),
            "sentences": stats["sentences"],
            "aspect_mentions": sum(len(v) for v in per_post_aspects.values()),
            "layers": len(graph.layers),
            "clusters": sum(len(l.clusters) for l in graph.layers),
            "edges": len(graph.edges),
        },
        timings={k: round(v, 6) for k, v in timings.items()},
    )

    # artifacts carry no run id, so identical inputs give identical bytes;
    # the serving layer injects entity/run into responses
    pathways_doc = graph_to_json(graph)
    insights_doc = report_to_json(report)
    analyses_doc = _analyses_payload(
        entity_id,
        posts,
        per_post_aspects,
        per_post_emotions,
        analyses,
        _cluster_of(graph),
    )

    final = Path(out_dir) / entity_id / run_id
    staging = final.parent / f".tmp-{run_id}"
    if final.exists():
        raise ConfigError(f"run directory already exists: {final}")
    staging.mkdir(parents=True, exist_ok=False)
    try:
        for name, doc in (
            ("pathways.json", pathways_doc),
            ("insights.json", insights_doc),
            ("analyses.json", analyses_doc),
            ("run.json", run.to_json()),
        ):
            (staging / name).write_text(
                json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        os.replace(staging, final)
    except BaseException:
        for leftover in staging.glob("*") if staging.exists() else ():
            leftover.unlink()
        if staging.exists():
            staging.rmdir()
        raise
    return run


def list_runs(out_dir: str | Path, entity_id: str) -> list[str]:
    """Completed run ids for an entity, oldest first."""
    root = Path(out_dir) / entity_id
    if not root.is_dir():
        return []
    return sorted(p.name for p in root.iterdir() if p.is_dir() and not p.name.startswith("."))


def latest_run(out_dir: str | Path, entity_id: str) -> str | None:
    runs = list_runs(out_dir, entity_id)
    return runs[-1] if runs else None


def next_run_id(out_dir: str | Path, entity_id: str) -> str:
    """Allocate the next sequential id, counting staged runs too."""
    root = Path(out_dir) / entity_id
    highest = 0
    if root.is_dir():
        for p in root.iterdir():
            m = re.fullmatch(r"(?:\.tmp-)?run-(\d+)", p.name)
            if m:
                highest = max(highest, int(m.group(1)))
    return f"run-{highest + 1:04d}"


def run_dir(out_dir: str | Path, entity_id: str, run_id: str) -> Path:
    return Path(out_dir) / entity_id / run_id


def load_artifact(out_dir: str | Path, entity_id: str, run_id: str, name: str) -> dict:
    """Read one artifact JSON from a completed run.

    Raises:
        FileNotFoundError: Unknown run or artifact.
    """
    if name not in ARTIFACT_NAMES:
        raise ValueError(f"unknown artifact {name!r}")
    path = run_dir(out_dir, entity_id, run_id) / name
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def analyze_entity(
    data_dir: str | Path,
    entity_id: str,
    config: PipelineConfig,
    window: timedelta | None = None,
) -> PipelineRun:
    """The shared CLI/API entry point: allocate a run id and execute.

    ``window`` overrides the config's window for this run only.
    """
    data_dir = Path(data_dir)
    if window is not None:
        config = replace(config, window=window)
    store = PostStore(data_dir / "store")
    runs_root = data_dir / "runs"
    run_id = next_run_id(runs_root, entity_id)
    return run_pipeline(store, entity_id, config, runs_root, run_id)
