"""Post ingestion and storage.

Source exports (tweet JSONL, review CSV) are adapted into one ``Post``
shape and appended to a JSON-lines log under the data directory. The
store keeps everything in memory as well; the corpus sizes this engine
targets are desk scale, not warehouse scale.
"""

from __future__ import annotations

import csv
import json
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Iterator

from .errors import (
    BadTimestamp,
    EmptyText,
    MissingField,
    RecordError,
    StoreUnavailable,
)

__all__ = [
    "SourceKind",
    "Post",
    "IngestStats",
    "PostStore",
    "parse_post_record",
    "parse_timestamp",
]

_HASHTAG = re.compile(r"#([A-Za-z0-9_]+)")


class SourceKind(str, Enum):
    TWITTER = "twitter"
    TRIPADVISOR = "tripadvisor"
    BOOKING = "booking"
    GENERIC = "generic"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Post:
    """One ingested post, normalized across sources.

    ``raw_text`` may be empty only when ``hashtags`` is not. ``timestamp``
    is always timezone-aware UTC with whole-second precision. Review
    ratings and other source-specific leftovers live in ``extras``.
    """

    id: str
    source: SourceKind
    entity_id: str
    timestamp: datetime
    raw_text: str
    hashtags: tuple[str, ...] = ()
    geo: tuple[float, float] | None = None
    lang: str | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    def to_record(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "source": self.source.value,
            "entity_id": self.entity_id,
            "timestamp": self.timestamp.isoformat(),
            "raw_text": self.raw_text,
            "hashtags": list(self.hashtags),
            "geo": list(self.geo) if self.geo else None,
            "lang": self.lang,
            "extras": self.extras,
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "Post":
        return cls(
            id=rec["id"],
            source=SourceKind(rec["source"]),
            entity_id=rec["entity_id"],
            timestamp=parse_timestamp(rec["timestamp"]),
            raw_text=rec["raw_text"],
            hashtags=tuple(rec.get("hashtags") or ()),
            geo=tuple(rec["geo"]) if rec.get("geo") else None,
            lang=rec.get("lang"),
            extras=rec.get("extras") or {},
        )


@dataclass
class IngestStats:
    read: int = 0
    accepted: int = 0
    duplicates: int = 0
    rejected: int = 0
    reject_reasons: dict[str, int] = field(default_factory=dict)

    def reject(self, reason: str) -> None:
        self.rejected += 1
        self.reject_reasons[reason] = self.reject_reasons.get(reason, 0) + 1


def parse_timestamp(value: Any) -> datetime:
    """Parse an RFC 3339 timestamp or bare date into aware UTC seconds.

    Naive inputs are taken as UTC. Sub-second precision is dropped.

    Raises:
        BadTimestamp: If the value is not a parseable timestamp.
    """
    if isinstance(value, datetime):
        dt = value
    else:
        if not isinstance(value, str) or not value:
            raise BadTimestamp(str(value))
        text = value.strip()
        if text.endswith(("Z", "z")):
            text = text[:-1] + "+00:00"
        try:
            dt = datetime.fromisoformat(text)
        except ValueError:
            raise BadTimestamp(value) from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def _extract_hashtags(text: str, declared: Iterable[str] | None) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for tag in declared or ():
        tag = str(tag).lstrip("#").lower()
        if tag:
            seen.setdefault(tag)
    for tag in _HASHTAG.findall(text):
        seen.setdefault(tag.lower())
    return tuple(seen)


def _require(record: dict[str, Any], name: str) -> Any:
    value = record.get(name)
    if value is None or value == "":
        raise MissingField(name)
    return value


def _parse_geo(value: Any) -> tuple[float, float] | None:
    if value is None:
        return None
    if isinstance(value, dict):
        if "lat" in value and "lon" in value:
            return (float(value["lat"]), float(value["lon"]))
        return None
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return (float(value[0]), float(value[1]))
    return None


def parse_post_record(
    record: dict[str, Any],
    source: SourceKind,
    default_entity: str | None = None,
) -> Post:
    """Adapt one source record into a Post.

    Args:
        record: Decoded JSON object or CSV row.
        source: Which export shape the record follows. Tweet exports use
            ``id``/``created_at``/``text``, review exports use
            ``review_id``/``entity``/``date``/``rating``/``text``, and
            generic records use ``id``/``timestamp``/``text``.
        default_entity: Entity to assign when the record names none.

    Raises:
        MissingField: A required field is absent or blank.
        BadTimestamp: The record's timestamp cannot be parsed.
        EmptyText: The record has no text and no hashtags.
    """
    extras: dict[str, Any] = {}
    if source in (SourceKind.TRIPADVISOR, SourceKind.BOOKING):
        post_id = str(_require(record, "review_id"))
        entity = record.get("entity") or default_entity
        timestamp = parse_timestamp(_require(record, "date"))
        text = record.get("text")
        if text is None:
            raise MissingField("text")
        rating = record.get("rating")
        if rating not in (None, ""):
            extras["rating"] = float(rating)
    elif source is SourceKind.TWITTER:
        post_id = str(_require(record, "id"))
        entity = record.get("entity") or default_entity
        timestamp = parse_timestamp(_require(record, "created_at"))
        text = record.get("text")
        if text is None:
            raise MissingField("text")
    else:
        post_id = str(_require(record, "id"))
        entity = record.get("entity") or default_entity
        timestamp = parse_timestamp(_require(record, "timestamp"))
        text = record.get("text")
        if text is None:
            raise MissingField("text")
    if not entity:
        raise MissingField("entity")
    hashtags = _extract_hashtags(text, record.get("hashtags"))
    if not text and not hashtags:
        raise EmptyText()
    return Post(
        id=post_id,
        source=source,
        entity_id=str(entity),
        timestamp=timestamp,
        raw_text=text,
        hashtags=hashtags,
        geo=_parse_geo(record.get("geo")),
        lang=record.get("lang") or None,
        extras=extras,
    )


class PostStore:
    """Append-only post log with in-memory indexes.

    Thread-safe: ingest batches and queries take an internal lock, and
    returned ``Post`` objects are immutable.
    """

    def __init__(self, data_dir: str | Path):
        self._dir = Path(data_dir)
        self._path = self._dir / "posts.jsonl"
        self._lock = threading.Lock()
        self._posts: dict[str, Post] = {}
        try:
            self._dir.mkdir(parents=True, exist_ok=True)
            if self._path.exists():
                with open(self._path, encoding="utf-8") as fh:
                    for line in fh:
                        line = line.strip()
                        if line:
                            post = Post.from_record(json.loads(line))
                            self._posts[post.id] = post
        except OSError as exc:
            raise StoreUnavailable(f"cannot open store at {self._dir}: {exc}") from exc

    def __len__(self) -> int:
        return len(self._posts)

    def get(self, post_id: str) -> Post | None:
        with self._lock:
            return self._posts.get(post_id)

    def ingest(
        self,
        records: Iterable[dict[str, Any]],
        source: SourceKind,
        default_entity: str | None = None,
    ) -> IngestStats:
        """Parse and persist a batch of records.

        Returns tallies satisfying ``read == accepted + duplicates +
        rejected``. Records whose id is already stored (or repeated
        within the batch) count as duplicates and are not re-stored.
        """
        stats = IngestStats()
        fresh: list[Post] = []
        with self._lock:
            for record in records:
                stats.read += 1
                if isinstance(record, RecordError):
                    stats.reject(record.reason)
                    continue
                try:
                    post = parse_post_record(record, source, default_entity)
                except RecordError as exc:
                    stats.reject(exc.reason)
                    continue
                if post.id in self._posts:
                    stats.duplicates += 1
                    continue
                self._posts[post.id] = post
                fresh.append(post)
                stats.accepted += 1
            try:
                with open(self._path, "a", encoding="utf-8") as fh:
                    for post in fresh:
                        fh.write(json.dumps(post.to_record(), ensure_ascii=False))
                        fh.write("\n")
            except OSError as exc:
                raise StoreUnavailable(f"cannot append to {self._path}: {exc}") from exc
        return stats

    def ingest_file(
        self,
        path: str | Path,
        source: SourceKind,
        default_entity: str | None = None,
    ) -> IngestStats:
        """Ingest a JSONL (tweets, generic) or CSV (reviews) export file."""
        return self.ingest(_iter_file(path, source), source, default_entity)

    def query_posts(
        self,
        entity_id: str,
        window: tuple[datetime, datetime] | None = None,
    ) -> list[Post]:
        """Posts for an entity ordered by (timestamp, id).

        ``window`` is half-open: start inclusive, end exclusive.
        """
        with self._lock:
            posts = [p for p in self._posts.values() if p.entity_id == entity_id]
        if window is not None:
            start, end = window
            posts = [p for p in posts if start <= p.timestamp < end]
        return sorted(posts, key=lambda p: (p.timestamp, p.id))

    def entities(self) -> list[tuple[str, int]]:
        """Known entity ids with post counts, sorted by id."""
        counts: dict[str, int] = {}
        with self._lock:
            for post in self._posts.values():
                counts[post.entity_id] = counts.get(post.entity_id, 0) + 1
        return sorted(counts.items())


class _BadLine(RecordError):
    def __init__(self, line_no: int):
        super().__init__(f"line {line_no} is not valid JSON")
        self.reason = "bad_json"


def _iter_file(path: str | Path, source: SourceKind) -> Iterator[dict[str, Any] | RecordError]:
    # Undecodable lines are yielded as errors so the batch keeps going
    # and the reject tally stays accurate.
    path = Path(path)
    if source in (SourceKind.TRIPADVISOR, SourceKind.BOOKING):
        with open(path, encoding="utf-8", newline="") as fh:
            yield from csv.DictReader(fh)
    else:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    yield json.loads(line)
                except json.JSONDecodeError:
                    yield _BadLine(line_no)
