"""HTTP JSON API over the post store and completed analysis runs.

Every response body validates against a schema shipped in
``pathwise/schemas/``. Reads are served straight from run artifacts;
runs started through POST /runs execute on a worker thread and become
visible atomically when their directory is renamed into place.
"""

from __future__ import annotations

import json
import logging
import threading
from importlib import resources
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .corpus import PostStore, parse_timestamp
from .errors import BadTimestamp, ConfigError, MissingCheckpoint, NoPosts
from .pipeline import (
    PipelineConfig,
    latest_run,
    list_runs,
    load_artifact,
    next_run_id,
    parse_duration,
    run_pipeline,
)

__all__ = ["create_app", "serve", "load_schema", "RunRegistry"]

log = logging.getLogger("pathwise.service")

_OVERRIDE_KEYS = {"window", "tau", "tau_link", "emotion_threshold", "top_k"}


def load_schema(name: str) -> dict:
    """One of the bundled response schemas, by file stem."""
    ref = resources.files("pathwise") / "schemas" / f"{name}.json"
    with ref.open("r", encoding="utf-8") as fh:
        return json.load(fh)


class RunRegistry:
    """Tracks which entities have a run in flight."""

    def __init__(self):
        self._mutex = threading.Lock()
        self._running: set[str] = set()

    def try_start(self, entity_id: str) -> bool:
        with self._mutex:
            if entity_id in self._running:
                return False
            self._running.add(entity_id)
            return True

    def finish(self, entity_id: str) -> None:
        with self._mutex:
            self._running.discard(entity_id)

    def is_running(self, entity_id: str) -> bool:
        with self._mutex:
            return entity_id in self._running


class RunRequest(BaseModel):
    entity: str = Field(min_length=1)
    config: dict[str, Any] = Field(default_factory=dict)


def _apply_overrides(base: PipelineConfig, overrides: dict[str, Any]) -> PipelineConfig:
    """Merge request-supplied tuning knobs into the service config.

    Raises:
        ConfigError: Unknown keys or out-of-range values.
    """
    unknown = set(overrides) - _OVERRIDE_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    from dataclasses import replace

    kwargs: dict[str, Any] = {}
    if "window" in overrides:
        kwargs["window"] = parse_duration(overrides["window"])
    for key in ("tau", "tau_link", "emotion_threshold"):
        if key in overrides:
            value = overrides[key]
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigError(f"{key} must be a number, got {value!r}")
            kwargs[key] = float(value)
    if "top_k" in overrides:
        value = overrides["top_k"]
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"top_k must be an integer, got {value!r}")
        kwargs["top_k"] = value
    return replace(base, **kwargs) if kwargs else base


def _parse_bound(value: str | None, name: str):
    if value is None:
        return None
    try:
        return parse_timestamp(value)
    except BadTimestamp as exc:
        raise HTTPException(400, f"invalid {name!r} timestamp: {value}") from exc


def _filter_window(doc: dict, start, end) -> dict:
    """Restrict a pathway document to layers overlapping [start, end)."""
    if start is None and end is None:
        return doc
    kept_layers = []
    for layer in doc["layers"]:
        w_start = parse_timestamp(layer["window"]["start"])
        w_end = parse_timestamp(layer["window"]["end"])
        if (end is None or w_start < end) and (start is None or w_end > start):
            kept_layers.append(layer)
    kept_ids = {c["id"] for layer in kept_layers for c in layer["clusters"]}
    edges = [
        e for e in doc["edges"] if e["from"] in kept_ids and e["to"] in kept_ids
    ]
    return {**doc, "layers": kept_layers, "edges": edges}


def create_app(
    data_dir: str | Path,
    config: PipelineConfig,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    """Build the API application rooted at ``data_dir``.

    ``ui_dir`` (or ``frontend/dist`` if present next to the data dir's
    parent) is mounted read-only at /ui for the dashboard build.
    """
    data_dir = Path(data_dir)
    runs_root = data_dir / "runs"
    registry = RunRegistry()
    app = FastAPI(title="pathwise", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc.errors()[:1])})

    def store() -> PostStore:
        return PostStore(data_dir / "store")

    def known_entities() -> dict[str, int]:
        counts = dict(store().entities())
        if runs_root.is_dir():
            for p in runs_root.iterdir():
                if p.is_dir() and not p.name.startswith("."):
                    counts.setdefault(p.name, 0)
        return counts

    def resolve_run(entity_id: str, run: str | None) -> str:
        runs = list_runs(runs_root, entity_id)
        if not runs:
            if entity_id not in known_entities():
                raise HTTPException(404, f"unknown entity {entity_id!r}")
            raise HTTPException(404, f"no completed runs for entity {entity_id!r}")
        if run is None or run == "latest":
            return runs[-1]
        if run not in runs:
            raise HTTPException(404, f"unknown run {run!r} for entity {entity_id!r}")
        return run

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    @app.get("/entities")
    def entities():
        out = []
        for entity_id, count in sorted(known_entities().items()):
            out.append(
                {
                    "id": entity_id,
                    "post_count": count,
                    "latest_run": latest_run(runs_root, entity_id),
                }
            )
        return out

    @app.get("/entities/{entity_id}/pathways")
    def pathways(
        entity_id: str,
        run: str | None = None,
        from_: str | None = Query(None, alias="from"),
        to: str | None = None,
    ):
        run_id = resolve_run(entity_id, run)
        doc = load_artifact(runs_root, entity_id, run_id, "pathways.json")
        return _filter_window(
            {"entity": entity_id, "run": run_id, **doc},
            _parse_bound(from_, "from"),
            _parse_bound(to, "to"),
        )

    @app.get("/entities/{entity_id}/aspects")
    def aspects(entity_id: str, run: str | None = None):
        run_id = resolve_run(entity_id, run)
        doc = load_artifact(runs_root, entity_id, run_id, "insights.json")
        return {"run": run_id, **doc}

    @app.get("/entities/{entity_id}/posts")
    def posts(entity_id: str, run: str | None = None, cluster: str | None = None):
        run_id = resolve_run(entity_id, run)
        doc = load_artifact(runs_root, entity_id, run_id, "analyses.json")
        rows = [{"id": pid, **body} for pid, body in doc["posts"].items()]
        if cluster is not None:
            known = {row["cluster"] for row in rows}
            if cluster not in known:
                raise HTTPException(
                    404, f"unknown cluster {cluster!r} in run {run_id!r}"
                )
            rows = [row for row in rows if row["cluster"] == cluster]
        rows.sort(key=lambda row: (row["timestamp"], row["id"]))
        return {"entity": entity_id, "run": run_id, "cluster": cluster, "posts": rows}

    @app.post("/runs")
    def start_run(body: RunRequest, wait: bool = False):
        entity_id = body.entity
        try:
            run_config = _apply_overrides(config, body.config)
        except ConfigError as exc:
            raise HTTPException(400, str(exc)) from exc
        if not store().query_posts(entity_id):
            raise HTTPException(404, f"unknown entity {entity_id!r}")
        if not registry.try_start(entity_id):
            raise HTTPException(409, f"a run for {entity_id!r} is already in progress")
        run_id = next_run_id(runs_root, entity_id)

        def execute():
            try:
                return run_pipeline(store(), entity_id, run_config, runs_root, run_id)
            finally:
                registry.finish(entity_id)

        if wait:
            try:
                run = execute()
            except NoPosts as exc:
                raise HTTPException(404, str(exc)) from exc
            except MissingCheckpoint as exc:
                raise HTTPException(400, f"missing model checkpoint: {exc}") from exc
            return {"status": "completed", **run.to_json()}

        def background():
            try:
                execute()
            except Exception:
                log.exception("run %s for %s failed", run_id, entity_id)

        threading.Thread(target=background, daemon=True).start()
        return JSONResponse(
            status_code=202,
            content={"run_id": run_id, "entity": entity_id, "status": "running"},
        )

    if ui_dir is None:
        candidate = Path.cwd() / "frontend" / "dist"
        ui_dir = candidate if candidate.is_dir() else None
    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(
    data_dir: str | Path,
    config: PipelineConfig,
    host: str = "127.0.0.1",
    port: int = 8080,
    ui_dir: str | Path | None = None,
) -> None:
    """Run the API under uvicorn until interrupted."""
    import uvicorn

    uvicorn.run(create_app(data_dir, config, ui_dir=ui_dir), host=host, port=port)
