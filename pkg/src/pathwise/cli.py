"""Command-line interface: ingest, train, eval, analyze, export, serve."""

from __future__ import annotations

import json
import os
from pathlib import Path

import click

from .aspects import AspectTagger
from .corpus import PostStore, SourceKind
from .embeddings import load_vectors
from .emotions import EmotionModel
from .errors import PathwiseError
from .neural.checkpoint import load_checkpoint, save_checkpoint
from .neural.training import TrainConfig
from .pipeline import (
    PipelineConfig,
    analyze_entity,
    latest_run,
    list_runs,
    load_artifact,
    parse_duration,
)
from .sentiment import SentimentModel
from .textprep import NormalizePolicy, default_emoji_words, default_lexicon
from .workflows import (
    aspect_span_metrics,
    aspect_token_accuracy,
    aspect_training_examples,
    emotion_exact_matches,
    emotion_metrics,
    emotion_training_examples,
    load_aspect_dataset,
    load_emotion_dataset,
    load_sentiment_dataset,
    sentiment_accuracy,
    sentiment_training_examples,
    train_until,
)

DEFAULT_DATA_DIR = "pathwise_data"


def _data_dir(override: str | None) -> Path:
    if override:
        return Path(override)
    return Path(os.environ.get("PATHWISE_DATA_DIR", DEFAULT_DATA_DIR))


def _policy() -> NormalizePolicy:
    return NormalizePolicy(lexicon=default_lexicon(), emoji_table=default_emoji_words())


data_dir_option = click.option(
    "--data-dir",
    "data_dir",
    default=None,
    help="Store/runs root (default: $PATHWISE_DATA_DIR or ./pathwise_data).",
)


class _Group(click.Group):
    """Translates domain errors into clean CLI failures."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except PathwiseError as exc:
            raise click.ClickException(str(exc)) from exc


@click.group(cls=_Group)
@click.version_option(package_name="pathwise")
def main():
    """Social-media analytics: discussion pathways, aspects, emotions."""


@main.command()
@click.option(
    "--source",
    type=click.Choice([kind.value for kind in SourceKind]),
    required=True,
    help="Export format of the input files.",
)
@click.option("--entity", required=True, help="Entity id for records without one.")
@data_dir_option
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
def ingest(source, entity, data_dir, files):
    """Load exported post files into the store."""
    store = PostStore(_data_dir(data_dir) / "store")
    kind = SourceKind(source)
    for name in files:
        stats = store.ingest_file(name, kind, default_entity=entity)
        click.echo(
            f"{name}: read={stats.read} accepted={stats.accepted} "
            f"duplicates={stats.duplicates} rejected={stats.rejected}"
        )
        for reason, count in sorted(stats.reject_reasons.items()):
            click.echo(f"  {reason}: {count}")


_TASKS = ("aspect", "sentiment", "emotion")


def _load_task_dataset(task: str, data: str, policy: NormalizePolicy):
    if task == "aspect":
        return load_aspect_dataset(data, policy)
    if task == "sentiment":
        return load_sentiment_dataset(data, policy)
    return load_emotion_dataset(data, policy)


@main.command()
@click.argument("task", type=click.Choice(_TASKS))
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--vectors", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--hidden", default=24, show_default=True)
@click.option("--epochs", default=300, show_default=True, help="Epoch budget.")
@click.option("--lr", default=0.02, show_default=True)
@click.option("--batch", default=4, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option(
    "--target",
    default=1.0,
    show_default=True,
    help="Training-set metric that ends training early.",
)
def train(task, data, out, vectors, hidden, epochs, lr, batch, seed, target):
    """Fit a model on a labeled file and write its checkpoint."""
    policy = _policy()
    table = load_vectors(Path(vectors).read_text(encoding="utf-8").splitlines())
    dataset = _load_task_dataset(task, data, policy)
    config = TrainConfig(seed=seed, learning_rate=lr, epochs=1, batch_size=batch)
    if task == "aspect":
        model = AspectTagger(table.dimension, hidden, seed=seed)
        examples = aspect_training_examples(table, dataset)
        metric = lambda: aspect_token_accuracy(model, table, dataset)
        metric_name = "token accuracy"
    elif task == "sentiment":
        model = SentimentModel(table.dimension, hidden, seed=seed)
        examples = sentiment_training_examples(table, dataset)
        metric = lambda: sentiment_accuracy(model, table, dataset)
        metric_name = "accuracy"
    else:
        model = EmotionModel(table.dimension, hidden, seed=seed)
        examples = emotion_training_examples(table, dataset)
        total = len(dataset)
        metric = lambda: emotion_exact_matches(model, table, dataset) / total
        metric_name = "exact-match rate"
    result = train_until(
        model, examples, config, metric, target=target, max_epochs=epochs, check_every=10
    )
    save_checkpoint(out, model.kind, model.hyperparams(), model.params())
    click.echo(
        f"{task}: {metric_name}={result.metric:.4f} after {result.epochs} epochs "
        f"({'target reached' if result.reached_target else 'epoch budget spent'})"
    )
    click.echo(f"checkpoint written to {out}")


@main.command("eval")
@click.argument("task", type=click.Choice(("aspect", "emotion")))
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ckpt", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--vectors", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--matching",
    type=click.Choice(("exact", "overlap")),
    default="exact",
    show_default=True,
    help="Span matching rule (aspect task only).",
)
def eval_cmd(task, data, ckpt, vectors, matching):
    """Score a checkpoint against a labeled file; prints P/R/F."""
    policy = _policy()
    table = load_vectors(Path(vectors).read_text(encoding="utf-8").splitlines())
    checkpoint = load_checkpoint(ckpt)
    if task == "aspect":
        model = AspectTagger.from_checkpoint(checkpoint)
        dataset = load_aspect_dataset(data, policy)
        metrics = aspect_span_metrics(model, table, dataset, matching=matching)
    else:
        model = EmotionModel.from_checkpoint(checkpoint)
        dataset = load_emotion_dataset(data, policy)
        metrics = emotion_metrics(model, table, dataset)
    click.echo(
        f"precision={metrics.precision:.4f} recall={metrics.recall:.4f} f1={metrics.f1:.4f}"
    )


@main.command()
@click.option("--entity", required=True)
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--window", default=None, help="Override the config window, e.g. 24h.")
@data_dir_option
def analyze(entity, config_path, window, data_dir):
    """Run the full pipeline for an entity and persist artifacts."""
    config = PipelineConfig.from_toml(config_path)
    override = parse_duration(window) if window else None
    run = analyze_entity(_data_dir(data_dir), entity, config, window=override)
    click.echo(f"run {run.run_id} for {run.entity_id}")
    for key, value in sorted(run.counts.items()):
        click.echo(f"  {key}: {value}")


@main.command()
@click.option("--entity", required=True)
@click.option("--format", "fmt", type=click.Choice(("json", "dot")), default="json", show_default=True)
@click.option("--run", "run_id", default="latest", show_default=True)
@click.option("--out", default="-", show_default=True, help="Output file, - for stdout.")
@data_dir_option
def export(entity, fmt, run_id, out, data_dir):
    """Write a run's pathway graph as JSON or Graphviz DOT."""
    runs_root = _data_dir(data_dir) / "runs"
    if run_id == "latest":
        resolved = latest_run(runs_root, entity)
        if resolved is None:
            raise click.ClickException(f"no completed runs for entity {entity!r}")
        run_id = resolved
    elif run_id not in list_runs(runs_root, entity):
        raise click.ClickException(f"unknown run {run_id!r} for entity {entity!r}")
    doc = load_artifact(runs_root, entity, run_id, "pathways.json")
    if fmt == "json":
        text = json.dumps(
            {"entity": entity, "run": run_id, **doc}, indent=2, sort_keys=True
        ) + "\n"
    else:
        from .pathways import graph_from_json, graph_to_dot

        text = graph_to_dot(graph_from_json(doc))
    if out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out}", err=True)


@main.command()
@click.option("--addr", default="127.0.0.1:8080", show_default=True)
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ui-dir", default=None, type=click.Path(file_okay=False))
@data_dir_option
def serve(addr, config_path, ui_dir, data_dir):
    """Serve the HTTP JSON API (and the dashboard, when built)."""
    from .service import serve as run_service

    host, sep, port_text = addr.rpartition(":")
    if not sep or not port_text.isdigit():
        raise click.ClickException(f"--addr must look like host:port, got {addr!r}")
    config = PipelineConfig.from_toml(config_path)
    run_service(_data_dir(data_dir), config, host=host or "127.0.0.1", port=int(port_text), ui_dir=ui_dir)


if __name__ == "__main__":
    main()
