"""End-to-end acceptance checks, one per delivery criterion.

Every test prints a single ``P<n> ...: PASS`` (or FAIL) line with the
measured cost, so a full run doubles as a release checklist. Runtime
budgets are asserted, not just reported. The two benchmark checks at
the end need external datasets and skip with a notice when the
environment does not provide them.
"""

import itertools
import json
import math
import os
import time
import zlib
from datetime import datetime, timedelta, timezone
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from pathwise.aspects import (
    AspectTagger,
    align_char_spans,
    decode_spans,
    evaluate_spans,
    tag_sentence,
)
from pathwise.corpus import PostStore, SourceKind
from pathwise.embeddings import EmbeddingTable
from pathwise.emotions import EMOTIONS, EmotionModel, evaluate_multilabel
from pathwise.insights import aspect_report, top_emotions
from pathwise.neural.training import TrainConfig, grad_check, train
from pathwise.pathways import (
    PostAnalysis,
    PostVector,
    build_graph,
    graph_to_json,
    label_and_annotate,
)
from pathwise.pipeline import PipelineConfig, analyze_entity, load_artifact
from pathwise.sentiment import SentimentModel, classify_aspect
from pathwise.service import create_app, load_schema
from pathwise.textprep import segment_hashtag, tokenize
from pathwise.workflows import (
    AspectExample,
    aspect_token_accuracy,
    aspect_training_examples,
    emotion_exact_matches,
    emotion_metrics,
    emotion_training_examples,
    prepare_doc,
    sentiment_accuracy,
    sentiment_training_examples,
    train_until,
)

from test_segmentation import load_fixture_lexicon

DATA = Path(__file__).parent / "data"

EMBED_DIM = 16
HIDDEN = 24


@pytest.fixture
def checklist(capfd):
    """One visible pass/fail line per criterion, bypassing capture."""

    def _report(name: str, ok: bool, detail: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        with capfd.disabled():
            print(f"\n{name}: {status}{suffix}", flush=True)

    return _report


# --- P1: preprocessing golden suite ---------------------------------------


def test_p1_preprocessing_golden(policy, checklist):
    cases = [
        json.loads(line)
        for line in (DATA / "preprocessing_golden.jsonl").read_text().splitlines()
        if line.strip()
    ]
    assert len(cases) >= 50
    started = time.monotonic()
    failures = []
    for i, case in enumerate(cases):
        doc = prepare_doc(case["text"], policy, doc_id=f"golden-{i}")
        got = doc.normals()
        if got != case["normals"]:
            failures.append((case["text"], got, case["normals"]))
    elapsed = time.monotonic() - started
    ok = not failures and elapsed < 1.0
    checklist("P1 preprocessing golden suite", ok, f"{len(cases)} cases in {elapsed:.3f}s")
    assert not failures, failures[:5]
    assert elapsed < 1.0


# --- P2: segmentation equals exhaustive enumeration -----------------------


def _split_plans(max_len: int) -> dict[int, list[tuple[tuple[int, int], ...]]]:
    """Every way to cut a body of each length, as (start, end) pairs.

    Shared across all bodies of the same length so the per-body work is
    just score lookups and integer multiplies.
    """
    plans: dict[int, list[tuple[tuple[int, int], ...]]] = {}
    for n in range(1, max_len + 1):
        per_len = []
        for mask in range(1 << (n - 1)):
            cuts = [0] + [p for p in range(1, n) if mask & (1 << (p - 1))] + [n]
            per_len.append(tuple(zip(cuts, cuts[1:])))
        plans[n] = per_len
    return plans


def _enumerated_best(body: str, lexicon, plans) -> list[str]:
    """Exhaustive oracle: highest exact probability, then fewest pieces,
    then lexicographically greatest piece-length tuple."""
    n = len(body)
    ratio = {}
    prob_ratio = lexicon.prob_ratio
    for i in range(n):
        for j in range(i + 1, n + 1):
            ratio[(i, j)] = prob_ratio(body[i:j])
    best_num = best_den = 0
    best_segs = None
    for segs in plans[n]:
        num = den = 1
        for pair in segs:
            piece_num, piece_den = ratio[pair]
            num *= piece_num
            den *= piece_den
        if best_segs is None:
            best_num, best_den, best_segs = num, den, segs
            continue
        left = num * best_den
        right = best_num * den
        if left > right:
            best_num, best_den, best_segs = num, den, segs
        elif left == right:
            candidate = (-len(segs), tuple(e - s for s, e in segs))
            incumbent = (-len(best_segs), tuple(e - s for s, e in best_segs))
            if candidate > incumbent:
                best_num, best_den, best_segs = num, den, segs
    return [body[s:e] for s, e in best_segs]


def test_p2_segmentation_matches_enumeration(checklist):
    lexicon = load_fixture_lexicon()
    words = sorted(lexicon.counts)
    assert len(words) == 200
    bodies = {w for w in words if len(w) <= 12}
    for a, b in itertools.product(words, repeat=2):
        if len(a) + len(b) <= 12:
            bodies.add(a + b)
    corpus = sorted(bodies)

    started = time.monotonic()
    plans = _split_plans(12)
    mismatches = []
    for body in corpus:
        expected = _enumerated_best(body, lexicon, plans)
        got = segment_hashtag(body, lexicon)
        if got != expected:
            mismatches.append((body, got, expected))
    elapsed = time.monotonic() - started

    ok = not mismatches and elapsed < 30.0
    checklist(
        "P2 segmentation vs enumeration",
        ok,
        f"{len(corpus)} bodies in {elapsed:.1f}s",
    )
    assert not mismatches, mismatches[:5]
    assert elapsed < 30.0


# --- P3: gradient checks ---------------------------------------------------


def test_p3_gradient_checks(checklist):
    from stacks import ALL_STACKS, random_example  # noqa: PLC0415

    started = time.monotonic()
    worst_overall = 0.0
    failures = []
    for stack_cls in ALL_STACKS:
        for seed in range(10):
            model = stack_cls(seed=seed)
            example = random_example(stack_cls.__name__, seed=seed)
            worst = grad_check(model, example, seed=seed)
            worst_overall = max(worst_overall, worst)
            if worst >= 1e-4:
                failures.append((stack_cls.__name__, seed, worst))
    elapsed = time.monotonic() - started
    checks = len(ALL_STACKS) * 10

    ok = not failures and elapsed < 120.0
    checklist(
        "P3 gradient checks",
        ok,
        f"{checks} checks, worst {worst_overall:.2e}, {elapsed:.1f}s",
    )
    assert not failures, failures
    assert elapsed < 120.0


# --- P4: training reaches accuracy targets --------------------------------

FIG4_TEXT = "The place is small and cramped but the food is fantastic."
FIG4_CHAR_SPANS = [(4, 9), (39, 43)]  # "place", "food"


def test_p4_training_targets(
    policy, embedding_table, aspect_dataset, sentiment_dataset, emotion_dataset, checklist
):
    started = time.monotonic()

    tagger = AspectTagger(EMBED_DIM, HIDDEN, seed=7)
    tagger_result = train_until(
        tagger,
        aspect_training_examples(embedding_table, aspect_dataset),
        TrainConfig(seed=7, learning_rate=0.02, epochs=1, batch_size=4),
        lambda: aspect_token_accuracy(tagger, embedding_table, aspect_dataset),
        target=0.95,
        max_epochs=300,
        check_every=10,
    )

    sentiment = SentimentModel(EMBED_DIM, HIDDEN, seed=11)
    train_until(
        sentiment,
        sentiment_training_examples(embedding_table, sentiment_dataset),
        TrainConfig(seed=11, learning_rate=0.02, epochs=1, batch_size=4),
        lambda: sentiment_accuracy(sentiment, embedding_table, sentiment_dataset),
        target=1.0,
        max_epochs=300,
        check_every=10,
    )
    fig4_tokens = tokenize(FIG4_TEXT)
    fig4_doc = prepare_doc(FIG4_TEXT, policy, doc_id="fig4")
    token_spans, dropped = align_char_spans(
        FIG4_TEXT, fig4_tokens, fig4_doc, FIG4_CHAR_SPANS
    )
    assert dropped == 0
    fig4_labels = {}
    for span in token_spans:
        verdict = classify_aspect(sentiment, embedding_table, fig4_doc, span)
        fig4_labels[verdict.span.surface] = verdict.label

    emotion = EmotionModel(EMBED_DIM, HIDDEN, seed=13)
    total = len(emotion_dataset)
    emotion_result = train_until(
        emotion,
        emotion_training_examples(embedding_table, emotion_dataset),
        TrainConfig(seed=13, learning_rate=0.02, epochs=1, batch_size=4),
        lambda: emotion_exact_matches(emotion, embedding_table, emotion_dataset) / total,
        target=30 / 32,
        max_epochs=300,
        check_every=10,
    )
    exact = emotion_exact_matches(emotion, embedding_table, emotion_dataset)
    elapsed = time.monotonic() - started

    checks = {
        "aspect": tagger_result.reached_target and tagger_result.epochs <= 300,
        "fig4": fig4_labels == {"place": "negative", "food": "positive"},
        "emotion": exact >= 30,
        "time": elapsed < 300.0,
    }
    ok = all(checks.values())
    checklist(
        "P4 training targets",
        ok,
        f"aspect acc {tagger_result.metric:.3f} @ {tagger_result.epochs} epochs, "
        f"fig4 {fig4_labels}, emotion {exact}/{total}, {elapsed:.1f}s",
    )
    assert checks["aspect"], tagger_result
    assert checks["fig4"], fig4_labels
    assert checks["emotion"], f"{exact}/{total}"
    assert checks["time"], elapsed


# --- P5: aspect extraction on the reference sentences ----------------------

REFERENCE_SENTENCES = [
    ("The food was good, the place was clean and affordable.", {"food", "place"}),
    ("I love margherita pizza", {"margherita pizza"}),
    (
        "Highly impressed from the quality of the food and the hospitality "
        "to the great night I had!",
        {"food", "hospitality"},
    ),
    (
        "Top quality food, but the service could have been much more better",
        {"food", "service"},
    ),
]


def test_p5_reference_sentences(policy, embedding_table, trained_tagger, checklist):
    results = []
    for text, expected in REFERENCE_SENTENCES:
        doc = prepare_doc(text, policy)
        tags = tag_sentence(trained_tagger, embedding_table, doc)
        surfaces = {span.surface for span in decode_spans(doc, tags)}
        results.append((text, surfaces, expected))
    failures = [(t, got, want) for t, got, want in results if got != want]
    ok = not failures
    checklist("P5 reference sentence aspects", ok, f"{len(results)} sentences")
    assert not failures, failures


# --- P6: pathway graph invariants on random streams ------------------------


def _random_stream(seed: int):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(10, 501))
    dim = 8
    base = datetime(2024, 3, 1, tzinfo=timezone.utc)
    minutes = np.cumsum(rng.integers(1, 90, size=n))
    vectors = []
    analyses = {}
    sentiments = ("positive", "negative", "neutral")
    terms_pool = ("food", "staff", "room", "pool", "wifi", "view")
    for i in range(n):
        values = rng.standard_normal(dim)
        if rng.random() < 0.05:
            values = np.zeros(dim)  # posts with no usable terms
        pid = f"p{i:04d}"
        ts = base + timedelta(minutes=int(minutes[i]))
        vectors.append(PostVector(pid, ts, values))
        analyses[pid] = PostAnalysis(
            post_id=pid,
            sentiment=sentiments[int(rng.integers(0, 3))],
            emotions=frozenset(
                e for e in ("joy", "anger", "trust") if rng.random() < 0.3
            ),
            terms=tuple(t for t in terms_pool if rng.random() < 0.4),
        )
    window = timedelta(hours=int(rng.choice((6, 12, 24))))
    return vectors, analyses, window


def test_p6_pathway_invariants(checklist):
    started = time.monotonic()
    for seed in range(100):
        vectors, analyses, window = _random_stream(seed)
        graph = label_and_annotate(
            build_graph(vectors, window, tau=0.55, tau_link=0.5), analyses
        )

        by_ts = {v.post_id: v.timestamp for v in vectors}
        seen: set[str] = set()
        layer_of: dict[str, int] = {}
        for layer in graph.layers:
            members = [
                pid for cluster in layer.clusters for pid in cluster.member_post_ids
            ]
            assert len(members) == len(set(members)), f"seed {seed}: duplicate in layer"
            for pid in members:
                assert layer.window_start <= by_ts[pid] < layer.window_end, (
                    f"seed {seed}: {pid} outside its layer window"
                )
            assert not seen & set(members), f"seed {seed}: post in two layers"
            seen.update(members)
            for cluster in layer.clusters:
                layer_of[cluster.id] = layer.index
        assert seen == set(by_ts), f"seed {seed}: layers do not partition the stream"

        for edge in graph.edges:
            assert layer_of[edge.target] == layer_of[edge.source] + 1, (
                f"seed {seed}: edge {edge.source}->{edge.target} not consecutive"
            )

        rebuilt = label_and_annotate(
            build_graph(vectors, window, tau=0.55, tau_link=0.5), analyses
        )
        assert graph_to_json(rebuilt) == graph_to_json(graph), f"seed {seed}: not deterministic"
    elapsed = time.monotonic() - started

    ok = elapsed < 60.0
    checklist("P6 pathway invariants", ok, f"100 streams in {elapsed:.1f}s")
    assert ok, elapsed


# --- P7: insight aggregation vs brute-force recounts ------------------------


def test_p7_insight_recounts(checklist):
    started = time.monotonic()
    terms_pool = ["food", "service", "room", "staff", "pool", "view", "wifi", "breakfast"]
    labels = ["positive", "negative", "neutral"]
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        n = int(rng.integers(5, 60))
        per_post_aspects = {}
        per_post_emotions = {}
        for i in range(n):
            pid = f"p{i:03d}"
            pairs = [
                (terms_pool[int(rng.integers(0, len(terms_pool)))], labels[int(rng.integers(0, 3))])
                for _ in range(int(rng.integers(0, 5)))
            ]
            per_post_aspects[pid] = pairs
            per_post_emotions[pid] = [
                e for e in EMOTIONS if rng.random() < 0.2
            ]

        mentions: dict[str, int] = {}
        positives: dict[str, int] = {}
        for pid, pairs in per_post_aspects.items():
            present = {t for t, _ in pairs}
            for term in present:
                mentions[term] = mentions.get(term, 0) + 1
                if any(t == term and lbl == "positive" for t, lbl in pairs):
                    positives[term] = positives.get(term, 0) + 1
        expected_aspects = sorted(
            (
                (term, 100.0 * positives.get(term, 0) / count, count)
                for term, count in mentions.items()
            ),
            key=lambda row: (-row[2], row[0]),
        )
        got_aspects = [
            (a.term, a.positive_pct, a.mentions) for a in aspect_report(per_post_aspects)
        ]
        assert got_aspects == expected_aspects, f"seed {seed}"

        counts: dict[str, int] = {}
        for labels_set in per_post_emotions.values():
            for emotion in set(labels_set):
                counts[emotion] = counts.get(emotion, 0) + 1
        expected_top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:3]
        assert top_emotions(per_post_emotions, k=3) == expected_top, f"seed {seed}"

    quarters = {
        "q1": [("food", "positive")],
        "q2": [("food", "positive"), ("food", "negative")],
        "q3": [("food", "positive")],
        "q4": [("food", "negative")],
    }
    (insight,) = aspect_report(quarters)
    elapsed = time.monotonic() - started

    ok = insight.positive_pct == 75.0 and insight.mentions == 4 and elapsed < 10.0
    checklist("P7 insight recounts", ok, f"100 fixtures + 75.0% case in {elapsed:.1f}s")
    assert insight.positive_pct == 75.0
    assert insight.mentions == 4
    assert elapsed < 10.0


# --- P8: byte-identical reruns and schema-valid API ------------------------


def _pipeline_config(model_dir: Path) -> PipelineConfig:
    return PipelineConfig(
        vectors=model_dir / "vectors.txt",
        aspect_checkpoint=model_dir / "aspect.json",
        sentiment_checkpoint=model_dir / "sentiment.json",
        emotion_checkpoint=model_dir / "emotion.json",
    )


def test_p8_determinism_and_api(tmp_path, model_dir, checklist):
    entity = "blue-lagoon-hotel"
    data_dir = tmp_path / "data"
    store = PostStore(data_dir / "store")
    stats = store.ingest_file(
        DATA / "stream_blue_lagoon.jsonl", SourceKind.TWITTER, default_entity=entity
    )
    assert stats.accepted > 0
    config = _pipeline_config(model_dir)

    first = analyze_entity(data_dir, entity, config)
    second = analyze_entity(data_dir, entity, config)
    runs_root = data_dir / "runs" / entity
    deterministic = ("pathways.json", "insights.json", "analyses.json")
    identical = all(
        (runs_root / first.run_id / name).read_bytes()
        == (runs_root / second.run_id / name).read_bytes()
        for name in deterministic
    )

    graph_doc = load_artifact(data_dir / "runs", entity, first.run_id, "pathways.json")
    cluster_id = graph_doc["layers"][0]["clusters"][0]["id"]

    app = create_app(data_dir, config)
    from fastapi.testclient import TestClient  # noqa: PLC0415

    schema_failures = []
    with TestClient(app) as client:
        checks = [
            ("healthz", client.get("/healthz"), 200),
            ("entities", client.get("/entities"), 200),
            ("pathways", client.get(f"/entities/{entity}/pathways"), 200),
            ("insights", client.get(f"/entities/{entity}/aspects"), 200),
            ("posts", client.get(f"/entities/{entity}/posts"), 200),
            (
                "posts",
                client.get(f"/entities/{entity}/posts", params={"cluster": cluster_id}),
                200,
            ),
            (
                "run_summary",
                client.post(
                    "/runs", params={"wait": "true"}, json={"entity": entity}
                ),
                200,
            ),
            ("error", client.get("/entities/nobody-here/pathways"), 404),
        ]
        for schema_name, response, expected_status in checks:
            if response.status_code != expected_status:
                schema_failures.append(
                    (schema_name, f"status {response.status_code} != {expected_status}")
                )
                continue
            try:
                jsonschema.validate(response.json(), load_schema(schema_name))
            except jsonschema.ValidationError as exc:
                schema_failures.append((schema_name, exc.message))

    ok = identical and not schema_failures
    checklist(
        "P8 determinism and API schemas",
        ok,
        f"runs {first.run_id}/{second.run_id} identical={identical}, "
        f"{len(checks)} responses validated",
    )
    assert identical, "rerun artifacts differ"
    assert not schema_failures, schema_failures


# --- P9: benchmark datasets (skipped unless provided) -----------------------

SEMEVAL16_ENV = "PATHWISE_SEMEVAL16_DIR"
SEMEVAL18_ENV = "PATHWISE_SEMEVAL18_DIR"


def _hashed_table(docs, dim: int = 48) -> EmbeddingTable:
    """Deterministic random vectors keyed by word hash.

    Real pretrained vectors would do better; hashing keeps the
    benchmark self-contained and reproducible.
    """
    vectors: dict[str, np.ndarray] = {}
    for doc in docs:
        for token in doc.tokens:
            word = token.normal
            if word not in vectors:
                rng = np.random.default_rng(zlib.crc32(word.encode("utf-8")))
                vectors[word] = rng.standard_normal(dim) / math.sqrt(dim)
    mean = np.mean(list(vectors.values()), axis=0) if vectors else np.zeros(dim)
    return EmbeddingTable(dimension=dim, vectors=vectors, oov=mean)


def _split_files(directory: Path, patterns=("*.xml", "*.txt", "*.tsv")):
    files = sorted(p for pat in patterns for p in directory.glob(pat))
    train = [p for p in files if "train" in p.name.lower()]
    rest = [p for p in files if p not in train]
    return train, rest


def _load_absa_sentences(path: Path):
    import xml.etree.ElementTree as ET  # noqa: PLC0415

    rows = []
    for sentence in ET.parse(path).getroot().iter("sentence"):
        text_el = sentence.find("text")
        if text_el is None or not text_el.text:
            continue
        spans = set()
        for opinion in sentence.iter("Opinion"):
            target = opinion.get("target")
            if not target or target == "NULL":
                continue
            start, end = int(opinion.get("from", 0)), int(opinion.get("to", 0))
            if end > start:
                spans.add((start, end))
        rows.append((text_el.text, sorted(spans)))
    return rows


def _absa_examples(rows, policy):
    examples = []
    for i, (text, char_spans) in enumerate(rows):
        tokens = tokenize(text)
        doc = prepare_doc(text, policy, doc_id=f"absa-{i}")
        if not doc.tokens:
            continue
        spans, _ = align_char_spans(text, tokens, doc, char_spans)
        disjoint = []
        prev_end = 0
        for start, end in sorted(spans):
            if start >= prev_end:
                disjoint.append((start, end))
                prev_end = end
        examples.append(AspectExample(text, doc, tuple(disjoint)))
    return examples


def _deadline_train(model, examples, evaluate, seed, deadline, chunk=5):
    metric = evaluate()
    best = metric
    epoch = 0
    while time.monotonic() < deadline:
        config = TrainConfig(
            seed=seed + epoch, learning_rate=0.01, epochs=chunk, batch_size=8
        )
        train(model, examples, config)
        epoch += chunk
        metric = evaluate()
        if metric <= best and epoch >= 40:
            break  # stalled; more epochs will not rescue the run
        best = max(best, metric)
    return best


def test_p9_benchmark_datasets(policy, checklist):
    absa_dir = os.environ.get(SEMEVAL16_ENV)
    emotion_dir = os.environ.get(SEMEVAL18_ENV)
    if not absa_dir and not emotion_dir:
        checklist(
            "P9 benchmark datasets",
            True,
            f"SKIP: set {SEMEVAL16_ENV} and/or {SEMEVAL18_ENV} to enable",
        )
        pytest.skip("benchmark datasets absent")

    started = time.monotonic()
    deadline = started + 3000.0  # leave headroom inside the hour
    outcomes = []

    if absa_dir:
        train_files, test_files = _split_files(Path(absa_dir), patterns=("*.xml",))
        assert train_files and test_files, "need train and test XML files"
        train_rows = [r for f in train_files for r in _load_absa_sentences(f)]
        test_rows = [r for f in test_files for r in _load_absa_sentences(f)]
        train_set = _absa_examples(train_rows, policy)
        test_set = _absa_examples(test_rows, policy)
        table = _hashed_table([ex.doc for ex in train_set + test_set])
        tagger = AspectTagger(table.dimension, 48, seed=7)
        train_examples = aspect_training_examples(table, train_set)

        def span_f1() -> float:
            predicted = [
                decode_spans(ex.doc, tag_sentence(tagger, table, ex.doc))
                for ex in test_set
            ]
            gold = [ex.spans for ex in test_set]
            return evaluate_spans(predicted, gold).f1

        f1 = _deadline_train(tagger, train_examples, span_f1, seed=7, deadline=deadline)
        outcomes.append(("aspect F1", f1, 0.50))

    if emotion_dir:
        from pathwise.emotions import load_emotion_tsv  # noqa: PLC0415

        train_files, test_files = _split_files(Path(emotion_dir), patterns=("*.txt", "*.tsv"))
        assert train_files and test_files, "need train and eval TSV files"
        train_rows = [r for f in train_files for r in load_emotion_tsv(f)]
        test_rows = [r for f in test_files for r in load_emotion_tsv(f)]

        def to_examples(rows):
            docs = [prepare_doc(text, policy, doc_id=rid) for rid, text, _ in rows]
            return docs, [flags for _, _, flags in rows]

        train_docs, train_flags = to_examples(train_rows)
        test_docs, test_flags = to_examples(test_rows)
        table = _hashed_table(train_docs + test_docs)
        model = EmotionModel(table.dimension, 48, seed=13)
        from pathwise.workflows import embed_doc  # noqa: PLC0415

        train_examples = [
            (embed_doc(table, doc), np.asarray(flags, dtype=float))
            for doc, flags in zip(train_docs, train_flags)
            if doc.tokens
        ]

        def micro_f() -> float:
            from pathwise.emotions import detect_emotions  # noqa: PLC0415

            predicted = []
            gold = []
            for doc, flags in zip(test_docs, test_flags):
                labels = (
                    detect_emotions(model, table, doc) if doc.tokens else frozenset()
                )
                predicted.append([1.0 if e in labels else 0.0 for e in EMOTIONS])
                gold.append(list(flags))
            return evaluate_multilabel(
                np.asarray(predicted), np.asarray(gold), average="micro"
            ).f1

        f = _deadline_train(model, train_examples, micro_f, seed=13, deadline=deadline)
        outcomes.append(("emotion micro-F", f, 0.45))

    elapsed = time.monotonic() - started
    failures = [(name, score, floor) for name, score, floor in outcomes if score < floor]
    ok = not failures and elapsed < 3600.0
    detail = ", ".join(f"{name} {score:.3f} (floor {floor})" for name, score, floor in outcomes)
    checklist("P9 benchmark datasets", ok, f"{detail}, {elapsed:.0f}s")
    assert not failures, failures
    assert elapsed < 3600.0
