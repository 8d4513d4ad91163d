"""Session-scoped fixtures: embedding table, datasets, trained models.

Training the three small models takes a couple of seconds total, so the
trained instances and their on-disk checkpoints are shared across every
test module that needs them.
"""

import shutil
from pathlib import Path

import pytest

from pathwise.aspects import AspectTagger
from pathwise.embeddings import load_vectors
from pathwise.emotions import EmotionModel
from pathwise.neural.checkpoint import save_checkpoint
from pathwise.neural.training import TrainConfig
from pathwise.sentiment import SentimentModel
from pathwise.textprep import (
    NormalizePolicy,
    default_emoji_words,
    default_lexicon,
    default_stopwords,
)
from pathwise.workflows import (
    aspect_token_accuracy,
    aspect_training_examples,
    emotion_exact_matches,
    emotion_training_examples,
    load_aspect_dataset,
    load_emotion_dataset,
    load_sentiment_dataset,
    sentiment_accuracy,
    sentiment_training_examples,
    train_until,
)

DATA = Path(__file__).parent / "data"

EMBED_DIM = 16
HIDDEN = 24


@pytest.fixture(scope="session")
def policy():
    return NormalizePolicy(lexicon=default_lexicon(), emoji_table=default_emoji_words())


@pytest.fixture(scope="session")
def stopwords():
    return default_stopwords()


@pytest.fixture(scope="session")
def embedding_table():
    return load_vectors((DATA / "vectors_16d.txt").read_text().splitlines())


@pytest.fixture(scope="session")
def aspect_dataset(policy):
    return load_aspect_dataset(DATA / "aspect_fixture.jsonl", policy)


@pytest.fixture(scope="session")
def sentiment_dataset(policy):
    return load_sentiment_dataset(DATA / "sentiment_fixture.jsonl", policy)


@pytest.fixture(scope="session")
def emotion_dataset(policy):
    return load_emotion_dataset(DATA / "emotion_fixture.tsv", policy)


@pytest.fixture(scope="session")
def trained_tagger(embedding_table, aspect_dataset):
    model = AspectTagger(EMBED_DIM, HIDDEN, seed=7)
    examples = aspect_training_examples(embedding_table, aspect_dataset)
    result = train_until(
        model,
        examples,
        TrainConfig(seed=7, learning_rate=0.02, epochs=1, batch_size=4),
        lambda: aspect_token_accuracy(model, embedding_table, aspect_dataset),
        target=1.0,
        max_epochs=300,
        check_every=20,
    )
    assert result.reached_target, f"tagger stalled at {result.metric:.3f}"
    return model


@pytest.fixture(scope="session")
def trained_sentiment(embedding_table, sentiment_dataset):
    model = SentimentModel(EMBED_DIM, HIDDEN, seed=11)
    examples = sentiment_training_examples(embedding_table, sentiment_dataset)
    result = train_until(
        model,
        examples,
        TrainConfig(seed=11, learning_rate=0.02, epochs=1, batch_size=4),
        lambda: sentiment_accuracy(model, embedding_table, sentiment_dataset),
        target=1.0,
        max_epochs=300,
        check_every=20,
    )
    assert result.reached_target, f"sentiment stalled at {result.metric:.3f}"
    return model


@pytest.fixture(scope="session")
def trained_emotion(embedding_table, emotion_dataset):
    model = EmotionModel(EMBED_DIM, HIDDEN, seed=13)
    examples = emotion_training_examples(embedding_table, emotion_dataset)
    total = len(emotion_dataset)
    result = train_until(
        model,
        examples,
        TrainConfig(seed=13, learning_rate=0.02, epochs=1, batch_size=4),
        lambda: emotion_exact_matches(model, embedding_table, emotion_dataset) / total,
        target=1.0,
        max_epochs=300,
        check_every=20,
    )
    assert result.reached_target, f"emotion stalled at {result.metric:.3f}"
    return model


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory, trained_tagger, trained_sentiment, trained_emotion):
    """Directory with the three checkpoints plus the embedding vectors."""
    root = tmp_path_factory.mktemp("models")
    for name, model in (
        ("aspect.json", trained_tagger),
        ("sentiment.json", trained_sentiment),
        ("emotion.json", trained_emotion),
    ):
        save_checkpoint(root / name, model.kind, model.hyperparams(), model.params())
    shutil.copy(DATA / "vectors_16d.txt", root / "vectors.txt")
    return root
