"""Text preparation: tokenization, normalization, segmentation, spelling."""

from .lexicon import Lexicon, correct_spelling, segment_hashtag
from .normalize import (
    EMOTICON_WORDS,
    NormalizedDoc,
    NormalizedToken,
    NormalizePolicy,
    Provenance,
    default_emoji_words,
    default_lexicon,
    default_stopwords,
    load_emoji_words,
    load_stopwords,
    normalize,
    remove_stopwords,
)
from .tokenizer import (
    SENTENCE_TERMINATORS,
    Token,
    TokenKind,
    split_sentences,
    token_char_spans,
    tokenize,
)

__all__ = [
    "Lexicon",
    "correct_spelling",
    "segment_hashtag",
    "EMOTICON_WORDS",
    "NormalizedDoc",
    "NormalizedToken",
    "NormalizePolicy",
    "Provenance",
    "default_emoji_words",
    "default_lexicon",
    "default_stopwords",
    "load_emoji_words",
    "load_stopwords",
    "normalize",
    "remove_stopwords",
    "SENTENCE_TERMINATORS",
    "Token",
    "TokenKind",
    "split_sentences",
    "token_char_spans",
    "tokenize",
]
