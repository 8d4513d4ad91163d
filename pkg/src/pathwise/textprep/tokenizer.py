"""Tokenizer for informal social-media text.

Splits raw post text into typed tokens (words, hashtags, mentions, URLs,
emoticons, emoji, numbers and friends) while keeping exact byte spans into
the UTF-8 encoding of the input. Rule order is fixed: at each position the
first rule that matches wins, so more specific patterns are listed before
general ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "TokenKind",
    "Token",
    "tokenize",
    "split_sentences",
    "token_char_spans",
    "SENTENCE_TERMINATORS",
]


class TokenKind(str, Enum):
    URL = "url"
    EMAIL = "email"
    PHONE = "phone"
    MENTION = "mention"
    HASHTAG = "hashtag"
    EMOTICON = "emoticon"
    EMOJI = "emoji"
    DATE = "date"
    TIME = "time"
    CURRENCY = "currency"
    CENSORED = "censored"
    EMPHASIZED = "emphasized"
    NUMBER = "number"
    WORD = "word"
    PUNCT = "punct"

    def __str__(self) -> str:  # keeps repr noise out of test diffs
        return self.value


@dataclass(frozen=True)
class Token:
    """One token with its byte span into the UTF-8 input.

    ``surface`` always equals ``raw.encode("utf-8")[start:end].decode("utf-8")``
    for the text it was produced from.
    """

    kind: TokenKind
    surface: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


_URL = r"(?:https?://|www\.)\S*[^\s.,!?;:)\]'\"(>«»]"
_EMAIL = r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}"
# Phone shapes: international +NNN..., grouped 3-3-3..5, or a bare 10-15
# digit run. Kept narrow so ISO dates (4-2-2 digits) never match.
_PHONE = r"\+\d(?:[-.]?\d){6,14}|\d{3}[-.]\d{3}[-.]\d{3,5}|\d{10,15}"
_MENTION = r"@[A-Za-z0-9_]+"
_HASHTAG = r"#[A-Za-z0-9_]+"
# Curated western/eastern emoticons. Eyes are limited to :=; so that
# parenthesised digits like "(8)" never read as a face.
_EMOTICON = (
    r"</?3+"
    r"|[:=;]'?[-^o]?[)(\]\[dDpP/\\|oO*3]+"
    r"|[)(\]\[dD/\\|]+'?[-^o]?[:=;]"
    r"|\^_+\^|\^-+\^|-_+-|[oO]_+[oO]|[tT]_+[tT]"
    r"|[xX][dD]+(?![A-Za-z0-9])"
)
_EMOJI_BASE = (
    "[‼⁉⌚⌛⏩-⏺☀-➿⬀-⯿"
    "\U0001f1e6-\U0001f1ff\U0001f300-\U0001f5ff\U0001f600-\U0001f64f"
    "\U0001f680-\U0001f6ff\U0001f900-\U0001f9ff\U0001fa70-\U0001faff]"
)
_EMOJI_MOD = "[︎️\U0001f3fb-\U0001f3ff]"
# A flag pair, or one base pictograph with modifiers and ZWJ continuations.
_EMOJI = (
    "(?:[\U0001f1e6-\U0001f1ff]{2}"
    f"|{_EMOJI_BASE}{_EMOJI_MOD}*(?:‍{_EMOJI_BASE}{_EMOJI_MOD}*)*)"
)
_DATE = r"\d{4}-\d{2}-\d{2}|\d{1,2}[/.]\d{1,2}[/.]\d{2,4}|\d{1,2}-\d{1,2}-\d{2,4}"
_TIME = (
    r"\d{1,2}:\d{2}(?::\d{2})?(?:[aApP][mM](?![A-Za-z0-9]))?"
    r"|\d{1,2}(?::\d{2})?[aApP][mM](?![A-Za-z0-9])"
)
_CURRENCY = (
    r"[$€£¥₨₹]\d+(?:[.,]\d+)*"
    r"|(?:Rs\.?|USD|EUR|GBP|LKR)\d+(?:[.,]\d+)*"
    r"|\d+(?:[.,]\d+)*(?:[$€£¥₨₹]|(?:USD|EUR|GBP|LKR)(?![A-Za-z]))"
)
_CENSORED = r"[A-Za-z]\*{2,}[A-Za-z]*"
_EMPHASIZED = r"\*[^\W\d_][\w']*\*"
_NUMBER = r"\d+(?:[.,]\d+)*%?"
_WORD = r"[^\W\d_]+(?:['’][^\W\d_]+)*"
_PUNCT = r"\S"

# Priority order. First match at the current position wins.
_RULES: list[tuple[TokenKind, re.Pattern[str]]] = [
    (kind, re.compile(pattern))
    for kind, pattern in [
        (TokenKind.URL, _URL),
        (TokenKind.EMAIL, _EMAIL),
        (TokenKind.PHONE, _PHONE),
        (TokenKind.MENTION, _MENTION),
        (TokenKind.HASHTAG, _HASHTAG),
        (TokenKind.EMOTICON, _EMOTICON),
        (TokenKind.EMOJI, _EMOJI),
        (TokenKind.DATE, _DATE),
        (TokenKind.TIME, _TIME),
        (TokenKind.CURRENCY, _CURRENCY),
        (TokenKind.CENSORED, _CENSORED),
        (TokenKind.EMPHASIZED, _EMPHASIZED),
        (TokenKind.NUMBER, _NUMBER),
        (TokenKind.WORD, _WORD),
        (TokenKind.PUNCT, _PUNCT),
    ]
]

_WS = re.compile(r"\s+")

SENTENCE_TERMINATORS = frozenset({".", "!", "?"})


def _byte_offsets(raw: str) -> list[int]:
    """Byte offset of every character boundary in the UTF-8 encoding."""
    offs = [0]
    for ch in raw:
        offs.append(offs[-1] + len(ch.encode("utf-8")))
    return offs


def tokenize(raw: str) -> list[Token]:
    """Split raw text into typed tokens with UTF-8 byte spans.

    Args:
        raw: Post text. May be empty.

    Returns:
        Tokens in input order. Surfaces never contain whitespace and
        concatenating the surfaces with the skipped whitespace restores
        the input exactly.
    """
    offs = _byte_offsets(raw)
    tokens: list[Token] = []
    i, n = 0, len(raw)
    while i < n:
        ws = _WS.match(raw, i)
        if ws is not None:
            i = ws.end()
            continue
        for kind, pattern in _RULES:
            m = pattern.match(raw, i)
            if m is not None and m.end() > i:
                tokens.append(Token(kind, m.group(), offs[i], offs[m.end()]))
                i = m.end()
                break
    return tokens


def token_char_spans(raw: str, tokens: list[Token]) -> list[tuple[int, int]]:
    """Character index spans for tokens produced from ``raw``."""
    offs = _byte_offsets(raw)
    byte_to_char = {b: i for i, b in enumerate(offs)}
    return [(byte_to_char[t.start], byte_to_char[t.end]) for t in tokens]


def split_sentences(tokens: list[Token]) -> list[list[Token]]:
    """Group tokens into sentences.

    A sentence ends after a run of terminator punctuation (``.``, ``!``,
    ``?``). The terminators stay with the sentence they close. Empty
    sentences are dropped.
    """
    sentences: list[list[Token]] = []
    current: list[Token] = []
    for idx, tok in enumerate(tokens):
        current.append(tok)
        if tok.kind is TokenKind.PUNCT and tok.surface in SENTENCE_TERMINATORS:
            nxt = tokens[idx + 1] if idx + 1 < len(tokens) else None
            ends_run = nxt is None or not (
                nxt.kind is TokenKind.PUNCT and nxt.surface in SENTENCE_TERMINATORS
            )
            if ends_run:
                sentences.append(current)
                current = []
    if current:
        sentences.append(current)
    return sentences
