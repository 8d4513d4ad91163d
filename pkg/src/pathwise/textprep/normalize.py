"""Normalization of token streams into model-ready word sequences.

Every source token produces zero or more normalized tokens, each carrying
a provenance marker and the index of the source token it came from. The
interesting cases: entity-like tokens collapse to placeholder tags
(``<user>``, ``<url>``, ...), hashtags are segmented into words, emoticons
and emoji become feeling words when a mapping is known, censored words
stay untouched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterable, TextIO

from .lexicon import Lexicon, correct_spelling, segment_hashtag
from .tokenizer import Token, TokenKind

__all__ = [
    "Provenance",
    "NormalizedToken",
    "NormalizedDoc",
    "NormalizePolicy",
    "normalize",
    "remove_stopwords",
    "load_emoji_words",
    "load_stopwords",
    "default_lexicon",
    "default_stopwords",
    "default_emoji_words",
    "EMOTICON_WORDS",
]


class Provenance(str, Enum):
    VERBATIM = "verbatim"
    LOWERCASED = "lowercased"
    TAG_REPLACED = "tag_replaced"
    SEGMENTED = "segmented"
    SPELL_CORRECTED = "spell_corrected"
    EMOJI_WORDED = "emoji_worded"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class NormalizedToken:
    normal: str
    provenance: Provenance
    origin: int  # index of the source token


@dataclass(frozen=True)
class NormalizedDoc:
    post_id: str
    tokens: tuple[NormalizedToken, ...]

    def normals(self) -> list[str]:
        return [t.normal for t in self.tokens]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class NormalizePolicy:
    """Knobs for normalization.

    Args:
        lexicon: Frequency table for hashtag segmentation and spelling.
        emoji_table: Emoji sequence to word mapping.
        spell_correct: Correct out-of-vocabulary words when True.
        emoji_words: Replace emoticons/emoji with feeling words when True;
            otherwise they collapse to the ``<emoji>`` tag.
    """

    lexicon: Lexicon
    emoji_table: dict[str, str] = field(default_factory=dict)
    spell_correct: bool = True
    emoji_words: bool = True


_TAGS: dict[TokenKind, str] = {
    TokenKind.MENTION: "<user>",
    TokenKind.URL: "<url>",
    TokenKind.EMAIL: "<email>",
    TokenKind.PHONE: "<phone>",
    TokenKind.DATE: "<date>",
    TokenKind.TIME: "<time>",
    TokenKind.CURRENCY: "<money>",
    TokenKind.NUMBER: "<number>",
}

EMOJI_TAG = "<emoji>"

# Feeling words for the tokenizer's curated emoticons. Variants with noses
# or repeated mouths fall back to prefix matching in _emoticon_word.
EMOTICON_WORDS: dict[str, str] = {
    ":)": "smile",
    "(:": "smile",
    "=)": "smile",
    ":]": "smile",
    ":D": "laugh",
    "=D": "laugh",
    "xD": "laugh",
    "XD": "laugh",
    ":(": "sad",
    "):": "sad",
    "=(": "sad",
    ":[": "sad",
    ":'(": "cry",
    ":')": "joy",
    ";)": "wink",
    ":P": "playful",
    ":p": "playful",
    ":*": "kiss",
    ":o": "surprise",
    ":O": "surprise",
    ":|": "neutral",
    ":/": "unsure",
    ":\\": "unsure",
    "D:": "shock",
    "<3": "love",
    "</3": "heartbreak",
    ":3": "cute",
    "^_^": "happy",
    "^-^": "happy",
    "-_-": "annoyed",
    "o_O": "confused",
    "O_o": "confused",
    "o_o": "confused",
    "O_O": "confused",
    "T_T": "cry",
    "t_t": "cry",
    "><": "frustrated",
}

_WORDLIKE = re.compile(r"[a-z0-9']+")
_FE0F = "️"
_FE0E = "︎"


def _emoticon_word(surface: str) -> str | None:
    if surface in EMOTICON_WORDS:
        return EMOTICON_WORDS[surface]
    # collapse repeats: ":)))" -> ":)", "xDD" -> "xD", "<333" -> "<3"
    squeezed = re.sub(r"(.)\1+", r"\1", surface)
    if squeezed in EMOTICON_WORDS:
        return EMOTICON_WORDS[squeezed]
    # drop a nose: ":-)" -> ":)"
    noseless = re.sub(r"^([:=;])['\-^o]", r"\1", squeezed)
    if noseless in EMOTICON_WORDS:
        return EMOTICON_WORDS[noseless]
    return None


def _emoji_word(surface: str, table: dict[str, str]) -> str | None:
    if surface in table:
        return table[surface]
    stripped = surface.replace(_FE0F, "").replace(_FE0E, "")
    return table.get(stripped)


def _word_normals(
    surface: str, origin: int, policy: NormalizePolicy
) -> list[NormalizedToken]:
    lowered = surface.lower()
    normal = lowered
    if policy.spell_correct:
        normal = correct_spelling(lowered, policy.lexicon)
    if normal != lowered:
        prov = Provenance.SPELL_CORRECTED
    elif normal != surface:
        prov = Provenance.LOWERCASED
    else:
        prov = Provenance.VERBATIM
    return [NormalizedToken(normal, prov, origin)]


def _hashtag_normals(
    surface: str, origin: int, policy: NormalizePolicy
) -> list[NormalizedToken]:
    body = surface[1:].lower()
    out: list[NormalizedToken] = []
    # underscores separate chunks; digit runs stay whole; letter runs are
    # segmented against the lexicon
    for chunk in _WORDLIKE.findall(body):
        for run in re.findall(r"[a-z']+|[0-9]+", chunk):
            if run[0].isdigit():
                out.append(NormalizedToken(run, Provenance.SEGMENTED, origin))
            else:
                for piece in segment_hashtag(run, policy.lexicon):
                    out.append(NormalizedToken(piece, Provenance.SEGMENTED, origin))
    return out


def normalize(post_id: str, tokens: list[Token], policy: NormalizePolicy) -> NormalizedDoc:
    """Turn tokenizer output into a normalized document.

    Args:
        post_id: Identifier carried through to downstream analyses.
        tokens: Output of :func:`pathwise.textprep.tokenizer.tokenize`.
        policy: Normalization settings.

    Returns:
        A document whose tokens are lowercase words, placeholder tags,
        hashtag pieces, feeling words, and verbatim punctuation or
        censored words, in source order.
    """
    out: list[NormalizedToken] = []
    for idx, tok in enumerate(tokens):
        kind = tok.kind
        if kind in _TAGS:
            out.append(NormalizedToken(_TAGS[kind], Provenance.TAG_REPLACED, idx))
        elif kind is TokenKind.WORD:
            out.extend(_word_normals(tok.surface, idx, policy))
        elif kind is TokenKind.HASHTAG:
            out.extend(_hashtag_normals(tok.surface, idx, policy))
        elif kind is TokenKind.EMOTICON:
            word = _emoticon_word(tok.surface) if policy.emoji_words else None
            if word is None:
                out.append(NormalizedToken(EMOJI_TAG, Provenance.TAG_REPLACED, idx))
            else:
                out.append(NormalizedToken(word, Provenance.EMOJI_WORDED, idx))
        elif kind is TokenKind.EMOJI:
            word = (
                _emoji_word(tok.surface, policy.emoji_table)
                if policy.emoji_words
                else None
            )
            if word is None:
                out.append(NormalizedToken(EMOJI_TAG, Provenance.TAG_REPLACED, idx))
            else:
                out.append(NormalizedToken(word, Provenance.EMOJI_WORDED, idx))
        elif kind is TokenKind.CENSORED:
            out.append(NormalizedToken(tok.surface, Provenance.VERBATIM, idx))
        elif kind is TokenKind.EMPHASIZED:
            inner = tok.surface.strip("*")
            normals = _word_normals(inner, idx, policy)
            # unwrapping always changes the surface, so plain verbatim
            # results are recorded as lowercased
            out.extend(
                NormalizedToken(
                    t.normal,
                    t.provenance
                    if t.provenance is Provenance.SPELL_CORRECTED
                    else Provenance.LOWERCASED,
                    t.origin,
                )
                for t in normals
            )
        else:  # punct
            out.append(NormalizedToken(tok.surface, Provenance.VERBATIM, idx))
    return NormalizedDoc(post_id=post_id, tokens=tuple(out))


def remove_stopwords(doc: NormalizedDoc, stoplist: frozenset[str]) -> NormalizedDoc:
    """Drop stoplist entries and placeholder tags, preserving order."""
    kept = tuple(
        t
        for t in doc.tokens
        if t.normal not in stoplist
        and not (t.normal.startswith("<") and t.normal.endswith(">"))
    )
    return NormalizedDoc(post_id=doc.post_id, tokens=kept)


def load_emoji_words(lines: Iterable[str] | TextIO) -> dict[str, str]:
    """Parse ``emoji<TAB>word`` lines into a lookup table."""
    table: dict[str, str] = {}
    for line in lines:
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        emoji, _, word = line.partition("\t")
        if emoji and word:
            table[emoji] = word.strip()
    return table


def load_stopwords(lines: Iterable[str] | TextIO) -> frozenset[str]:
    out = set()
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            out.add(line)
    return frozenset(out)


def _data_text(name: str) -> str:
    return (
        resources.files("pathwise.textprep").joinpath("data", name).read_text("utf-8")
    )


def default_lexicon() -> Lexicon:
    return Lexicon.from_tsv(_data_text("lexicon.tsv").splitlines())


def default_stopwords() -> frozenset[str]:
    return load_stopwords(_data_text("stopwords.txt").splitlines())


def default_emoji_words() -> dict[str, str]:
    return load_emoji_words(_data_text("emoji_words.tsv").splitlines())
