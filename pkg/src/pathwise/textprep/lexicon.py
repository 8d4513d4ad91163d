"""Word-frequency lexicon, hashtag segmentation, and spell correction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, TextIO

from ..errors import EmptyInput

__all__ = ["Lexicon", "segment_hashtag", "correct_spelling"]

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass
class Lexicon:
    """Unigram counts used for segmentation and spelling.

    ``total`` is kept equal to the sum of all counts. Probability of an
    out-of-vocabulary word decays exponentially with its length:
    ``P(w) = 10 / (total * 10 ** len(w))``.
    """

    counts: dict[str, int] = field(default_factory=dict)
    total: int = 0

    @classmethod
    def from_counts(cls, counts: dict[str, int]) -> "Lexicon":
        clean = {w: c for w, c in counts.items() if c > 0}
        return cls(counts=clean, total=sum(clean.values()))

    @classmethod
    def from_tsv(cls, lines: Iterable[str] | TextIO) -> "Lexicon":
        """Parse ``word<TAB>count`` lines. Repeated words accumulate."""
        counts: dict[str, int] = {}
        for line in lines:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            word, _, count = line.partition("\t")
            counts[word] = counts.get(word, 0) + int(count)
        return cls.from_counts(counts)

    def count(self, word: str) -> int:
        return self.counts.get(word, 0)

    def __contains__(self, word: str) -> bool:
        return self.counts.get(word, 0) > 0

    def prob_ratio(self, word: str) -> tuple[int, int]:
        """Exact probability of ``word`` as an integer numerator/denominator."""
        c = self.counts.get(word, 0)
        if c > 0:
            return c, self.total
        return 10, self.total * 10 ** len(word)

    def prob(self, word: str) -> float:
        num, den = self.prob_ratio(word)
        return num / den


# A segmentation candidate: probability as an unreduced fraction plus the
# tie-break fields. Comparing exact integers keeps the dynamic program
# bit-for-bit aligned with exhaustive enumeration.
_Cand = tuple[int, int, int, tuple[int, ...]]


def _better(a: _Cand, b: _Cand) -> bool:
    """True when candidate ``a`` beats ``b``: higher probability, then fewer
    pieces, then leftmost-longest (lexicographically greater lengths)."""
    left = a[0] * b[1]
    right = b[0] * a[1]
    if left != right:
        return left > right
    if a[2] != b[2]:
        return a[2] < b[2]
    return a[3] > b[3]


def segment_hashtag(body: str, lexicon: Lexicon) -> list[str]:
    """Split a hashtag body into the most probable word sequence.

    Maximizes the summed log probability of the pieces under ``lexicon``
    (computed here as an exact product so ties are resolved without
    floating-point noise).

    Args:
        body: Hashtag text without the leading ``#``. Must be non-empty.
        lexicon: Frequency table. Must contain at least one word.

    Returns:
        The winning pieces in order. Their concatenation equals ``body``.

    Raises:
        EmptyInput: If ``body`` is empty or the lexicon has no entries.
    """
    if not body:
        raise EmptyInput("hashtag body is empty")
    if lexicon.total <= 0:
        raise EmptyInput("lexicon has no entries")
    n = len(body)
    best: list[_Cand | None] = [None] * (n + 1)
    best[0] = (1, 1, 0, ())
    for j in range(1, n + 1):
        for i in range(j):
            prev = best[i]
            if prev is None:
                continue
            num, den = lexicon.prob_ratio(body[i:j])
            cand = (prev[0] * num, prev[1] * den, prev[2] + 1, prev[3] + (j - i,))
            if best[j] is None or _better(cand, best[j]):
                best[j] = cand
    lengths = best[n][3]  # type: ignore[index]  # best[n] is always set
    pieces: list[str] = []
    pos = 0
    for length in lengths:
        pieces.append(body[pos : pos + length])
        pos += length
    return pieces


def _edits1(word: str) -> set[str]:
    """Strings within one insert, delete, replace, or adjacent transpose."""
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = [a + b[1:] for a, b in splits if b]
    transposes = [a + b[1] + b[0] + b[2:] for a, b in splits if len(b) > 1]
    replaces = [a + c + b[1:] for a, b in splits if b for c in _ALPHABET]
    inserts = [a + c + b for a, b in splits for c in _ALPHABET]
    return set(deletes + transposes + replaces + inserts)


def _known_edits2(word: str, lexicon: Lexicon) -> set[str]:
    # Membership is checked inline so the full distance-2 set is never stored.
    return {e2 for e1 in _edits1(word) for e2 in _edits1(e1) if e2 in lexicon}


def correct_spelling(word: str, lexicon: Lexicon) -> str:
    """Correct a lowercase word against the lexicon.

    Looks for candidates at edit distance 1, then 2 (inserts, deletes,
    replaces, adjacent transposes). Ties go to the higher count, then the
    lexicographically smaller word. Words shorter than three characters
    and words already in the lexicon are returned unchanged, as is any
    word with no candidate.
    """
    if len(word) < 3 or word in lexicon:
        return word
    candidates = {w for w in _edits1(word) if w in lexicon}
    if not candidates:
        candidates = _known_edits2(word, lexicon)
    if not candidates:
        return word
    return min(candidates, key=lambda w: (-lexicon.count(w), w))
