"""Article normalization, paragraph/sentence splitting, and content hashing.

A corpus is a set of articles; each article is split into paragraph-level
passages which are the retrieval units. Every passage is identified by the
SHA-256 digest of its normalized text, so identical text anywhere in the
corpus shares one identity.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

HASH_SIZE = 32

# Words that may end with "." without terminating a sentence. Compared
# case-insensitively against the token that precedes the candidate boundary.
DEFAULT_ABBREVIATIONS = frozenset(
    {
        "dr.",
        "mr.",
        "mrs.",
        "ms.",
        "prof.",
        "rev.",
        "hon.",
        "jr.",
        "sr.",
        "st.",
        "mt.",
        "no.",
        "vs.",
        "etc.",
        "e.g.",
        "i.e.",
        "cf.",
        "al.",
        "inc.",
        "ltd.",
        "co.",
        "corp.",
        "fig.",
        "u.s.",
        "u.k.",
        "u.n.",
    }
)

_REF_MARKER = re.compile(r"\[(?:\d+|citation needed)\]")
_WHITESPACE = re.compile(r"\s+")
_BLANK_LINE = re.compile(r"\n\s*\n")


@dataclass(frozen=True)
class ContentHash:
    """A 32-byte SHA-256 digest identifying one unit of content."""

    digest: bytes

    def __post_init__(self):
        if len(self.digest) != HASH_SIZE:
            raise ValueError(f"content hash must be {HASH_SIZE} bytes, got {len(self.digest)}")

    @property
    def hex(self) -> str:
        return self.digest.hex()

    @classmethod
    def from_hex(cls, hex_digest: str) -> "ContentHash":
        return cls(bytes.fromhex(hex_digest))

    def __str__(self) -> str:
        return self.hex


@dataclass(frozen=True)
class Article:
    """An input article: ordered (section_title, raw_text) pairs."""

    article_id: str
    title: str
    sections: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if not self.title:
            raise ValueError("article title must be non-empty")
        object.__setattr__(self, "sections", tuple((s, t) for s, t in self.sections))


@dataclass(frozen=True)
class Passage:
    """One paragraph-level retrieval unit with its article context.

    ``sentences`` holds (start, end) byte offsets into the UTF-8 encoding of
    ``text``; spans are in order, non-overlapping, and skip inter-sentence
    whitespace.
    """

    content_hash: ContentHash
    article_id: str
    article_title: str
    section_title: str
    paragraph_index: int
    text: str
    sentences: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if not self.text:
            raise ValueError("passage text must be non-empty")
        if self.paragraph_index < 0:
            raise ValueError("paragraph_index must be >= 0")
        limit = len(self.text.encode("utf-8"))
        prev_end = 0
        for start, end in self.sentences:
            if not (0 <= start < end <= limit):
                raise ValueError(f"sentence span ({start}, {end}) out of bounds")
            if start < prev_end:
                raise ValueError("sentence spans overlap or are out of order")
            prev_end = end

    def sentence_texts(self) -> list[str]:
        data = self.text.encode("utf-8")
        return [data[s:e].decode("utf-8") for s, e in self.sentences]


def normalize_text(raw: str) -> str:
    """Strip reference markers ("[3]", "[citation needed]") and collapse
    whitespace runs to single spaces. May return an empty string."""
    cleaned = _REF_MARKER.sub("", raw)
    return _WHITESPACE.sub(" ", cleaned).strip()


def content_hash(text: str) -> ContentHash:
    """SHA-256 of the UTF-8 bytes of ``text``."""
    return ContentHash(hashlib.sha256(text.encode("utf-8")).digest())


def split_sentences(
    passage_text: str,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> tuple[tuple[int, int], ...]:
    """Sentence spans as byte offsets into the UTF-8 encoding of the text.

    A ``.``, ``!`` or ``?`` ends a sentence when followed by whitespace and
    then an uppercase letter or digit, unless the word it terminates is in
    the abbreviation guard list. The final sentence ends at end of text.
    """
    n = len(passage_text)
    boundaries: list[int] = []  # char index one past each sentence end
    for i, ch in enumerate(passage_text):
        if ch not in ".!?":
            continue
        j = i + 1
        if j >= n:
            continue  # end of text closes the last sentence anyway
        if not passage_text[j].isspace():
            continue
        k = j
        while k < n and passage_text[k].isspace():
            k += 1
        if k >= n:
            continue
        nxt = passage_text[k]
        if not (nxt.isupper() or nxt.isdigit()):
            continue
        if ch == ".":
            word = _trailing_word(passage_text, i)
            if word.lower() in abbreviations:
                continue
        boundaries.append(j)

    # Byte offset of each char index, for O(1) char->byte conversion.
    byte_at = _byte_offsets(passage_text)

    spans: list[tuple[int, int]] = []
    char_start = 0
    for boundary in boundaries + [n]:
        while char_start < boundary and passage_text[char_start].isspace():
            char_start += 1
        char_end = boundary
        while char_end > char_start and passage_text[char_end - 1].isspace():
            char_end -= 1
        if char_end > char_start:
            spans.append((byte_at[char_start], byte_at[char_end]))
        char_start = boundary
    return tuple(spans)


def _trailing_word(text: str, dot_index: int) -> str:
    """The whitespace-delimited token ending at ``dot_index`` (inclusive)."""
    start = dot_index
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start : dot_index + 1]


def _byte_offsets(text: str) -> list[int]:
    offsets = [0] * (len(text) + 1)
    pos = 0
    for i, ch in enumerate(text):
        pos += len(ch.encode("utf-8"))
        offsets[i + 1] = pos
    return offsets


def split_paragraphs(
    article: Article,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> list[Passage]:
    """One passage per blank-line-delimited block per section, in document
    order. Blocks that normalize to empty text are dropped."""
    passages: list[Passage] = []
    index = 0
    for section_title, raw_text in article.sections:
        for block in _BLANK_LINE.split(raw_text):
            text = normalize_text(block)
            if not text:
                continue
            passages.append(
                Passage(
                    content_hash=content_hash(text),
                    article_id=article.article_id,
                    article_title=article.title,
                    section_title=section_title,
                    paragraph_index=index,
                    text=text,
                    sentences=split_sentences(text, abbreviations),
                )
            )
            index += 1
    return passages
