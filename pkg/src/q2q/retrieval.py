"""End-to-end retrieval: query embedding, argmax over the question index,
hash resolution, and sentence-level refinement.

Retrieval never rewrites anything: every piece of returned text is the
stored content, byte for byte. The only post-processing is locating the
single sentence with the highest token (Jaccard) overlap against the query,
and only when that overlap clears a threshold; otherwise results stay at
paragraph granularity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .corpus import ContentHash
from .embed import EmbeddingBackend, cosine_similarity, embed_text
from .errors import DanglingHashError
from .index import QuestionIndex, SourceKind
from .store import ContentStore, Locator

DEFAULT_SENTENCE_THRESHOLD = 0.3

# 50 high-frequency function words; question words are included because
# declarative sentences rarely contain them and they carry no content.
DEFAULT_STOPWORDS = frozenset(
    """
    a an and are as at be been but by did do does for from had has have he
    her his how i in is it its of on or she that the their them they this
    to was we were what when where which who why will with you
    """.split()
)

_TOKEN = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class RetrievalResult:
    """One answer: the matched question and the exact stored content."""

    matched_question: str
    score: float
    content_hash: ContentHash
    source_kind: SourceKind
    text: str
    article: Locator | None = None
    sentence_span: tuple[int, int] | None = None
    media_url: str | None = None


def jaccard_similarity(a: set, b: set) -> float:
    """|a & b| / |a | b|; 0.0 when both sets are empty."""
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def content_tokens(text: str, stopwords: frozenset[str] = DEFAULT_STOPWORDS) -> set[str]:
    """Lowercase alphanumeric tokens with stopwords removed."""
    return {t for t in _TOKEN.findall(text.lower()) if t not in stopwords}


def refine_to_sentence(
    query: str,
    passage,
    threshold: float = DEFAULT_SENTENCE_THRESHOLD,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> tuple[int, int] | None:
    """Byte span of the best-overlapping sentence, or None.

    Picks the sentence with maximal Jaccard similarity to the query over
    content tokens; earliest sentence wins ties. Returns None when the best
    score is below the threshold (paragraph-level fallback).
    """
    query_tokens = content_tokens(query, stopwords)
    data = passage.text.encode("utf-8")
    best_span: tuple[int, int] | None = None
    best_score = 0.0
    for start, end in passage.sentences:
        sentence_tokens = content_tokens(data[start:end].decode("utf-8"), stopwords)
        score = jaccard_similarity(query_tokens, sentence_tokens)
        if score > best_score:
            best_score = score
            best_span = (start, end)
    if best_span is not None and best_score >= threshold:
        return best_span
    return None


class RetrievalEngine:
    """Read-only query path over a shared index and content store."""

    def __init__(
        self,
        index: QuestionIndex,
        store: ContentStore,
        backend: EmbeddingBackend,
        sentence_threshold: float = DEFAULT_SENTENCE_THRESHOLD,
        stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    ):
        self._index = index
        self._store = store
        self._backend = backend
        self._threshold = sentence_threshold
        self._stopwords = stopwords

    @property
    def index(self) -> QuestionIndex:
        return self._index

    @property
    def store(self) -> ContentStore:
        return self._store

    @property
    def backend(self) -> EmbeddingBackend:
        return self._backend

    def answer(self, query: str, k: int = 3) -> list[RetrievalResult]:
        """Top-k retrieval results, best first.

        Raises EmptyIndexError on an empty index and DanglingHashError when
        an index entry's hash resolves to nothing (a broken reindex).
        """
        if not query.strip():
            raise ValueError("query must be non-empty")
        query_vector = embed_text(query, self._backend)
        hits = self._index.search_top_k(query_vector, k)
        return [self._resolve(query, hit) for hit in hits]

    def _resolve(self, query: str, hit) -> RetrievalResult:
        entry = hit.entry
        score = min(1.0, max(-1.0, hit.score))
        if entry.source_kind is SourceKind.PASSAGE:
            passage = self._store.get_passage(entry.content_hash)
            if passage is None:
                raise DanglingHashError(entry.content_hash.hex)
            return RetrievalResult(
                matched_question=entry.question_text,
                score=score,
                content_hash=entry.content_hash,
                source_kind=SourceKind.PASSAGE,
                text=passage.text,
                article=passage.primary_locator,
                sentence_span=refine_to_sentence(
                    query, passage, self._threshold, self._stopwords
                ),
            )
        group = self._store.get_triple_group(entry.content_hash)
        if group is None:
            raise DanglingHashError(entry.content_hash.hex)
        return RetrievalResult(
            matched_question=entry.question_text,
            score=score,
            content_hash=entry.content_hash,
            source_kind=SourceKind.TRIPLE,
            text=group.text,
            media_url=group.media_url,
        )

    def baseline_passage_score(self, query: str, passage_text: str) -> float:
        """Query-to-passage cosine: the ablation baseline."""
        return cosine_similarity(
            embed_text(query, self._backend), embed_text(passage_text, self._backend)
        )

    def ablation_rows(self, queries) -> list[tuple[str, float, float]]:
        """(query, question-to-question score, question-to-passage score)
        rows comparing retrieval via generated questions against direct
        passage similarity for the same resolved content."""
        rows = []
        for query in queries:
            top = self.answer(query, 1)[0]
            rows.append((query, top.score, self.baseline_passage_score(query, top.text)))
        return rows
