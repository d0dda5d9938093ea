import json
from pathlib import Path

import pytest

from q2q.corpus import Article, split_paragraphs
from q2q.embed import HashingEmbedder, embed_text
from q2q.errors import TransportError
from q2q.index import IndexEntry, QuestionIndex, SourceKind
from q2q.qgen import QuestionGenerator
from q2q.retrieval import RetrievalEngine
from q2q.store import ContentStore, StoredTripleGroup
from q2q.wikidata import parse_sparql_results, triple_key

import fixture_data

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def build_engine(
    passage_units=(),
    triple_units=(),
    dim=384,
    backend=None,
) -> RetrievalEngine:
    """Engine over explicit (passage_text, questions) and
    ((qid, pid, lines, media_url), questions) units, skipping generation."""
    backend = backend or HashingEmbedder(dim)
    store = ContentStore()
    index = QuestionIndex(backend.dim)

    for i, (text, questions) in enumerate(passage_units):
        article = Article(f"article-{i}", f"Article {i}", (("Main", text),))
        (passage,) = split_paragraphs(article)
        store.put_passage(passage)
        for question in questions:
            index.insert(
                IndexEntry(
                    question_text=question,
                    embedding=embed_text(question, backend),
                    content_hash=passage.content_hash,
                    source_kind=SourceKind.PASSAGE,
                )
            )

    for (qid, pid, lines, media_url), questions in triple_units:
        key = triple_key(qid, pid)
        store.put_triple_group(
            StoredTripleGroup(
                triple_key=key, qid=qid, pid=pid, lines=tuple(lines), media_url=media_url
            )
        )
        for question in questions:
            index.insert(
                IndexEntry(
                    question_text=question,
                    embedding=embed_text(question, backend),
                    content_hash=key,
                    source_kind=SourceKind.TRIPLE,
                )
            )

    return RetrievalEngine(index, store, backend)


def load_fixture(name: str) -> dict:
    with open(FIXTURE_DIR / name, "r", encoding="utf-8") as fh:
        return json.load(fh)


class ScriptedBackend:
    """Generation stub: picks a canned response by substring match.

    ``script`` maps a text fragment (typically a unit's text) to the raw
    model output to return when that fragment appears in the prompt.
    """

    def __init__(self, script: dict[str, str], default: str | None = None):
        self.script = script
        self.default = default
        self.calls = 0

    def complete(self, prompt: str, max_tokens: int) -> str:
        self.calls += 1
        for fragment, output in self.script.items():
            if fragment in prompt:
                return output
        if self.default is not None:
            return self.default
        raise TransportError(f"no scripted output matches the prompt: {prompt[:80]!r}")


class FixtureSparqlClient:
    """Offline stand-in for SparqlClient backed by recorded JSON results."""

    def __init__(self, statements_by_qid: dict[str, dict], labels: dict[str, str]):
        self._statements = statements_by_qid
        self._labels = labels
        self.skipped_rows = 0

    def item_label(self, qid: str, language: str | None = None) -> str:
        return self._labels.get(qid, qid)

    def fetch_statements(self, qid: str, language: str | None = None):
        payload = self._statements.get(qid)
        if payload is None:
            raise TransportError(f"no recorded results for {qid}")
        records, skipped = parse_sparql_results(qid, self.item_label(qid), payload)
        self.skipped_rows += skipped
        return records


@pytest.fixture
def obama_article() -> Article:
    return Article(
        article_id="obama",
        title=fixture_data.OBAMA_TITLE,
        sections=((fixture_data.OBAMA_SECTION, fixture_data.OBAMA_RAW),),
    )


@pytest.fixture
def obama_passage(obama_article):
    passages = split_paragraphs(obama_article)
    assert len(passages) == 1
    return passages[0]


@pytest.fixture
def obama_generator() -> QuestionGenerator:
    # Keyed on the single-line normalized text so the match hits the filled
    # input slot, not the few-shot example inside the template.
    backend = ScriptedBackend(
        {fixture_data.OBAMA_NORMALIZED: fixture_data.OBAMA_QUESTIONS_BULLETED},
    )
    return QuestionGenerator(backend, sleep=lambda _: None)


@pytest.fixture
def india_sparql() -> FixtureSparqlClient:
    return FixtureSparqlClient(
        statements_by_qid={"Q668": load_fixture("india_statements.json")},
        labels={"Q668": "India"},
    )
