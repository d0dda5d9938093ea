"""Ingestion pipeline: normalize, split, hash, generate, embed, insert.

Runs the full path from raw articles (or a Wikidata item) into the content
store and question index. Re-ingesting identical content is a no-op: the
hash diff (plan_reindex) decides which units actually need question
generation, so unchanged passages are never re-processed.

Generation failures are per-unit: the failed unit is recorded in the report
and the rest of the batch continues.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .corpus import Article, split_paragraphs
from .embed import EmbeddingBackend, embed_text
from .errors import MalformedOutputError, TransportError
from .index import IndexEntry, QuestionIndex, SourceKind, plan_reindex
from .qgen import QuestionGenerator, QuestionSet
from .store import ContentStore, StoredTripleGroup
from .wikidata import SparqlClient, TripleGroup, group_statements


@dataclass
class FailedUnit:
    hash_hex: str
    kind: str
    reason: str

    def as_dict(self) -> dict:
        return {"hash": self.hash_hex, "kind": self.kind, "reason": self.reason}


@dataclass
class IngestReport:
    units: int = 0
    questions_indexed: int = 0
    failed_units: list[FailedUnit] = field(default_factory=list)
    deleted_entries: int = 0

    def merge(self, other: "IngestReport") -> "IngestReport":
        self.units += other.units
        self.questions_indexed += other.questions_indexed
        self.failed_units.extend(other.failed_units)
        self.deleted_entries += other.deleted_entries
        return self

    def as_dict(self) -> dict:
        return {
            "units": self.units,
            "questions_indexed": self.questions_indexed,
            "failed_units": [f.as_dict() for f in self.failed_units],
        }


class IngestionPipeline:
    """Single-writer ingestion over a shared store and index."""

    def __init__(
        self,
        store: ContentStore,
        index: QuestionIndex,
        generator: QuestionGenerator,
        backend: EmbeddingBackend,
        parallelism: int = 1,
    ):
        if parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        self._store = store
        self._index = index
        self._generator = generator
        self._backend = backend
        self._parallelism = parallelism

    # -- articles -------------------------------------------------------------

    def ingest_article(self, article: Article) -> IngestReport:
        report = IngestReport()
        passages = split_paragraphs(article)
        report.units = len(passages)

        new_hashes = {p.content_hash for p in passages}
        old_hashes = self._store.article_hashes(article.article_id)
        to_delete, to_add = plan_reindex(old_hashes, new_hashes)

        # Refresh locators: drop every locator this article held, re-put the
        # new passages, then delete index entries only for content that no
        # longer exists anywhere.
        orphaned = {
            h for h in old_hashes if self._store.remove_article_locators(article.article_id, h)
        }
        for passage in passages:
            self._store.put_passage(passage)
        for content_hash in to_delete & orphaned:
            report.deleted_entries += self._index.delete_by_hash(content_hash)

        # Generate only for content new to the index; identical text already
        # indexed (even from another article) keeps its question entries.
        seen: set[bytes] = set()
        units = []
        for passage in passages:
            h = passage.content_hash
            if h in to_add and h.digest not in seen and not self._index.has_hash(h):
                seen.add(h.digest)
                units.append(passage)
        self._run_generation(units, report)
        return report

    def ingest_articles(self, articles) -> IngestReport:
        report = IngestReport()
        for article in articles:
            report.merge(self.ingest_article(article))
        return report

    # -- wikidata -------------------------------------------------------------

    def ingest_wikidata(
        self, qid: str, sparql: SparqlClient, language: str = "en"
    ) -> IngestReport:
        report = IngestReport()
        records = sparql.fetch_statements(qid, language)
        groups, _deprecated = group_statements(records)
        report.units = len(groups)

        new_keys = {g.triple_key for g in groups}
        old_keys = self._store.triple_keys_for_item(qid)
        to_delete, to_add = plan_reindex(old_keys, new_keys)

        for key in to_delete:
            self._store.delete_triple_group(key)
            report.deleted_entries += self._index.delete_by_hash(key)

        units: list[TripleGroup] = []
        for group in groups:
            stored = StoredTripleGroup(
                triple_key=group.triple_key,
                qid=group.qid,
                pid=group.pid,
                lines=tuple(t.text for t in group.triples),
                media_url=group.media_url,
            )
            changed = self._store.put_triple_group(stored)
            if group.triple_key in to_add:
                units.append(group)
            elif changed:
                # Same (QID, PID) key but different values: stale questions out.
                report.deleted_entries += self._index.delete_by_hash(group.triple_key)
                units.append(group)
        self._run_generation(units, report)
        return report

    # -- shared ---------------------------------------------------------------

    def _run_generation(self, units, report: IngestReport) -> None:
        if not units:
            return
        if self._parallelism > 1 and len(units) > 1:
            with ThreadPoolExecutor(max_workers=self._parallelism) as pool:
                outcomes = list(pool.map(self._generate_one, units))
        else:
            outcomes = [self._generate_one(u) for u in units]

        for unit, outcome in zip(units, outcomes):
            if isinstance(outcome, FailedUnit):
                report.failed_units.append(outcome)
                continue
            try:
                report.questions_indexed += self._index_question_set(outcome)
            except TransportError as exc:
                report.failed_units.append(
                    FailedUnit(outcome.source_hash.hex, outcome.source_kind.name.lower(), str(exc))
                )

    def _generate_one(self, unit) -> QuestionSet | FailedUnit:
        source_hash = unit.content_hash if hasattr(unit, "content_hash") else unit.triple_key
        kind = "passage" if hasattr(unit, "content_hash") else "triple"
        try:
            return self._generator.generate(unit)
        except (TransportError, MalformedOutputError) as exc:
            return FailedUnit(source_hash.hex, kind, str(exc))

    def _index_question_set(self, question_set: QuestionSet) -> int:
        vectors = [embed_text(q, self._backend) for q in question_set.questions]
        before = self._index.count()
        for question, vector in zip(question_set.questions, vectors):
            self._index.insert(
                IndexEntry(
                    question_text=question,
                    embedding=vector,
                    content_hash=question_set.source_hash,
                    source_kind=question_set.source_kind,
                )
            )
        return self._index.count() - before
