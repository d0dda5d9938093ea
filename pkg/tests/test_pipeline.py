import json

import pytest

from q2q.corpus import Article, content_hash, split_paragraphs
from q2q.embed import HashingEmbedder
from q2q.index import QuestionIndex
from q2q.pipeline import IngestionPipeline
from q2q.qgen import QuestionGenerator
from q2q.store import ContentStore

import fixture_data
from conftest import FixtureSparqlClient, ScriptedBackend, load_fixture

DIM = 64

INDIA_SCRIPT = {
    "India: Inception: 15 August 1947": (
        "- When was India founded?\n- When did India become independent?"
    ),
    "India: Prime Minister: Narendra Modi (2014-current)": (
        "- Who is the current prime minister of India?\n- Who leads the Indian government?"
    ),
    "India: Life expectancy: 62 (point in time: 1999)": (
        "- What was the life expectancy in India in 1999?"
    ),
    "India: Flag:": "- What does the flag of India look like?",
    "India: Capital:": (
        "- What is the capital of India?\n- Where is the capital of India located?"
    ),
}


def make_pipeline(script, parallelism=1):
    store = ContentStore()
    index = QuestionIndex(DIM)
    generator = QuestionGenerator(ScriptedBackend(script), sleep=lambda _: None)
    backend = HashingEmbedder(DIM)
    pipeline = IngestionPipeline(store, index, generator, backend, parallelism=parallelism)
    return pipeline, store, index


def obama_article(text=fixture_data.OBAMA_RAW):
    return Article("obama", fixture_data.OBAMA_TITLE, ((fixture_data.OBAMA_SECTION, text),))


class TestArticleIngestion:
    def test_initial_ingest_indexes_all_questions(self):
        pipeline, store, index = make_pipeline(
            {fixture_data.OBAMA_NORMALIZED: fixture_data.OBAMA_QUESTIONS_BULLETED}
        )
        report = pipeline.ingest_article(obama_article())
        assert report.units == 1
        assert report.questions_indexed == 17
        assert report.failed_units == []
        assert index.count() == 17
        assert store.passage_count() == 1

    def test_reingest_identical_is_noop(self):
        pipeline, _, index = make_pipeline(
            {fixture_data.OBAMA_NORMALIZED: fixture_data.OBAMA_QUESTIONS_BULLETED}
        )
        pipeline.ingest_article(obama_article())
        report = pipeline.ingest_article(obama_article())
        assert report.questions_indexed == 0
        assert report.deleted_entries == 0
        assert index.count() == 17

    def test_mutated_passage_swaps_entries(self):
        script = {
            "one stable fact": "- What is the stable fact?",
            "original second passage": "- What did the original say?",
            "rewritten second passage": "- What does the rewrite say?",
        }
        pipeline, store, index = make_pipeline(script)
        original = Article(
            "a1", "T", (("S", "one stable fact\n\noriginal second passage"),)
        )
        pipeline.ingest_article(original)
        assert index.count() == 2

        mutated = Article(
            "a1", "T", (("S", "one stable fact\n\nrewritten second passage"),)
        )
        report = pipeline.ingest_article(mutated)
        assert report.deleted_entries == 1
        assert report.questions_indexed == 1
        assert index.has_hash(content_hash("one stable fact"))
        assert not index.has_hash(content_hash("original second passage"))
        assert store.get_passage(content_hash("original second passage")) is None

    def test_duplicate_content_across_articles_not_regenerated(self):
        script = {"the shared paragraph": "- What does the shared paragraph say?"}
        pipeline, store, index = make_pipeline(script)
        pipeline.ingest_article(Article("a1", "T1", (("S", "the shared paragraph"),)))
        generator_calls = pipeline._generator._backend.calls
        report = pipeline.ingest_article(Article("a2", "T2", (("S", "the shared paragraph"),)))
        assert pipeline._generator._backend.calls == generator_calls
        assert report.questions_indexed == 0
        record = store.get_passage(content_hash("the shared paragraph"))
        assert {loc.article_id for loc in record.locators} == {"a1", "a2"}

    def test_failed_unit_recorded_and_pipeline_continues(self):
        script = {"good passage content": "- What is good?"}
        pipeline, store, index = make_pipeline(script)
        # The second passage matches nothing in the script -> TransportError.
        article = Article("a1", "T", (("S", "good passage content\n\nbad passage content"),))
        report = pipeline.ingest_article(article)
        assert report.units == 2
        assert report.questions_indexed == 1
        assert len(report.failed_units) == 1
        assert report.failed_units[0].hash_hex == content_hash("bad passage content").hex
        assert report.failed_units[0].kind == "passage"
        # Failed units leave no index entries.
        assert not index.has_hash(content_hash("bad passage content"))

    def test_empty_generation_output_is_failed_unit(self):
        pipeline, _, index = make_pipeline({}, parallelism=1)
        pipeline._generator = QuestionGenerator(
            ScriptedBackend({}, default=""), sleep=lambda _: None
        )
        report = pipeline.ingest_article(obama_article())
        assert report.questions_indexed == 0
        assert len(report.failed_units) == 1
        assert index.count() == 0

    def test_no_dangling_hashes_after_ingest(self):
        pipeline, store, index = make_pipeline(
            {fixture_data.OBAMA_NORMALIZED: fixture_data.OBAMA_QUESTIONS_BULLETED}
        )
        pipeline.ingest_article(obama_article())
        for h in index.hashes():
            assert store.has_hash(h)

    def test_parallel_generation_matches_serial(self):
        script = {f"passage number {i}": f"- What is passage {i} about?" for i in range(8)}
        text = "\n\n".join(f"passage number {i}" for i in range(8))
        serial, _, serial_index = make_pipeline(script, parallelism=1)
        parallel, _, parallel_index = make_pipeline(script, parallelism=4)
        serial.ingest_article(Article("a1", "T", (("S", text),)))
        parallel.ingest_article(Article("a1", "T", (("S", text),)))
        assert serial_index.count() == parallel_index.count() == 8
        serial_qs = [e.question_text for e in serial_index.entries()]
        parallel_qs = [e.question_text for e in parallel_index.entries()]
        assert serial_qs == parallel_qs


class TestWikidataIngestion:
    def test_one_unit_per_property_group(self, india_sparql):
        pipeline, store, index = make_pipeline(INDIA_SCRIPT)
        report = pipeline.ingest_wikidata("Q668", india_sparql)
        assert report.units == 5  # property groups in the recorded fixture
        assert report.questions_indexed == 8
        assert store.triple_count() == 5
        assert report.failed_units == []

    def test_reingest_is_noop(self, india_sparql):
        pipeline, _, index = make_pipeline(INDIA_SCRIPT)
        pipeline.ingest_wikidata("Q668", india_sparql)
        before = index.count()
        report = pipeline.ingest_wikidata("Q668", india_sparql)
        assert report.questions_indexed == 0
        assert report.deleted_entries == 0
        assert index.count() == before

    def test_changed_value_regenerates_same_key(self):
        payload = load_fixture("india_statements.json")
        pipeline, store, index = make_pipeline(INDIA_SCRIPT)
        client = FixtureSparqlClient({"Q668": payload}, {"Q668": "India"})
        pipeline.ingest_wikidata("Q668", client)

        mutated = json.loads(json.dumps(payload))
        for row in mutated["results"]["bindings"]:
            if row["statementValueLabel"]["value"] == "New Delhi":
                row["statementValueLabel"]["value"] = "Delhi City"
        client_v2 = FixtureSparqlClient({"Q668": mutated}, {"Q668": "India"})
        report = pipeline.ingest_wikidata("Q668", client_v2)
        assert report.deleted_entries == 2  # the stale capital questions
        assert report.questions_indexed == 2
        key_groups = [g for g in [store.get_triple_group(h) for h in index.hashes()] if g]
        capital_lines = [g.text for g in key_groups if g.pid == "P36"]
        assert capital_lines == ["India: Capital: Delhi City"]

    def test_no_dangling_hashes(self, india_sparql):
        pipeline, store, index = make_pipeline(INDIA_SCRIPT)
        pipeline.ingest_wikidata("Q668", india_sparql)
        for h in index.hashes():
            assert store.has_hash(h)
