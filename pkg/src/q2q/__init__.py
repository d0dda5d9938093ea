"""Question-to-question retrieval over Wikipedia-style text and Wikidata.

Instead of embedding passages, the engine indexes LLM-generated questions
for every content unit and answers a query by argmax cosine similarity over
those questions, returning the exact stored passage or fact group the best
question points at. No text is ever generated at query time.
"""

__version__ = "0.1.0"

from .corpus import (
    Article,
    ContentHash,
    Passage,
    content_hash,
    normalize_text,
    split_paragraphs,
    split_sentences,
)
from .embed import (
    HashingEmbedder,
    HttpEmbeddingClient,
    cosine_similarity,
    embed_text,
    normalize,
    test_embed,
)
from .index import IndexEntry, QuestionIndex, SearchHit, SourceKind, plan_reindex
from .qgen import (
    HttpGenerationClient,
    PromptLibrary,
    QuestionGenerator,
    QuestionSet,
    parse_question_list,
)
from .pipeline import IngestionPipeline, IngestReport
from .retrieval import (
    RetrievalEngine,
    RetrievalResult,
    jaccard_similarity,
    refine_to_sentence,
)
from .store import ContentStore, Locator, StoredPassage, StoredTripleGroup
from .wikidata import (
    Rank,
    SparqlClient,
    StatementRecord,
    TextTriple,
    TripleGroup,
    TypedValue,
    ValueKind,
    format_time_value,
    group_statements,
    render_sparql,
    textualize,
    triple_key,
)

__all__ = [
    "Article",
    "ContentHash",
    "ContentStore",
    "HashingEmbedder",
    "HttpEmbeddingClient",
    "HttpGenerationClient",
    "IndexEntry",
    "IngestReport",
    "IngestionPipeline",
    "Locator",
    "Passage",
    "PromptLibrary",
    "QuestionGenerator",
    "QuestionIndex",
    "QuestionSet",
    "Rank",
    "RetrievalEngine",
    "RetrievalResult",
    "SearchHit",
    "SourceKind",
    "SparqlClient",
    "StatementRecord",
    "StoredPassage",
    "StoredTripleGroup",
    "TextTriple",
    "TripleGroup",
    "TypedValue",
    "ValueKind",
    "content_hash",
    "cosine_similarity",
    "embed_text",
    "format_time_value",
    "group_statements",
    "jaccard_similarity",
    "normalize",
    "normalize_text",
    "parse_question_list",
    "plan_reindex",
    "refine_to_sentence",
    "render_sparql",
    "split_paragraphs",
    "split_sentences",
    "test_embed",
    "textualize",
    "triple_key",
]
