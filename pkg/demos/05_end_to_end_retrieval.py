"""The full answer path over a small in-memory corpus.

Queries are embedded, matched against the generated-question index by
argmax cosine, and resolved back to the exact stored passage or fact line,
with a Jaccard-picked sentence when one clearly answers the query. Nothing
is generated at query time: every answer is stored text, byte for byte.
"""

from q2q import (
    Article,
    ContentStore,
    HashingEmbedder,
    IndexEntry,
    QuestionIndex,
    RetrievalEngine,
    SourceKind,
    StoredTripleGroup,
    embed_text,
    split_paragraphs,
    triple_key,
)

backend = HashingEmbedder(dim=384)
store = ContentStore()
index = QuestionIndex(backend.dim)

corpus = {
    (
        "The Nile is a major north-flowing river in northeastern Africa. "
        "It is about 6,650 km long. "
        "The river drains into the Mediterranean Sea."
    ): [
        "Which is the longest river in Africa?",
        "What is the total length of Nile river?",
        "Where does the Nile drain?",
    ],
    (
        "The Chernobyl disaster occurred in 1986 near Pripyat. "
        "Thirty-one people died as a direct result of the accident."
    ): [
        "How many people died in chernobyl disaster",
        "When did the Chernobyl disaster occur?",
    ],
}

for i, (text, questions) in enumerate(corpus.items()):
    article = Article(f"article-{i}", f"Article {i}", (("Main", text),))
    (passage,) = split_paragraphs(article)
    store.put_passage(passage)
    for q in questions:
        index.insert(
            IndexEntry(
                question_text=q,
                embedding=embed_text(q, backend),
                content_hash=passage.content_hash,
                source_kind=SourceKind.PASSAGE,
            )
        )

key = triple_key("Q668", "P36")
store.put_triple_group(
    StoredTripleGroup(triple_key=key, qid="Q668", pid="P36",
                      lines=("India: Capital: New Delhi",))
)
index.insert(
    IndexEntry(
        question_text="What is the capital of India?",
        embedding=embed_text("What is the capital of India?", backend),
        content_hash=key,
        source_kind=SourceKind.TRIPLE,
    )
)

engine = RetrievalEngine(index, store, backend)

for query in ("length of Nile", "How many people died in chernobyl", "India's capital city"):
    (top,) = engine.answer(query, 1)
    print(f"\nquery: {query!r}")
    print(f"  matched question: {top.matched_question!r}  (score {top.score:.3f})")
    if top.sentence_span:
        start, end = top.sentence_span
        sentence = top.text.encode("utf-8")[start:end].decode("utf-8")
        print(f"  sentence: {sentence!r}")
    print(f"  full unit: {top.text!r}")

print("\n== question-to-question vs question-to-passage, same content ==")
rows = engine.ablation_rows(["length of Nile", "How many people died in chernobyl"])
for query, q2q_score, q2p_score in rows:
    print(f"  {query!r}: matched-question {q2q_score:.3f} vs whole-passage {q2p_score:.3f}")
