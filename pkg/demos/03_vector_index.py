"""The question index: exact cosine search, binary persistence, hash diffs.

Vectors are stored unit-normalized so search is a dot product; results are
exact (brute force) with a deterministic tie-break. The on-disk format is
bit-exact: the same logical content always serializes to the same bytes.
"""

import tempfile
from pathlib import Path

from q2q import (
    HashingEmbedder,
    IndexEntry,
    QuestionIndex,
    SourceKind,
    content_hash,
    embed_text,
    plan_reindex,
)

backend = HashingEmbedder(dim=384)
index = QuestionIndex(backend.dim)

catalogue = {
    "How long is the Nile?": "nile course text",
    "Where does the Nile drain?": "nile course text",
    "What is the capital of India?": "india capital fact",
    "Who composed the Ninth Symphony?": "beethoven text",
}
for question, source in catalogue.items():
    index.insert(
        IndexEntry(
            question_text=question,
            embedding=embed_text(question, backend),
            content_hash=content_hash(source),
            source_kind=SourceKind.PASSAGE,
        )
    )

print(f"indexed {index.count()} questions at dim {index.dim}")

print("\n== top-2 for 'length of the Nile' ==")
for hit in index.search_top_k(embed_text("length of the Nile", backend), 2):
    print(f"  {hit.score:.3f}  {hit.entry.question_text}")

print("\n== persistence is bit-exact ==")
with tempfile.TemporaryDirectory() as tmp:
    first, second = Path(tmp) / "a.q2q", Path(tmp) / "b.q2q"
    print(f"wrote {index.save(first)} bytes")
    index.save(second)
    print("identical bytes on re-save:", first.read_bytes() == second.read_bytes())
    restored = QuestionIndex.load(first)
    print("restored entries:", restored.count())

print("\n== incremental reindex plan ==")
old = {content_hash("nile course text"), content_hash("india capital fact")}
new = {content_hash("nile course text REVISED"), content_hash("india capital fact")}
to_delete, to_add = plan_reindex(old, new)
print("delete:", [h.hex[:12] for h in to_delete])
print("add:   ", [h.hex[:12] for h in to_add])

removed = index.delete_by_hash(content_hash("nile course text"))
print(f"deleted {removed} entries for the revised passage; {index.count()} remain")
