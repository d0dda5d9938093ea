"""Splitting an article into passages and addressing them by content hash.

Every paragraph becomes one retrieval unit identified by the SHA-256 of its
normalized text, so the same text always resolves to the same unit and a
store lookup by hash returns the exact original content.
"""

from q2q import Article, ContentStore, content_hash, normalize_text, split_paragraphs

raw_article = Article(
    article_id="nile",
    title="Nile",
    sections=(
        (
            "Course",
            """The Nile is a major north-flowing river in northeastern Africa.[1]
It is about 6,650 km long and drains into the Mediterranean Sea.

The river has two major tributaries: the White Nile and the Blue Nile.[2]
The White Nile is traditionally considered the headwaters stream.""",
        ),
    ),
)

print("== normalization strips reference markers and collapses whitespace ==")
print(repr(normalize_text("It is about 6,650 km long.[1]\n  Second   line.")))

print("\n== paragraph splitting ==")
passages = split_paragraphs(raw_article)
for p in passages:
    print(f"[{p.paragraph_index}] {p.content_hash.hex[:16]}…  {p.text[:60]}…")
    for start, end in p.sentences:
        print(f"      sentence bytes {start:>3}-{end:<3}")

print("\n== content addressing ==")
store = ContentStore()
for p in passages:
    store.put_passage(p)

lookup = content_hash(passages[0].text)
record = store.get_passage(lookup)
print(f"lookup {lookup.hex[:16]}… ->")
print(f"  text: {record.text[:70]}…")
print(f"  located at: {record.primary_locator}")

print("\n== identical text shares one hash ==")
print(content_hash("same words") == content_hash("same words"))
