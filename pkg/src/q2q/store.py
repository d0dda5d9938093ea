"""Single-file content-addressed store mapping hashes to source content.

The store is the lookup side of retrieval: the index maps question
embeddings to content hashes, and the store resolves a hash back to the
exact passage text (with its article locators) or Wikidata triple group.

Runtime state is an in-memory map; persistence is one JSON file written
atomically. Identical passage text occurring in several places is stored
once, with every (article, paragraph) locator attached.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, replace

from .corpus import ContentHash, Passage
from .errors import StoreLoadError

_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Locator:
    """Where a passage occurs: one (article, section, paragraph) position."""

    article_id: str
    article_title: str
    section_title: str
    paragraph_index: int


@dataclass(frozen=True)
class StoredPassage:
    content_hash: ContentHash
    text: str
    sentences: tuple[tuple[int, int], ...]
    locators: tuple[Locator, ...]

    @property
    def primary_locator(self) -> Locator:
        return self.locators[0]


@dataclass(frozen=True)
class StoredTripleGroup:
    """All rendered statement lines sharing one (QID, PID) key."""

    triple_key: ContentHash
    qid: str
    pid: str
    lines: tuple[str, ...]
    media_url: str | None = None

    @property
    def text(self) -> str:
        return "\n".join(self.lines)


class ContentStore:
    """Hash-to-content map for passages and triple groups.

    Thread model: any number of concurrent readers; mutations are serialized
    by an internal lock. Stored values are immutable.
    """

    def __init__(self):
        self._passages: dict[bytes, StoredPassage] = {}
        self._triples: dict[bytes, StoredTripleGroup] = {}
        self._write_lock = threading.RLock()

    # -- passages -----------------------------------------------------------

    def put_passage(self, passage: Passage) -> bool:
        """Store a passage; returns True if the content was new.

        Re-putting identical content is idempotent; a new locator for
        existing content is merged into the stored record.
        """
        locator = Locator(
            article_id=passage.article_id,
            article_title=passage.article_title,
            section_title=passage.section_title,
            paragraph_index=passage.paragraph_index,
        )
        key = passage.content_hash.digest
        with self._write_lock:
            existing = self._passages.get(key)
            if existing is None:
                self._passages[key] = StoredPassage(
                    content_hash=passage.content_hash,
                    text=passage.text,
                    sentences=passage.sentences,
                    locators=(locator,),
                )
                return True
            if locator not in existing.locators:
                self._passages[key] = replace(
                    existing, locators=existing.locators + (locator,)
                )
            return False

    def get_passage(self, content_hash: ContentHash) -> StoredPassage | None:
        return self._passages.get(content_hash.digest)

    def article_hashes(self, article_id: str) -> set[ContentHash]:
        """Hashes of all passages currently located in the given article."""
        return {
            record.content_hash
            for record in self._passages.values()
            if any(loc.article_id == article_id for loc in record.locators)
        }

    def remove_article_locators(self, article_id: str, content_hash: ContentHash) -> bool:
        """Drop the article's locators from one record.

        Returns True when the record lost its last locator and was removed
        entirely (its index entries should then be deleted too).
        """
        key = content_hash.digest
        with self._write_lock:
            record = self._passages.get(key)
            if record is None:
                return False
            remaining = tuple(loc for loc in record.locators if loc.article_id != article_id)
            if remaining == record.locators:
                return False
            if remaining:
                self._passages[key] = replace(record, locators=remaining)
                return False
            del self._passages[key]
            return True

    # -- triple groups ------------------------------------------------------

    def put_triple_group(self, group: StoredTripleGroup) -> bool:
        """Store or replace a triple group; returns True if content changed."""
        key = group.triple_key.digest
        with self._write_lock:
            if self._triples.get(key) == group:
                return False
            self._triples[key] = group
            return True

    def get_triple_group(self, triple_key: ContentHash) -> StoredTripleGroup | None:
        return self._triples.get(triple_key.digest)

    def delete_triple_group(self, triple_key: ContentHash) -> bool:
        with self._write_lock:
            return self._triples.pop(triple_key.digest, None) is not None

    def triple_keys_for_item(self, qid: str) -> set[ContentHash]:
        return {
            group.triple_key for group in self._triples.values() if group.qid == qid
        }

    # -- shared -------------------------------------------------------------

    def passage_count(self) -> int:
        return len(self._passages)

    def triple_count(self) -> int:
        return len(self._triples)

    def has_hash(self, content_hash: ContentHash) -> bool:
        key = content_hash.digest
        return key in self._passages or key in self._triples

    # -- persistence --------------------------------------------------------

    def save(self, path: str | os.PathLike) -> None:
        payload = {
            "version": _FORMAT_VERSION,
            "passages": {
                record.content_hash.hex: {
                    "text": record.text,
                    "sentences": [list(span) for span in record.sentences],
                    "locators": [
                        {
                            "article_id": loc.article_id,
                            "article_title": loc.article_title,
                            "section_title": loc.section_title,
                            "paragraph_index": loc.paragraph_index,
                        }
                        for loc in record.locators
                    ],
                }
                for record in self._passages.values()
            },
            "triples": {
                group.triple_key.hex: {
                    "qid": group.qid,
                    "pid": group.pid,
                    "lines": list(group.lines),
                    "media_url": group.media_url,
                }
                for group in self._triples.values()
            },
        }
        path = os.fspath(path)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=1)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ContentStore":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                payload = json.load(fh)
        except OSError as exc:
            raise StoreLoadError(f"cannot read store file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise StoreLoadError(f"store file {path} is not valid JSON: {exc}") from exc

        store = cls()
        try:
            if payload["version"] != _FORMAT_VERSION:
                raise StoreLoadError(
                    f"unsupported store version {payload['version']} in {path}"
                )
            for hex_digest, rec in payload["passages"].items():
                store._passages[bytes.fromhex(hex_digest)] = StoredPassage(
                    content_hash=ContentHash.from_hex(hex_digest),
                    text=rec["text"],
                    sentences=tuple((int(s), int(e)) for s, e in rec["sentences"]),
                    locators=tuple(
                        Locator(
                            article_id=loc["article_id"],
                            article_title=loc["article_title"],
                            section_title=loc["section_title"],
                            paragraph_index=int(loc["paragraph_index"]),
                        )
                        for loc in rec["locators"]
                    ),
                )
            for hex_digest, rec in payload["triples"].items():
                store._triples[bytes.fromhex(hex_digest)] = StoredTripleGroup(
                    triple_key=ContentHash.from_hex(hex_digest),
                    qid=rec["qid"],
                    pid=rec["pid"],
                    lines=tuple(rec["lines"]),
                    media_url=rec["media_url"],
                )
        except StoreLoadError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise StoreLoadError(f"store file {path} is malformed: {exc!r}") from exc
        return store
