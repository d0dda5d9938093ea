"""Vector index over generated questions.

Each entry ties one question's embedding to the content hash of the unit it
was generated from. Search is exact brute-force cosine (vectors are stored
unit-normalized, so a dot product), with a total deterministic tie-break.

Persistence is a bit-exact binary format:

    magic "Q2QX" | version 0x01 | u32 LE dim | u64 LE entry count |
    per entry: 32-byte hash, 1-byte source kind (0=passage, 1=triple),
               u16 LE question byte length, UTF-8 question bytes,
               dim x float32 LE |
    u32 LE CRC-32 of all preceding bytes

Entries are written in a canonical order (hash, kind, question), so two
indexes with the same logical content serialize to identical bytes.
"""

from __future__ import annotations

import struct
import threading
import zlib
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .corpus import HASH_SIZE, ContentHash
from .errors import EmptyIndexError, IndexFormatError

MAGIC = b"Q2QX"
FORMAT_VERSION = 1


class SourceKind(Enum):
    PASSAGE = 0
    TRIPLE = 1


@dataclass(frozen=True)
class IndexEntry:
    question_text: str
    embedding: np.ndarray
    content_hash: ContentHash
    source_kind: SourceKind

    def __post_init__(self):
        if not self.question_text:
            raise ValueError("question_text must be non-empty")
        vector = np.asarray(self.embedding, dtype=np.float32)
        vector.setflags(write=False)
        object.__setattr__(self, "embedding", vector)

    def _sort_key(self) -> tuple[bytes, int, bytes]:
        return (
            self.content_hash.digest,
            self.source_kind.value,
            self.question_text.encode("utf-8"),
        )


@dataclass(frozen=True)
class SearchHit:
    entry: IndexEntry
    score: float


class QuestionIndex:
    """Exact top-k cosine search over question embeddings.

    Concurrency: mutations are serialized by an internal lock; searches read
    a consistent snapshot of the score matrix.
    """

    def __init__(self, dim: int):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self._dim = dim
        self._entries: dict[int, IndexEntry] = {}
        self._by_pair: dict[tuple[str, bytes], int] = {}
        self._by_hash: dict[bytes, set[int]] = {}
        self._next_id = 0
        self._lock = threading.RLock()
        self._snapshot: tuple[np.ndarray, list[int]] | None = None

    @property
    def dim(self) -> int:
        return self._dim

    def __len__(self) -> int:
        return len(self._entries)

    def count(self) -> int:
        return len(self._entries)

    def hashes(self) -> set[ContentHash]:
        return {ContentHash(digest) for digest in self._by_hash}

    def has_hash(self, content_hash: ContentHash) -> bool:
        return content_hash.digest in self._by_hash

    def entries(self) -> list[IndexEntry]:
        """All entries in canonical (hash, kind, question) order."""
        return sorted(self._entries.values(), key=IndexEntry._sort_key)

    def insert(self, entry: IndexEntry) -> int:
        """Add an entry; duplicate (question, hash) pairs are a no-op.

        Returns the entry id (the existing one for duplicates).
        """
        if entry.embedding.shape != (self._dim,):
            raise ValueError(
                f"embedding has shape {entry.embedding.shape}, index dim is {self._dim}"
            )
        pair = (entry.question_text, entry.content_hash.digest)
        with self._lock:
            existing = self._by_pair.get(pair)
            if existing is not None:
                return existing
            entry_id = self._next_id
            self._next_id += 1
            self._entries[entry_id] = entry
            self._by_pair[pair] = entry_id
            self._by_hash.setdefault(entry.content_hash.digest, set()).add(entry_id)
            self._snapshot = None
            return entry_id

    def delete_by_hash(self, content_hash: ContentHash) -> int:
        """Remove every entry mapped to the hash; returns how many."""
        with self._lock:
            ids = self._by_hash.pop(content_hash.digest, set())
            for entry_id in ids:
                entry = self._entries.pop(entry_id)
                del self._by_pair[(entry.question_text, entry.content_hash.digest)]
            if ids:
                self._snapshot = None
            return len(ids)

    def _matrix(self) -> tuple[np.ndarray, list[int]]:
        with self._lock:
            if self._snapshot is None:
                ids = list(self._entries)
                if ids:
                    matrix = np.stack(
                        [self._entries[i].embedding for i in ids]
                    ).astype(np.float64)
                else:
                    matrix = np.zeros((0, self._dim), dtype=np.float64)
                self._snapshot = (matrix, ids)
            return self._snapshot

    def search_top_k(self, query: np.ndarray, k: int) -> list[SearchHit]:
        """Exactly min(k, count) hits by descending cosine score.

        Equal scores order by question text, then content hash, so results
        are reproducible.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        query = np.asarray(query, dtype=np.float64)
        if query.shape != (self._dim,):
            raise ValueError(f"query has shape {query.shape}, index dim is {self._dim}")
        matrix, ids = self._matrix()
        if not ids:
            raise EmptyIndexError("search over an empty index")

        scores = matrix @ query
        order = np.argsort(-scores, kind="stable")
        limit = min(k, len(ids))

        hits: list[SearchHit] = []
        pos = 0
        while len(hits) < limit:
            # Collect the full run of equal scores before tie-breaking.
            run_start = pos
            run_score = scores[order[pos]]
            while pos < len(ids) and scores[order[pos]] == run_score:
                pos += 1
            run = sorted(
                (self._entries[ids[order[i]]] for i in range(run_start, pos)),
                key=IndexEntry._sort_key,
            )
            for entry in run:
                hits.append(SearchHit(entry=entry, score=float(run_score)))
                if len(hits) == limit:
                    break
        return hits

    # -- persistence ---------------------------------------------------------

    def save(self, path) -> int:
        """Write the canonical binary form; returns the byte count."""
        chunks: list[bytes] = [
            MAGIC,
            bytes([FORMAT_VERSION]),
            struct.pack("<I", self._dim),
            struct.pack("<Q", len(self._entries)),
        ]
        for entry in self.entries():
            question = entry.question_text.encode("utf-8")
            if len(question) > 0xFFFF:
                raise ValueError("question exceeds 65535 UTF-8 bytes")
            chunks.append(entry.content_hash.digest)
            chunks.append(bytes([entry.source_kind.value]))
            chunks.append(struct.pack("<H", len(question)))
            chunks.append(question)
            chunks.append(entry.embedding.astype("<f4").tobytes())
        body = b"".join(chunks)
        blob = body + struct.pack("<I", zlib.crc32(body))
        with open(path, "wb") as fh:
            fh.write(blob)
        return len(blob)

    @classmethod
    def load(cls, path) -> "QuestionIndex":
        with open(path, "rb") as fh:
            blob = fh.read()

        def need(offset: int, size: int, what: str) -> bytes:
            if offset + size > len(blob):
                raise IndexFormatError(f"truncated index file while reading {what}", offset)
            return blob[offset : offset + size]

        if need(0, 4, "magic") != MAGIC:
            raise IndexFormatError(f"bad magic {blob[:4]!r}, expected {MAGIC!r}", 0)
        version = need(4, 1, "version")[0]
        if version != FORMAT_VERSION:
            raise IndexFormatError(f"unsupported version {version}", 4)
        dim = struct.unpack("<I", need(5, 4, "dim"))[0]
        if dim == 0:
            raise IndexFormatError("dim must be positive", 5)
        count = struct.unpack("<Q", need(9, 8, "entry count"))[0]

        index = cls(dim)
        offset = 17
        vector_bytes = 4 * dim
        for n in range(count):
            digest = need(offset, HASH_SIZE, f"entry {n} hash")
            offset += HASH_SIZE
            kind_byte = need(offset, 1, f"entry {n} source kind")[0]
            try:
                kind = SourceKind(kind_byte)
            except ValueError:
                raise IndexFormatError(
                    f"entry {n} has unknown source kind {kind_byte}", offset
                ) from None
            offset += 1
            qlen = struct.unpack("<H", need(offset, 2, f"entry {n} question length"))[0]
            offset += 2
            raw_question = need(offset, qlen, f"entry {n} question text")
            try:
                question = raw_question.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise IndexFormatError(f"entry {n} question is not UTF-8: {exc}", offset) from exc
            offset += qlen
            vector = np.frombuffer(
                need(offset, vector_bytes, f"entry {n} vector"), dtype="<f4"
            ).astype(np.float32)
            offset += vector_bytes
            index.insert(
                IndexEntry(
                    question_text=question,
                    embedding=vector,
                    content_hash=ContentHash(digest),
                    source_kind=kind,
                )
            )

        stored_crc = struct.unpack("<I", need(offset, 4, "checksum"))[0]
        actual_crc = zlib.crc32(blob[:offset])
        if stored_crc != actual_crc:
            raise IndexFormatError(
                f"checksum mismatch: stored {stored_crc:#010x}, computed {actual_crc:#010x}",
                offset,
            )
        if offset + 4 != len(blob):
            raise IndexFormatError("trailing bytes after checksum", offset + 4)
        return index


def plan_reindex(
    old_hashes: set[ContentHash], new_hashes: set[ContentHash]
) -> tuple[set[ContentHash], set[ContentHash]]:
    """Hash-diff plan for selective reindexing.

    Returns (to_delete, to_add): hashes only in the old snapshot are deleted,
    hashes only in the new one are added, intersecting hashes are untouched.
    """
    return old_hashes - new_hashes, new_hashes - old_hashes
