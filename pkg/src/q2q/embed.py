"""Embedding backends and vector math.

Every backend maps text to a unit-normalized float32 vector of a fixed
dimension, so cosine similarity reduces to a dot product everywhere else in
the package. Two backends ship: an HTTP client for a real embedding service
and a deterministic hashing embedder that needs no network or model files.
"""

from __future__ import annotations

import hashlib
import re
from typing import Protocol, Sequence

import numpy as np
import requests

from .errors import ConfigurationError, TransportError

NORM_TOLERANCE = 1e-4

_TOKEN = re.compile(r"[a-z0-9]+")

# Feature-hash keys; frozen so vectors are reproducible across platforms.
_TOKEN_SEED = b"q2q/token/v1"
_TRIGRAM_SEED = b"q2q/3gram/v1"
_FALLBACK_SEED = b"q2q/fallback/v1"

# Weight of character-trigram features relative to whole-token features.
# Trigrams let morphological variants (india/indian) overlap without letting
# shared fragments dominate exact token matches.
_TRIGRAM_WEIGHT = 0.35


class EmbeddingBackend(Protocol):
    """Anything that can embed batches of text at a fixed dimension."""

    @property
    def dim(self) -> int: ...

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray: ...


def normalize(vector: np.ndarray) -> np.ndarray:
    """Scale to unit L2 norm, as float32. Idempotent."""
    v = np.asarray(vector, dtype=np.float32)
    norm = float(np.linalg.norm(v.astype(np.float64)))
    if norm == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return (v / np.float32(norm)).astype(np.float32)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """dot(a, b) / (|a||b|), computed in float64."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    denom = float(np.linalg.norm(a) * np.linalg.norm(b))
    if denom == 0.0:
        raise ValueError("cosine similarity undefined for zero vectors")
    return float(np.dot(a, b) / denom)


def embed_text(text: str, backend: EmbeddingBackend) -> np.ndarray:
    """Embed one text; result is unit-normalized float32 of backend.dim."""
    if not text:
        raise ValueError("cannot embed empty text")
    vector = backend.embed_batch([text])[0]
    if vector.shape != (backend.dim,):
        raise ConfigurationError(
            f"backend returned dimension {vector.shape}, expected ({backend.dim},)"
        )
    return normalize(vector)


def _bucket(data: bytes, seed: bytes, dim: int) -> int:
    digest = hashlib.blake2b(data, digest_size=8, key=seed).digest()
    return int.from_bytes(digest, "little") % dim


class HashingEmbedder:
    """Deterministic offline embedder for tests and demos.

    Lowercases, hashes each alphanumeric token into one of ``dim`` buckets,
    and smooths with character trigrams at a lower weight. Same text, same
    vector, on every platform.
    """

    def __init__(self, dim: int = 384):
        if dim < 8:
            raise ValueError("hashing embedder needs dim >= 8")
        self._dim = dim

    @property
    def dim(self) -> int:
        return self._dim

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        return np.stack([self._embed_one(t) for t in texts])

    def _embed_one(self, text: str) -> np.ndarray:
        acc = np.zeros(self._dim, dtype=np.float64)
        tokens = _TOKEN.findall(text.lower())
        for token in tokens:
            data = token.encode("utf-8")
            acc[_bucket(data, _TOKEN_SEED, self._dim)] += 1.0
            padded = f"^{token}$"
            for i in range(len(padded) - 2):
                gram = padded[i : i + 3].encode("utf-8")
                acc[_bucket(gram, _TRIGRAM_SEED, self._dim)] += _TRIGRAM_WEIGHT
        if not tokens:
            # Non-empty text with no alphanumeric tokens still embeds.
            acc[_bucket(text.encode("utf-8"), _FALLBACK_SEED, self._dim)] = 1.0
        return normalize(acc)


def test_embed(text: str, dim: int = 384) -> np.ndarray:
    """One-shot deterministic embedding (see HashingEmbedder)."""
    return embed_text(text, HashingEmbedder(dim))


class HttpEmbeddingClient:
    """Client for an embedding service.

    Contract: ``POST {base_url}`` with ``{"texts": [...]}`` returns
    ``{"vectors": [[...], ...]}``; ``GET {base_url}/info`` reports
    ``{"dim": d}``. The server-reported dimension must match the configured
    one; the mismatch is a startup error, not a per-call one.
    """

    def __init__(
        self,
        base_url: str,
        expected_dim: int | None = None,
        batch_size: int = 64,
        timeout: float = 30.0,
        session: requests.Session | None = None,
    ):
        self._url = base_url.rstrip("/")
        self._batch_size = batch_size
        self._timeout = timeout
        self._session = session or requests.Session()
        reported = self._fetch_dim()
        if expected_dim is not None and reported != expected_dim:
            raise ConfigurationError(
                f"embedding endpoint reports dim {reported}, configured dim is {expected_dim}"
            )
        self._dim = reported

    @property
    def dim(self) -> int:
        return self._dim

    def _fetch_dim(self) -> int:
        try:
            resp = self._session.get(f"{self._url}/info", timeout=self._timeout)
            resp.raise_for_status()
            return int(resp.json()["dim"])
        except (requests.RequestException, KeyError, ValueError) as exc:
            raise ConfigurationError(
                f"cannot read dimension from embedding endpoint {self._url}/info: {exc}"
            ) from exc

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        vectors: list[np.ndarray] = []
        for start in range(0, len(texts), self._batch_size):
            chunk = list(texts[start : start + self._batch_size])
            try:
                resp = self._session.post(
                    self._url, json={"texts": chunk}, timeout=self._timeout
                )
                resp.raise_for_status()
                payload = resp.json()["vectors"]
            except (requests.RequestException, KeyError, ValueError) as exc:
                raise TransportError(f"embedding request failed: {exc}") from exc
            batch = np.asarray(payload, dtype=np.float32)
            if batch.ndim != 2 or batch.shape != (len(chunk), self._dim):
                raise TransportError(
                    f"embedding endpoint returned shape {batch.shape}, "
                    f"expected ({len(chunk)}, {self._dim})"
                )
            vectors.extend(normalize(row) for row in batch)
        return np.stack(vectors) if vectors else np.zeros((0, self._dim), dtype=np.float32)
