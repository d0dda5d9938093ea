"""Question generation: prompt assembly, endpoint calls, output parsing.

Prompts live in data files (``prompts/*.txt``) with ``{{slot}}``
placeholders, so the exact wording can be reviewed and diffed without
touching code. The generation endpoint is pluggable; anything with a
``complete(prompt, max_tokens) -> str`` method works.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Protocol

import requests

from .corpus import ContentHash, Passage
from .errors import ConfigurationError, MalformedOutputError, TransportError
from .index import SourceKind

# A question line starts with "-", "*", "•" or "N." / "N)" numbering.
_BULLET = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s*(.*\S)\s*$")

DEFAULT_MAX_QUESTIONS = 32


@dataclass(frozen=True)
class QuestionSet:
    """Questions generated for one content unit, keyed by its hash."""

    source_hash: ContentHash
    source_kind: SourceKind
    questions: tuple[str, ...]

    def __post_init__(self):
        if not self.questions:
            raise ValueError("a question set may not be empty")
        seen = set()
        for question in self.questions:
            if not question or not question.endswith("?"):
                raise ValueError(f"not an interrogative sentence: {question!r}")
            folded = question.casefold()
            if folded in seen:
                raise ValueError(f"duplicate question: {question!r}")
            seen.add(folded)


@dataclass(frozen=True)
class GenerationRequest:
    prompt: str
    max_questions: int = DEFAULT_MAX_QUESTIONS
    model_hint: str = ""

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if self.max_questions < 1:
            raise ValueError("max_questions must be positive")


class GenerationBackend(Protocol):
    def complete(self, prompt: str, max_tokens: int) -> str: ...


def parse_question_list(raw_output: str) -> list[str]:
    """Extract questions from a bulleted / numbered model response.

    Keeps lines that carry a bullet or numbering marker and end with "?",
    deduplicated case-insensitively in first-occurrence order. Raises
    MalformedOutputError when nothing survives.
    """
    questions: list[str] = []
    seen: set[str] = set()
    for line in raw_output.splitlines():
        match = _BULLET.match(line)
        if not match:
            continue
        candidate = match.group(1).strip()
        if not candidate.endswith("?"):
            continue
        folded = candidate.casefold()
        if folded in seen:
            continue
        seen.add(folded)
        questions.append(candidate)
    if not questions:
        raise MalformedOutputError(
            "no questions found in generation output", raw_output=raw_output
        )
    return questions


class PromptLibrary:
    """Loads and fills the two prompt templates.

    Missing template files are a configuration error raised here, at
    startup, never per call.
    """

    PASSAGE_FILE = "passage_questions.txt"
    TRIPLE_FILE = "triple_questions.txt"

    def __init__(self, prompt_dir: str | Path | None = None):
        if prompt_dir is None:
            base = resources.files("q2q") / "prompts"
        else:
            base = Path(prompt_dir)
        self._passage_template = self._read(base, self.PASSAGE_FILE)
        self._triple_template = self._read(base, self.TRIPLE_FILE)
        for slot in ("{{article_title}}", "{{section_title}}", "{{passage}}"):
            if slot not in self._passage_template:
                raise ConfigurationError(f"passage prompt template lacks {slot}")
        if "{{triple}}" not in self._triple_template:
            raise ConfigurationError("triple prompt template lacks {{triple}}")

    @staticmethod
    def _read(base, name: str) -> str:
        ref = base / name
        try:
            return ref.read_text(encoding="utf-8")
        except (FileNotFoundError, OSError) as exc:
            raise ConfigurationError(f"prompt template not found: {ref}") from exc

    def build_passage_prompt(
        self, article_title: str, section_title: str, passage_text: str
    ) -> str:
        if not passage_text.strip():
            raise ValueError("passage_text must be non-empty")
        return (
            self._passage_template.replace("{{article_title}}", article_title)
            .replace("{{section_title}}", section_title)
            .replace("{{passage}}", passage_text)
        )

    def build_triple_prompt(self, triple_text: str) -> str:
        if not triple_text.strip():
            raise ValueError("triple_text must be non-empty")
        return self._triple_template.replace("{{triple}}", triple_text)


class HttpGenerationClient:
    """Text-generation endpoint client.

    Contract: ``POST {url}`` with ``{"prompt": str, "max_tokens": int}``
    returns ``{"text": str}``.
    """

    def __init__(self, url: str, timeout: float = 120.0, session: requests.Session | None = None):
        self._url = url
        self._timeout = timeout
        self._session = session or requests.Session()

    def complete(self, prompt: str, max_tokens: int) -> str:
        try:
            resp = self._session.post(
                self._url,
                json={"prompt": prompt, "max_tokens": max_tokens},
                timeout=self._timeout,
            )
            resp.raise_for_status()
            return str(resp.json()["text"])
        except (requests.RequestException, KeyError, ValueError) as exc:
            raise TransportError(f"generation request failed: {exc}") from exc


class QuestionGenerator:
    """Turns content units into validated question sets.

    Transport failures and unparseable outputs are retried with exponential
    backoff; after the last attempt the error propagates so the ingestion
    pipeline can record the unit as failed and keep going.
    """

    def __init__(
        self,
        backend: GenerationBackend,
        prompts: PromptLibrary | None = None,
        max_questions: int = DEFAULT_MAX_QUESTIONS,
        max_tokens: int = 1024,
        attempts: int = 3,
        backoff_base: float = 0.5,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self._backend = backend
        self._prompts = prompts or PromptLibrary()
        self._max_questions = max_questions
        self._max_tokens = max_tokens
        self._attempts = attempts
        self._backoff_base = backoff_base
        self._sleep = sleep

    def generate(self, unit) -> QuestionSet:
        """Generate questions for a Passage or a triple group."""
        if isinstance(unit, Passage):
            prompt = self._prompts.build_passage_prompt(
                unit.article_title, unit.section_title, unit.text
            )
            source_hash, kind = unit.content_hash, SourceKind.PASSAGE
        elif hasattr(unit, "triple_key"):
            prompt = self._prompts.build_triple_prompt(unit.text)
            source_hash, kind = unit.triple_key, SourceKind.TRIPLE
        else:
            raise TypeError(f"cannot generate questions for {type(unit).__name__}")

        questions = self._complete_with_retries(prompt)
        return QuestionSet(
            source_hash=source_hash,
            source_kind=kind,
            questions=tuple(questions[: self._max_questions]),
        )

    def _complete_with_retries(self, prompt: str) -> list[str]:
        last_error: Exception | None = None
        for attempt in range(self._attempts):
            if attempt:
                self._sleep(self._backoff_base * 2 ** (attempt - 1))
            try:
                raw = self._backend.complete(prompt, self._max_tokens)
                return parse_question_list(raw)
            except (TransportError, MalformedOutputError) as exc:
                last_error = exc
        assert last_error is not None
        raise last_error
