"""Building generation prompts and parsing model output into question sets.

The two prompt templates live in data files with {{slot}} placeholders. Any
endpoint with a ``complete(prompt, max_tokens) -> str`` method plugs in; here
a tiny scripted stand-in plays the model so the demo runs offline.
"""

from q2q import Article, PromptLibrary, QuestionGenerator, parse_question_list, split_paragraphs

prompts = PromptLibrary()

print("== passage prompt (tail) ==")
built = prompts.build_passage_prompt(
    "Nile", "Course", "The Nile is about 6,650 km long."
)
print("…", built[-170:])

print("\n== triple prompt (tail) ==")
print("…", prompts.build_triple_prompt("India : Capital : New Delhi")[-120:])

print("\n== parsing bullet output ==")
raw_model_output = """Here you go:
- How long is the Nile?
- How long is the NILE?
- Where does the Nile drain?
- This line is not a question
1. Which sea does the Nile flow into?
"""
for q in parse_question_list(raw_model_output):
    print(" ", q)
print("(duplicates folded case-insensitively, non-questions dropped)")


class ScriptedModel:
    """Offline stand-in for a generation endpoint."""

    def complete(self, prompt: str, max_tokens: int) -> str:
        return (
            "- How long is the Nile?\n"
            "- Where does the Nile drain?\n"
            "- Which sea does the Nile flow into?"
        )


article = Article(
    "nile", "Nile", (("Course", "The Nile is about 6,650 km long and drains into the Mediterranean Sea."),)
)
(passage,) = split_paragraphs(article)

generator = QuestionGenerator(ScriptedModel())
question_set = generator.generate(passage)

print("\n== generated question set ==")
print("source hash:", question_set.source_hash.hex[:16], "…")
for q in question_set.questions:
    print(" ", q)
