"""Shared helpers: seeded random collections for randomized checks."""

from __future__ import annotations

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from multieval import validate_collection

VOCAB = ("the", "cat", "sat", "dog", "ran", "a", "on", "mat")
LABELS = (0, 1, 2)
TAGS = ("O", "B-PER", "I-PER", "B-LOC", "I-LOC")


def random_sentence(rng: random.Random, max_tokens: int = 6, min_tokens: int = 1) -> str:
    return " ".join(rng.choice(VOCAB) for _ in range(rng.randint(min_tokens, max_tokens)))


def random_text_pairs(rng: random.Random, n_max=10, k_max=3, m_max=3, max_tokens=6):
    """Raw nested lists: n instances of k predictions and m references."""
    n = rng.randint(1, n_max)
    predictions, references = [], []
    for _ in range(n):
        predictions.append([random_sentence(rng, max_tokens) for _ in range(rng.randint(1, k_max))])
        references.append([random_sentence(rng, max_tokens) for _ in range(rng.randint(1, m_max))])
    return predictions, references


def random_text_collection(rng: random.Random, **kwargs):
    predictions, references = random_text_pairs(rng, **kwargs)
    return validate_collection(predictions, references)


def random_label_pairs(rng: random.Random, n_max=10, k_max=3, m_max=3):
    n = rng.randint(1, n_max)
    predictions, references = [], []
    for _ in range(n):
        predictions.append([rng.choice(LABELS) for _ in range(rng.randint(1, k_max))])
        references.append([rng.choice(LABELS) for _ in range(rng.randint(1, m_max))])
    return predictions, references


def random_tag_sequence(rng: random.Random, length: int) -> list[str]:
    # Draw raw tags; dangling I- tags are exactly what repair handles.
    return [rng.choice(TAGS) for _ in range(length)]
