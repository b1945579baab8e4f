"""Text preparation: Unicode normalization and the three tokenizer modes."""

from __future__ import annotations

import unicodedata

from .errors import ParamError

WHITESPACE = "whitespace"
INTL = "intl"
CHAR = "char"
TOKENIZER_MODES = (WHITESPACE, INTL, CHAR)


def normalize_text(text: str, enabled: bool = True) -> str:
    """NFC-normalize so visually identical inputs compare equal."""
    return unicodedata.normalize("NFC", text) if enabled else text


def _is_separable(ch: str) -> bool:
    # Unicode punctuation (P*) and symbols (S*) split off as own tokens.
    return unicodedata.category(ch)[0] in ("P", "S")


def tokenize(text: str, mode: str = WHITESPACE, normalize: bool = True) -> tuple[str, ...]:
    """Split text into tokens; the empty string yields no tokens."""
    if mode not in TOKENIZER_MODES:
        raise ParamError(f"unknown tokenizer mode: {mode!r}")
    text = normalize_text(text, normalize)
    if mode == CHAR:
        return tuple(ch for ch in text if not ch.isspace())
    if mode == INTL:
        parts: list[str] = []
        for ch in text:
            if _is_separable(ch):
                parts.append(f" {ch} ")
            else:
                parts.append(ch)
        text = "".join(parts)
    return tuple(text.split())
