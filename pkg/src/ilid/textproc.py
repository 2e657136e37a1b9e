"""Unicode-aware text cleaning, sentence splitting, and word tokenization.

Covers the thirteen writing systems used by English and the 22 scheduled
Indian languages: Devanagari, Bengali, Tamil, Telugu, Kannada, Malayalam,
Gujarati, Gurmukhi, Odia, Meitei Mayek, Ol Chiki, Perso-Arabic, and Latin.

All operations are pure functions; nothing in here holds mutable state.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from functools import lru_cache

from .errors import ValidationError

_NORMAL_FORMS = ("NFC", "NFD", "NFKC", "NFKD")

ZWNJ = "‌"
ZWJ = "‍"

#: Reserved script name for letters outside every known profile.
OTHER_SCRIPT = "other"

_category = lru_cache(maxsize=None)(unicodedata.category)


@dataclass(frozen=True)
class CleanConfig:
    """How normalize_text cleans a string.

    The special-character pass always handles controls and format characters
    (when ``strip_controls`` is set); ``strip_symbols`` names additional
    Unicode general categories (e.g. ``"So"``) to remove in the same pass.
    Composing form NFC avoids splitting TF-IDF indices on encoding accidents
    in Indic text that arrives in mixed composed/decomposed variants.
    """

    collapse_whitespace: bool = True
    strip_controls: bool = True
    unicode_form: str = "NFC"
    strip_symbols: frozenset = frozenset()

    def __post_init__(self):
        if self.unicode_form not in _NORMAL_FORMS:
            raise ValidationError(
                f"unicode_form must be one of {_NORMAL_FORMS}, got {self.unicode_form!r}"
            )
        object.__setattr__(self, "strip_symbols", frozenset(self.strip_symbols))


@dataclass(frozen=True)
class ScriptProfile:
    """A writing system: its letter code-point ranges and sentence enders."""

    script_name: str
    char_ranges: tuple
    sentence_delimiters: frozenset

    def __post_init__(self):
        ranges = tuple(tuple(r) for r in self.char_ranges)
        object.__setattr__(self, "char_ranges", ranges)
        object.__setattr__(
            self, "sentence_delimiters", frozenset(self.sentence_delimiters)
        )
        if not self.sentence_delimiters:
            raise ValidationError(f"{self.script_name}: empty sentence_delimiters")
        ordered = sorted(ranges)
        for lo, hi in ordered:
            if lo > hi:
                raise ValidationError(f"{self.script_name}: bad range {lo:#x}..{hi:#x}")
        for (_, hi1), (lo2, _) in zip(ordered, ordered[1:]):
            if lo2 <= hi1:
                raise ValidationError(f"{self.script_name}: overlapping char_ranges")

    def contains(self, codepoint: int) -> bool:
        return any(lo <= codepoint <= hi for lo, hi in self.char_ranges)


_DANDA_DELIMS = frozenset({"।", "॥"})

DEFAULT_PROFILES = (
    ScriptProfile("Devanagari", ((0x0900, 0x097F), (0xA8E0, 0xA8FF)), _DANDA_DELIMS),
    ScriptProfile("Bengali", ((0x0980, 0x09FF),), _DANDA_DELIMS),
    ScriptProfile("Gurmukhi", ((0x0A00, 0x0A7F),), _DANDA_DELIMS),
    ScriptProfile("Gujarati", ((0x0A80, 0x0AFF),), _DANDA_DELIMS),
    ScriptProfile("Odia", ((0x0B00, 0x0B7F),), _DANDA_DELIMS),
    ScriptProfile("Tamil", ((0x0B80, 0x0BFF),), _DANDA_DELIMS | {"."}),
    ScriptProfile("Telugu", ((0x0C00, 0x0C7F),), _DANDA_DELIMS | {"."}),
    ScriptProfile("Kannada", ((0x0C80, 0x0CFF),), _DANDA_DELIMS | {"."}),
    ScriptProfile("Malayalam", ((0x0D00, 0x0D7F),), _DANDA_DELIMS | {"."}),
    ScriptProfile("Meitei-Mayek", ((0xAAE0, 0xAAFF), (0xABC0, 0xABFF)), _DANDA_DELIMS),
    ScriptProfile("Ol-Chiki", ((0x1C50, 0x1C7F),), frozenset({"᱾", "᱿"})),
    ScriptProfile(
        "Perso-Arabic",
        ((0x0600, 0x06FF), (0x0750, 0x077F), (0x08A0, 0x08FF), (0xFB50, 0xFDFF), (0xFE70, 0xFEFF)),
        frozenset({"۔"}),
    ),
    ScriptProfile("Latin", ((0x0041, 0x005A), (0x0061, 0x007A), (0x00C0, 0x024F)), frozenset(".!?")),
)

#: Latin-style terminators end a sentence only at a word boundary, so that
#: decimals ("3.5") and host names survive; danda-family marks always split.
_LATIN_TERMINATORS = frozenset(".!?")


def _word_internal(text: str, i: int) -> bool:
    return (
        0 < i < len(text) - 1
        and not text[i - 1].isspace()
        and not text[i + 1].isspace()
    )


def _strip_specials(text: str, cfg: CleanConfig) -> str:
    out = []
    for i, ch in enumerate(text):
        cat = _category(ch)
        if cfg.strip_controls:
            if cat == "Cc" and not ch.isspace():
                continue
            if cat == "Cs":
                continue
            if cat == "Cf":
                # ZWJ/ZWNJ are orthographically meaningful inside Devanagari
                # and Perso-Arabic words; drop them only at word edges.
                if ch in (ZWJ, ZWNJ) and _word_internal(text, i):
                    out.append(ch)
                continue
        if cat in cfg.strip_symbols:
            continue
        out.append(ch)
    return "".join(out)


def normalize_text(raw, cfg: CleanConfig = CleanConfig()) -> str:
    """Clean ``raw``: special-character pass, then normalization pass.

    The result carries no stray controls, is in ``cfg.unicode_form``, and
    (under the default config) has exactly single spaces between words and
    none at the ends. The operation is idempotent.

    Accepts bytes as a convenience; invalid UTF-8 raises UnicodeDecodeError,
    which names the offending byte offset.
    """
    if isinstance(raw, (bytes, bytearray)):
        raw = bytes(raw).decode("utf-8")
    text = raw
    # Removing a character can expose another removable one (e.g. a ZWJ whose
    # word-internal neighbour was itself stripped), so run to a fixed point.
    while True:
        stripped = _strip_specials(text, cfg)
        if stripped == text:
            break
        text = stripped
    text = unicodedata.normalize(cfg.unicode_form, text)
    if cfg.collapse_whitespace:
        text = " ".join(text.split())
    return text


def split_sentences(text: str, profiles=DEFAULT_PROFILES) -> list:
    """Split normalized text into sentences on the profiles' end markers.

    A run of consecutive delimiters is one terminator and stays attached to
    the sentence it ends. Text with no delimiter comes back as one sentence.
    """
    if not profiles:
        raise ValidationError("at least one script profile is required")
    delims = frozenset().union(*[p.sentence_delimiters for p in profiles])
    pieces = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in delims:
            j = i
            while j + 1 < n and text[j + 1] in delims:
                j += 1
            nxt = text[j + 1] if j + 1 < n else ""
            at_boundary = (
                nxt == "" or nxt.isspace() or text[j] not in _LATIN_TERMINATORS
            )
            if at_boundary:
                pieces.append(text[start : j + 1])
                start = j + 1
            i = j + 1
        else:
            i += 1
    if start < n:
        pieces.append(text[start:])
    result = [p.strip() for p in pieces]
    return [p for p in result if p]


@lru_cache(maxsize=None)
def _is_punct(ch: str) -> bool:
    return _category(ch).startswith("P")


#: Punctuation allowed to stay inside a token when flanked by non-punctuation:
#: hyphen-minus, apostrophe, and the typographic apostrophe.
_KEEP_INTERNAL = frozenset({"-", "'", "’"})


def tokenize_words(sentence: str) -> list:
    """Tokenize one sentence: whitespace split, punctuation detached.

    Every punctuation mark becomes its own token except word-internal hyphens
    and apostrophes ("don't", "co-op"). Joining the tokens with single spaces
    and re-tokenizing reproduces the token list.
    """
    tokens = []
    for chunk in sentence.split():
        buf = []
        m = len(chunk)
        for i, ch in enumerate(chunk):
            if _is_punct(ch):
                internal = (
                    ch in _KEEP_INTERNAL
                    and 0 < i < m - 1
                    and not _is_punct(chunk[i - 1])
                    and not _is_punct(chunk[i + 1])
                )
                if internal:
                    buf.append(ch)
                    continue
                if buf:
                    tokens.append("".join(buf))
                    buf = []
                tokens.append(ch)
            else:
                buf.append(ch)
        if buf:
            tokens.append("".join(buf))
    return tokens


def is_punctuation_token(token: str) -> bool:
    """True when every character of ``token`` is punctuation."""
    return bool(token) and all(_is_punct(ch) for ch in token)


def detect_script(text: str, profiles=DEFAULT_PROFILES) -> dict:
    """Distribution of the text's letters over the profiles' scripts.

    Only letters count; digits, punctuation, and whitespace are ignored.
    Letters outside every profile land under :data:`OTHER_SCRIPT`. Text with
    no letters at all yields an empty dict.
    """
    counts = {}
    total = 0
    for ch in text:
        if not ch.isalpha():
            continue
        total += 1
        cp = ord(ch)
        name = OTHER_SCRIPT
        for profile in profiles:
            if profile.contains(cp):
                name = profile.script_name
                break
        counts[name] = counts.get(name, 0) + 1
    if total == 0:
        return {}
    return {name: counts[name] / total for name in sorted(counts)}
