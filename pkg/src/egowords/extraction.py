"""Word extraction: tokenization, social-marker stripping, stop words, lemmas.

The tokenizer segments on whitespace and classifies each chunk; mentions,
hashtags, links and emoji are social markers removed before counting.
Contraction clitics ("n't", "'s", ...) split off as Punct so the functional
part never reaches the lexical stream. Numerals, digit-bearing chunks and
single characters are non-lexical and land in Punct as well.

Lemmatization is dictionary/rule based (tables in ``_lexicon``): plural nouns
to singular, inflected verbs to the infinitive, comparatives/superlatives to
the base adjective; unknown words pass through lowercased.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ._lexicon import KNOWN_BASES, LEMMA_EXCEPTIONS, LEMMATIZER_VERSION, PRESERVE
from .errors import ConfigurationError
from .ingest import Timeline

STOPWORDS_VERSION = "en-builtin-1"

SOCIAL_KINDS = ("mention", "hashtag", "link", "emoji")


class TokenKind(Enum):
    WORD = "word"
    MENTION = "mention"
    HASHTAG = "hashtag"
    LINK = "link"
    EMOJI = "emoji"
    PUNCT = "punct"


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind


@dataclass(frozen=True)
class ExtractionConfig:
    stopword_list: str = "builtin"
    lemmatizer: str = "builtin"
    min_count: int = 2
    lowercase: bool = True


@dataclass
class LemmaCounts:
    """Aggregated lemma counts for one user.

    total_tokens is the raw tokenizer output size (all kinds), the
    denominator for removed-token percentages; total_word_tokens counts
    Word-kind tokens surviving social stripping. removed_tallies keys:
    hashtag, mention, link, emoji, stopword, hapax.
    """

    user_id: str
    counts: dict[str, int]
    total_word_tokens: int
    removed_tallies: dict[str, int] = field(default_factory=dict)
    total_tokens: int = 0


_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_HANDLE_RE = re.compile(r"@\w+")
_TAG_RE = re.compile(r"#\w+")
_WORD_RE = re.compile(r"[^\W\d_]+(?:['-][^\W\d_]+)*")
_CLITICS = ("n't", "'re", "'ve", "'ll", "'d", "'m", "'s")
_STRIP_CHARS = "\"'.,!?;:()[]{}<>…‚„“”«»*&^%$+=|\\/~`—–- "

_EMOJI_RANGES = (
    (0x1F000, 0x1F0FF),
    (0x1F1E6, 0x1F1FF),
    (0x1F300, 0x1F5FF),
    (0x1F600, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F700, 0x1FAFF),
    (0x2600, 0x27BF),
    (0x2B00, 0x2BFF),
    (0xFE00, 0xFE0F),
    (0x200D, 0x200D),
)


def _is_emoji(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES)


def _chunk_tokens(chunk: str, out: list[Token]) -> None:
    if not chunk:
        return
    m = _URL_RE.search(chunk)
    if m:
        if m.start() > 0:
            _chunk_tokens(chunk[: m.start()], out)
        out.append(Token(m.group(), TokenKind.LINK))
        return
    if any(_is_emoji(c) for c in chunk):
        span_start = 0
        in_emoji = _is_emoji(chunk[0])
        for i in range(1, len(chunk) + 1):
            boundary = i == len(chunk) or _is_emoji(chunk[i]) != in_emoji
            if not boundary:
                continue
            span = chunk[span_start:i]
            if in_emoji:
                out.append(Token(span, TokenKind.EMOJI))
            else:
                _chunk_tokens(span, out)
            span_start = i
            in_emoji = not in_emoji
        return
    stripped = chunk.strip(_STRIP_CHARS)
    if not stripped:
        out.append(Token(chunk, TokenKind.PUNCT))
        return
    if stripped[0] == "@":
        m = _HANDLE_RE.match(stripped)
        if m and m.end() > 1:
            out.append(Token(m.group(), TokenKind.MENTION))
            _chunk_tokens(stripped[m.end() :], out)
        else:
            out.append(Token(stripped, TokenKind.PUNCT))
        return
    if stripped[0] == "#":
        m = _TAG_RE.match(stripped)
        if m and m.end() > 1:
            out.append(Token(m.group(), TokenKind.HASHTAG))
            _chunk_tokens(stripped[m.end() :], out)
        else:
            out.append(Token(stripped, TokenKind.PUNCT))
        return
    low = stripped.lower()
    for clitic in _CLITICS:
        if low.endswith(clitic) and len(stripped) > len(clitic):
            _chunk_tokens(stripped[: -len(clitic)], out)
            out.append(Token(stripped[-len(clitic) :], TokenKind.PUNCT))
            return
    if len(stripped) >= 2 and _WORD_RE.fullmatch(stripped):
        out.append(Token(stripped, TokenKind.WORD))
        return
    out.append(Token(stripped, TokenKind.PUNCT))


def tokenize(text: str) -> list[Token]:
    """Whitespace segmentation with per-chunk kind classification.

    Typographic apostrophes are normalised to ASCII before matching. Surface
    case is preserved; lowercasing happens at the lemma stage.
    """
    text = text.replace("’", "'").replace("‘", "'")
    out: list[Token] = []
    for chunk in text.split():
        _chunk_tokens(chunk, out)
    return out


@lru_cache(maxsize=8)
def _builtin_stopwords() -> frozenset[str]:
    data = resources.files("egowords.data").joinpath("stopwords_en_builtin.txt")
    return _parse_stopword_text(data.read_text(encoding="utf-8"))


def _parse_stopword_text(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def load_stopwords(list_id: str = "builtin") -> frozenset[str]:
    """Resolve a stop-word list id: "builtin" or a path to a text file."""
    if list_id == "builtin":
        return _builtin_stopwords()
    path = Path(list_id)
    if path.is_file():
        return _parse_stopword_text(path.read_text(encoding="utf-8"))
    raise ConfigurationError(f"unknown stop-word list: {list_id!r}")


def strip_social_tokens(tokens: list[Token]) -> tuple[list[Token], Counter]:
    """Remove mention/hashtag/link/emoji tokens, tallying each kind."""
    tally: Counter = Counter({kind: 0 for kind in SOCIAL_KINDS})
    kept = []
    for tok in tokens:
        if tok.kind in (
            TokenKind.MENTION,
            TokenKind.HASHTAG,
            TokenKind.LINK,
            TokenKind.EMOJI,
        ):
            tally[tok.kind.value] += 1
        else:
            kept.append(tok)
    return kept, tally


def remove_stopwords(
    tokens: list[Token], config: ExtractionConfig | None = None
) -> list[Token]:
    """Drop Word tokens whose lowercased surface is a stop word."""
    config = config or ExtractionConfig()
    stopset = load_stopwords(config.stopword_list)
    return [
        t
        for t in tokens
        if t.kind == TokenKind.WORD and t.surface.lower() not in stopset
    ]


def _has_vowel(s: str) -> bool:
    return any(c in "aeiouy" for c in s)


def _vowel_groups(s: str) -> int:
    groups = 0
    prev = False
    for c in s:
        cur = c in "aeiouy"
        if cur and not prev:
            groups += 1
        prev = cur
    return groups


def _cvc(s: str) -> bool:
    if len(s) < 3:
        return False
    last, mid, ante = s[-1], s[-2], s[-3]
    return (
        last not in "aeiouwxy" and last.isalpha()
        and mid in "aeiou"
        and ante not in "aeiou" and ante.isalpha()
    )


def _restore_base(stem: str) -> str:
    """Pick the base form after stripping -ing/-ed from ``stem``+suffix."""
    if stem in KNOWN_BASES:
        return stem
    if stem + "e" in KNOWN_BASES:
        return stem + "e"
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] in "bdgkmnprt":
        return stem[:-1]
    # single-syllable stems of the consonant-vowel-consonant shape lost a
    # final "e" to the inflection (tak+ing -> take)
    if _cvc(stem) and _vowel_groups(stem) == 1:
        return stem + "e"
    return stem


def _apply_lemma_rules(w: str) -> str:
    if w in LEMMA_EXCEPTIONS:
        return LEMMA_EXCEPTIONS[w]
    if w in PRESERVE:
        return w
    if w.endswith("ies") and len(w) >= 5:
        return w[:-3] + "y"
    if w.endswith(("sses", "xes", "zes", "ches", "shes")):
        return w[:-2]
    if w.endswith("oes") and len(w) >= 4:
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is", "'s")) and len(w) >= 4:
        return w[:-1]
    if w.endswith("ing") and len(w) >= 5:
        stem = w[:-3]
        return _restore_base(stem) if _has_vowel(stem) else w
    if w.endswith("ed") and len(w) >= 4:
        if w.endswith("eed"):
            return w
        if w.endswith("ied") and len(w) >= 5:
            return w[:-3] + "y"
        stem = w[:-2]
        if _has_vowel(stem) and len(stem) >= 3:
            return _restore_base(stem)
        return w
    return w


def lemmatize(token: Token | str, config: ExtractionConfig | None = None) -> str:
    """Map one word to its lemma; unknown words pass through lowercased."""
    config = config or ExtractionConfig()
    if config.lemmatizer != "builtin":
        raise ConfigurationError(f"unknown lemmatizer: {config.lemmatizer!r}")
    surface = token.surface if isinstance(token, Token) else token
    w = surface.lower() if config.lowercase else surface
    return _apply_lemma_rules(w)


def extract_document(
    text: str, config: ExtractionConfig | None = None
) -> tuple[list[str], Counter]:
    """Full per-document path: lemma sequence plus removal tallies.

    The tally carries the social kinds, "stopword" (surface- or lemma-level
    hits), "total_tokens" and "word_tokens" bookkeeping counts.
    """
    config = config or ExtractionConfig()
    stopset = load_stopwords(config.stopword_list)
    tokens = tokenize(text)
    kept, tally = strip_social_tokens(tokens)
    tally["total_tokens"] = len(tokens)
    words = [t for t in kept if t.kind == TokenKind.WORD]
    tally["word_tokens"] = len(words)
    tally["stopword"] = 0
    lemmas = []
    for tok in words:
        if tok.surface.lower() in stopset:
            tally["stopword"] += 1
            continue
        lemma = lemmatize(tok, config)
        # the lemma itself may be a stop word ("taking" -> "take"); counts
        # must never contain stop-word lemmas
        if lemma in stopset:
            tally["stopword"] += 1
            continue
        lemmas.append(lemma)
    return lemmas, tally


def document_lemmas(text: str, config: ExtractionConfig | None = None) -> list[str]:
    return extract_document(text, config)[0]


def count_lemmas(timeline: Timeline, config: ExtractionConfig | None = None) -> LemmaCounts:
    """Aggregate lemma counts across a timeline, then apply the min-count cut.

    Lemmas seen fewer than config.min_count times across the whole timeline
    are removed and tallied under "hapax" (as occurrences). The sum of kept
    counts plus the stopword and hapax tallies equals total_word_tokens.
    """
    config = config or ExtractionConfig()
    counter: Counter = Counter()
    removed: Counter = Counter({k: 0 for k in SOCIAL_KINDS})
    removed["stopword"] = 0
    total_tokens = 0
    total_word_tokens = 0
    for doc in timeline.documents:
        lemmas, tally = extract_document(doc.text, config)
        counter.update(lemmas)
        total_tokens += tally["total_tokens"]
        total_word_tokens += tally["word_tokens"]
        for kind in SOCIAL_KINDS:
            removed[kind] += tally[kind]
        removed["stopword"] += tally["stopword"]
    kept = {}
    hapax = 0
    for lemma in sorted(counter):
        c = counter[lemma]
        if c >= config.min_count:
            kept[lemma] = c
        else:
            hapax += c
    removed["hapax"] = hapax
    return LemmaCounts(
        user_id=timeline.user_id,
        counts=kept,
        total_word_tokens=total_word_tokens,
        removed_tallies=dict(removed),
        total_tokens=total_tokens,
    )
