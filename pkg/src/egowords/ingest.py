"""Timeline ingestion: parsing, filtering, activity status, window trimming.

Input is UTF-8 line-delimited JSON, one document per line. Lines that cannot
be decoded or fail validation are counted and skipped; a stream with zero
valid records is an error.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import IO, Iterable, Iterator

from .errors import ClassificationError, EmptyCorpusError, InputError

ONE_DAY = 86400.0
ONE_YEAR = 365.25 * ONE_DAY
ONE_MONTH = ONE_YEAR / 12
DEFAULT_SOURCE = "corpus"


class ActivityStatus(Enum):
    ACTIVE = "active"
    ABANDONED = "abandoned"
    SPORADIC = "sporadic"
    TRUNCATED = "truncated"
    BOT_FLAGGED = "bot_flagged"


@dataclass
class Document:
    user_id: str
    timestamp: int
    text: str
    is_plain_retweet: bool = False
    language: str = "en"
    bot_score_flag: bool | None = None
    is_first_post: bool = False


@dataclass
class Timeline:
    user_id: str
    documents: list[Document]
    download_time: int
    source_label: str = DEFAULT_SOURCE

    @property
    def first_timestamp(self) -> int:
        return self.documents[0].timestamp

    @property
    def last_timestamp(self) -> int:
        return self.documents[-1].timestamp


@dataclass(frozen=True)
class WindowConfig:
    """Observation-window and activity-classification settings.

    abandonment_days: silence allowed past the largest historical gap before
    an account counts as abandoned (default six months, pinned at 182 days).
    sporadic_fraction: maximum tolerated share of empty calendar months.
    api_cap: timeline length at which provider-side truncation is suspected.
    """

    window_years: float = 1.0
    abandonment_days: float = 182.0
    sporadic_fraction: float = 0.5
    api_cap: int = 3200


@dataclass
class ParseResult:
    timelines: list[Timeline]
    malformed: int
    total_lines: int


@dataclass
class FilterTally:
    retweet: int = 0
    language: int = 0


@dataclass
class SourceSummary:
    users: int
    avg_docs: float | None


@dataclass
class DatasetSummary:
    window_years: float
    by_source: dict[str, SourceSummary] = field(default_factory=dict)
    total_users: int = 0
    overall_avg_docs: float | None = None


def _coerce_record(raw: dict) -> tuple[Document, int | None, str | None]:
    """Validate one parsed JSON object; raises ValueError on bad fields."""
    user_id = raw["user_id"]
    timestamp = raw["timestamp"]
    text = raw.get("text")
    if not isinstance(user_id, str) or not user_id:
        raise ValueError("user_id must be a non-empty string")
    if isinstance(timestamp, bool) or not isinstance(timestamp, int):
        raise ValueError("timestamp must be an integer")
    if not isinstance(text, str):
        raise ValueError("text must be a string")
    is_rt = bool(raw.get("is_plain_retweet", False))
    if text == "" and not is_rt:
        raise ValueError("empty text on a non-retweet document")
    language = raw.get("language", "en")
    if not isinstance(language, str) or not language:
        raise ValueError("language must be a non-empty string")
    bot = raw.get("bot")
    if bot is not None:
        bot = bool(bot)
    doc = Document(
        user_id=user_id,
        timestamp=timestamp,
        text=text,
        is_plain_retweet=is_rt,
        language=language,
        bot_score_flag=bot,
        is_first_post=bool(raw.get("is_first_post", False)),
    )
    download_time = raw.get("download_time")
    if download_time is not None and (
        isinstance(download_time, bool) or not isinstance(download_time, int)
    ):
        raise ValueError("download_time must be an integer")
    source = raw.get("source")
    if source is not None and not isinstance(source, str):
        raise ValueError("source must be a string")
    return doc, download_time, source


def parse_timeline_stream(stream: IO[bytes] | IO[str]) -> ParseResult:
    """Parse line-delimited document records into per-user timelines.

    Malformed lines are counted and skipped. Timelines come back sorted by
    user_id with documents in timestamp order; download_time is the largest
    value seen for the user (record field or last document timestamp).
    """
    if isinstance(stream, (io.RawIOBase, io.BufferedIOBase)) or (
        hasattr(stream, "mode") and "b" in getattr(stream, "mode", "")
    ):
        stream = io.TextIOWrapper(stream, encoding="utf-8")
    docs: dict[str, list[Document]] = {}
    downloads: dict[str, int] = {}
    sources: dict[str, str] = {}
    malformed = 0
    total = 0
    try:
        for line in stream:
            if not line.strip():
                continue
            total += 1
            try:
                raw = json.loads(line)
                if not isinstance(raw, dict):
                    raise ValueError("record must be an object")
                doc, download_time, source = _coerce_record(raw)
            except (ValueError, KeyError, TypeError):
                malformed += 1
                continue
            docs.setdefault(doc.user_id, []).append(doc)
            if download_time is not None:
                prev = downloads.get(doc.user_id)
                downloads[doc.user_id] = (
                    download_time if prev is None else max(prev, download_time)
                )
            if source and doc.user_id not in sources:
                sources[doc.user_id] = source
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"unreadable input stream: {exc}") from exc
    if not docs:
        raise EmptyCorpusError(
            f"empty corpus: no valid records in {total} lines ({malformed} malformed)"
        )
    timelines = []
    for user_id in sorted(docs):
        user_docs = sorted(docs[user_id], key=lambda d: d.timestamp)
        last_ts = user_docs[-1].timestamp
        download = max(downloads.get(user_id, last_ts), last_ts)
        timelines.append(
            Timeline(
                user_id=user_id,
                documents=user_docs,
                download_time=download,
                source_label=sources.get(user_id, DEFAULT_SOURCE),
            )
        )
    return ParseResult(timelines=timelines, malformed=malformed, total_lines=total)


def read_timelines(path: str) -> ParseResult:
    with open(path, "rb") as fh:
        return parse_timeline_stream(fh)


def serialize_timelines(timelines: Iterable[Timeline]) -> Iterator[str]:
    """Emit one JSON line per document; parse(serialize(x)) == x."""
    for tl in timelines:
        last_ts = tl.documents[-1].timestamp if tl.documents else None
        for i, doc in enumerate(tl.documents):
            rec: dict = {
                "user_id": doc.user_id,
                "timestamp": doc.timestamp,
                "text": doc.text,
                "is_plain_retweet": doc.is_plain_retweet,
                "language": doc.language,
            }
            if doc.bot_score_flag is not None:
                rec["bot"] = doc.bot_score_flag
            if doc.is_first_post:
                rec["is_first_post"] = True
            if i == len(tl.documents) - 1:
                if last_ts is not None and tl.download_time != last_ts:
                    rec["download_time"] = tl.download_time
                if tl.source_label != DEFAULT_SOURCE:
                    rec["source"] = tl.source_label
            yield json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n"


def write_timelines(path: str, timelines: Iterable[Timeline]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(serialize_timelines(timelines))


def filter_documents(
    timeline: Timeline, allowed_language: str = "en"
) -> tuple[Timeline, FilterTally]:
    """Drop plain retweets and documents in other languages.

    Language matching compares the primary subtag case-insensitively, so
    "en-GB" passes allowed_language="en".
    """
    allowed = allowed_language.split("-")[0].lower()
    tally = FilterTally()
    kept = []
    for doc in timeline.documents:
        if doc.is_plain_retweet:
            tally.retweet += 1
            continue
        if doc.language.split("-")[0].lower() != allowed:
            tally.language += 1
            continue
        kept.append(doc)
    filtered = Timeline(
        user_id=timeline.user_id,
        documents=kept,
        download_time=timeline.download_time,
        source_label=timeline.source_label,
    )
    return filtered, tally


def _month_index(ts: float) -> int:
    d = datetime.fromtimestamp(ts, tz=timezone.utc)
    return d.year * 12 + (d.month - 1)


def classify_activity(
    timeline: Timeline, config: WindowConfig, now: int | None = None
) -> ActivityStatus:
    """Classify a timeline's posting pattern as of ``now``.

    ``now`` defaults to the download time and must not precede it. Precedence:
    a bot flag beats everything; then abandonment (silence since the last
    document exceeding the largest historical gap plus the threshold); then
    sporadicity (empty calendar months over the observation period); then
    provider truncation (cap-sized timeline whose earliest document claims to
    be the first post); otherwise active.
    """
    if not timeline.documents:
        raise ClassificationError(f"user {timeline.user_id}: no documents to classify")
    if now is None:
        now = timeline.download_time
    elif now < timeline.download_time:
        raise ValueError("now precedes the download time")
    if any(doc.bot_score_flag for doc in timeline.documents):
        return ActivityStatus.BOT_FLAGGED

    stamps = [doc.timestamp for doc in timeline.documents]
    largest_gap = max(
        (b - a for a, b in zip(stamps, stamps[1:])), default=0
    )
    threshold = config.abandonment_days * ONE_DAY
    if now - stamps[-1] > largest_gap + threshold:
        return ActivityStatus.ABANDONED

    total_months = _month_index(now) - _month_index(stamps[0]) + 1
    covered = len({_month_index(ts) for ts in stamps})
    if total_months - covered > config.sporadic_fraction * total_months:
        return ActivityStatus.SPORADIC

    if len(timeline.documents) >= config.api_cap and timeline.documents[0].is_first_post:
        return ActivityStatus.TRUNCATED

    return ActivityStatus.ACTIVE


def trim_to_window(
    timeline: Timeline, window_years: float, reference_time: int | None = None
) -> Timeline | None:
    """Restrict a timeline to its most recent ``window_years`` years.

    Returns None when the timeline spans less than the window (measured from
    the first document to the reference time, which defaults to the download
    time so archived corpora reproduce identically). Kept documents satisfy
    reference - window <= timestamp <= reference.
    """
    if window_years <= 0:
        raise ValueError("window_years must be positive")
    ref = timeline.download_time if reference_time is None else reference_time
    span_needed = window_years * ONE_YEAR
    if not timeline.documents or ref - timeline.first_timestamp < span_needed:
        return None
    start = ref - span_needed
    kept = [d for d in timeline.documents if start <= d.timestamp <= ref]
    return Timeline(
        user_id=timeline.user_id,
        documents=kept,
        download_time=timeline.download_time,
        source_label=timeline.source_label,
    )


def dataset_summary(timelines: Iterable[Timeline], window_years: float) -> DatasetSummary:
    """Per-source user counts and mean documents per user."""
    counts: dict[str, list[int]] = {}
    for tl in timelines:
        counts.setdefault(tl.source_label, []).append(len(tl.documents))
    summary = DatasetSummary(window_years=window_years)
    total_docs = 0
    for label in sorted(counts):
        sizes = counts[label]
        summary.by_source[label] = SourceSummary(
            users=len(sizes), avg_docs=sum(sizes) / len(sizes)
        )
        summary.total_users += len(sizes)
        total_docs += sum(sizes)
    if summary.total_users:
        summary.overall_avg_docs = total_docs / summary.total_users
    return summary
