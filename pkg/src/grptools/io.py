"""Flat-file event-history format.

CSV with header ``item_id,event_index,event_type,interarrival_time``:
item_id is a nonnegative integer, event_index is 1-based within its item,
event_type is PM or CM (uppercase), and interarrival_time is written with 17
significant digits so round-trips are byte-exact.  Rows are ordered by
(item_id, event_index); UTF-8 with LF line endings.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .model import Event, EventHistory, EventKind

HEADER = ["item_id", "event_index", "event_type", "interarrival_time"]


class CsvFormatError(ValueError):
    """Malformed history CSV; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def history_to_csv(history: EventHistory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for item_id, events in enumerate(history.items):
        for index, event in enumerate(events, start=1):
            writer.writerow([item_id, index, event.kind.value, f"{event.t:.17g}"])
    return buf.getvalue()


def write_history(path: str | Path, history: EventHistory) -> None:
    Path(path).write_bytes(history_to_csv(history).encode("utf-8"))


def history_from_csv(text: str) -> EventHistory:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError("missing header", line=1) from None
    if header != HEADER:
        raise CsvFormatError(f"expected header {','.join(HEADER)}", line=1)

    items: dict[int, list[Event]] = {}
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise CsvFormatError(f"expected 4 fields, got {len(row)}", line=line)
        try:
            item_id = int(row[0])
            index = int(row[1])
            t = float(row[3])
        except ValueError as exc:
            raise CsvFormatError(str(exc), line=line) from None
        if item_id < 0:
            raise CsvFormatError(f"item_id must be nonnegative, got {item_id}", line=line)
        if row[2] not in ("PM", "CM"):
            raise CsvFormatError(f"event_type must be PM or CM, got {row[2]!r}", line=line)
        if not t > 0:
            raise CsvFormatError(f"interarrival_time must be positive, got {row[3]}", line=line)
        events = items.setdefault(item_id, [])
        if index != len(events) + 1:
            raise CsvFormatError(
                f"event_index {index} out of order for item {item_id} (expected {len(events) + 1})",
                line=line,
            )
        events.append(Event(EventKind(row[2]), t))
    return EventHistory.from_lists(items[k] for k in sorted(items))


def read_history(path: str | Path) -> EventHistory:
    return history_from_csv(Path(path).read_text(encoding="utf-8"))
