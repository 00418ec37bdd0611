"""ISO-8601 date parsing helpers that work on Python 3.10."""

from __future__ import annotations

import datetime as _dt


def parse_iso_datetime(text: str) -> _dt.datetime | None:
    """Parse an ISO-8601 date-time; returns None if the text is not one.

    Date-only strings are not date-times. Accepts a trailing 'Z' (which
    fromisoformat only learned in 3.11).
    """
    candidate = text.strip()
    if parse_iso_date(candidate) is not None:
        return None
    if candidate.endswith(("Z", "z")):
        candidate = candidate[:-1] + "+00:00"
    try:
        return _dt.datetime.fromisoformat(candidate)
    except ValueError:
        return None


def parse_iso_date(text: str) -> _dt.date | None:
    """Parse an ISO-8601 calendar date; returns None if the text is not one."""
    try:
        return _dt.date.fromisoformat(text.strip())
    except ValueError:
        return None


def is_iso_date_or_datetime(text: str) -> bool:
    """True when the text parses as an ISO-8601 date or date-time."""
    return parse_iso_date(text) is not None or parse_iso_datetime(text) is not None
