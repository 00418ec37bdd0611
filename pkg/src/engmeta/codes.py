"""Controlled code lists.

The lists live in a bundled JSON table (codes.json) so deployments can adjust
them without touching code; only the processing-step types and checksum
algorithms are fixed, because other behavior depends on them.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

# Fixed: the four stages of the research process.
STEP_TYPES = ("data generation", "post processing", "analysis", "visualization")

# Fixed: algorithm code -> required hex digest length.
CHECKSUM_ALGORITHMS = {"MD5": 32, "SHA-256": 64}


@lru_cache(maxsize=1)
def load_codes() -> dict[str, tuple[str, ...]]:
    """Return the bundled code lists, keyed by list name."""
    raw = resources.files(__package__).joinpath("codes.json").read_text("utf-8")
    data = json.loads(raw)
    return {name: tuple(values) for name, values in data.items()}


def codes(list_name: str) -> tuple[str, ...]:
    """The values of one named code list (e.g. 'roles', 'dateTypes')."""
    table = load_codes()
    if list_name not in table:
        raise KeyError(f"unknown code list: {list_name}")
    return table[list_name]
