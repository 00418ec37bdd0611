"""Deterministic file-system enumeration shared by extraction and harvest."""

from __future__ import annotations

import os
from pathlib import Path


def walk_files(root: Path) -> list[tuple[str, Path]]:
    """All regular files under root as (posix relative path, absolute path).

    Sorted by relative path; symlinks are not followed; hidden files are
    included.
    """
    entries: list[tuple[str, Path]] = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames.sort()
        filenames.sort()
        for filename in filenames:
            path = Path(dirpath) / filename
            if path.is_symlink() or not path.is_file():
                continue
            entries.append((path.relative_to(root).as_posix(), path))
    entries.sort(key=lambda entry: entry[0])
    return entries
