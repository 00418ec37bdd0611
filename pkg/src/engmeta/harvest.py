"""Technical-metadata harvesting from the file system.

Walks a directory tree and records, per regular file, the relative path,
size, checksum and an extension-derived format hint. The listing is sorted
and deterministic, so repeated harvests of unchanged trees are identical.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .codes import CHECKSUM_ALGORITHMS
from .fswalk import walk_files
from .model import Checksum, EngMetaDataset, FileInfo

_HASHERS = {"MD5": hashlib.md5, "SHA-256": hashlib.sha256}
_CHUNK_SIZE = 1024 * 1024


@dataclass(frozen=True)
class HarvestError:
    path: str
    message: str


@dataclass(frozen=True)
class HarvestResult:
    algorithm: str
    files: tuple[FileInfo, ...] = ()
    errors: tuple[HarvestError, ...] = ()

    def to_dataset(self) -> EngMetaDataset:
        """The harvested listing as a document (for merging or output)."""
        return EngMetaDataset(files=self.files)


def _digest(path: Path, algorithm: str) -> str:
    hasher = _HASHERS[algorithm]()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(_CHUNK_SIZE), b""):
            hasher.update(chunk)
    return hasher.hexdigest()


def _file_type(relative_path: str) -> str | None:
    suffix = Path(relative_path).suffix
    return suffix[1:].lower() if len(suffix) > 1 else None


def harvest(root_dir: str | Path, algorithm: str = "SHA-256") -> HarvestResult:
    """Collect technical metadata for every regular file under root."""
    if algorithm not in CHECKSUM_ALGORITHMS:
        allowed = ", ".join(sorted(CHECKSUM_ALGORITHMS))
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of: {allowed}")
    root = Path(root_dir)
    if not root.is_dir():
        raise NotADirectoryError(f"harvest root {root} is not a readable directory")

    files: list[FileInfo] = []
    errors: list[HarvestError] = []
    for relative_path, absolute_path in walk_files(root):
        try:
            size = absolute_path.stat().st_size
        except OSError as exc:
            errors.append(HarvestError(relative_path, f"stat failed: {exc}"))
            continue
        checksum = None
        try:
            checksum = Checksum(_digest(absolute_path, algorithm), algorithm)
        except OSError as exc:
            errors.append(HarvestError(relative_path, f"unreadable: {exc}"))
        files.append(
            FileInfo(
                filename=relative_path,
                checksum=checksum,
                sizeBytes=size,
                fileType=_file_type(relative_path),
            )
        )
    return HarvestResult(algorithm, tuple(files), tuple(errors))
