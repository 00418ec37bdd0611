"""Exception types shared across the package."""

from __future__ import annotations


class EngMetaError(Exception):
    """Base class for all errors raised by this package."""


class PathError(EngMetaError, ValueError):
    """Base class for metadata-path errors."""


class PathSyntaxError(PathError):
    """Malformed path text; carries the character offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class PathTargetError(PathError):
    """Path is syntactically fine but cannot be written/resolved as requested."""


class PathIndexGapError(PathTargetError):
    """Write would leave a hole in a list (index more than one past the end)."""


class CanonError(EngMetaError, ValueError):
    """Base class for serialization/deserialization errors."""


class CanonSyntaxError(CanonError):
    """Input text is not well-formed XML/JSON; carries line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class CanonDecodeError(CanonError):
    """Well-formed input holds a value incompatible with the model field."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class CanonValidationError(CanonError):
    """Serialization was refused because the document fails structural checks."""

    def __init__(self, findings):
        lines = "; ".join(f"{f.path}: {f.message}" for f in findings)
        super().__init__(f"document fails structural validation: {lines}")
        self.findings = tuple(findings)


class ConfigError(EngMetaError, ValueError):
    """Extraction config file problem; message includes line number(s)."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CoercionError(EngMetaError, ValueError):
    """Raw extracted text cannot be converted to the rule's value type."""


class ExtractionRootError(EngMetaError, OSError):
    """The extraction root directory is missing or not a directory."""


class ProvError(EngMetaError, ValueError):
    """Provenance document is inconsistent (e.g. dangling relation endpoint)."""


class FlattenStructureError(EngMetaError, ValueError):
    """Metadata block violates the simple/compound field structure."""
