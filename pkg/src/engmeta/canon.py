"""Canonical XML and JSON serialization with lossless round-trip.

Serialization is deterministic: elements appear in the order the schema
table declares, absent optional fields are omitted entirely (never emitted
as empty elements), decimals are rendered in plain notation without
trailing zeros, and repeated serialization of the same document is
byte-identical. Both writers refuse structurally invalid documents.

Parsing is forgiving about unknown content: unknown elements, attributes
and object keys are skipped and reported as warnings; only malformed input
and type-incompatible scalar text are hard errors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from xml.etree import ElementTree

from .errors import CanonDecodeError, CanonSyntaxError, CanonValidationError
from .model import (
    ATTRIBUTE,
    CHILD,
    CONTENT,
    NODE,
    NODE_LIST,
    ROOT_ELEMENT,
    SCALAR,
    SCALAR_LIST,
    TAGGED,
    EngMetaDataset,
    FieldSpec,
    SCALAR_TYPES_BY_NAME,
    scalar_to_text,
    scalar_type_name,
    schema,
)
from .validation import validate

# Documented home of the element vocabulary; not emitted on output, but
# accepted as a default namespace on input.
ENGMETA_NAMESPACE = "https://engmeta.example.org/ns/1.0"

_INDENT = "  "


@dataclass(frozen=True)
class ReadResult:
    """A parsed document plus non-fatal warnings gathered along the way."""

    dataset: EngMetaDataset
    warnings: tuple[str, ...]


# --- scalar text encoding/decoding ---------------------------------------

def _scalar_from_text(text: str, value_type, path: str):
    if value_type is str:
        return text
    stripped = text.strip()
    if value_type is int:
        if not _is_int_text(stripped):
            raise CanonDecodeError(f"{text!r} is not an integer", path)
        return int(stripped)
    if value_type is bool:
        if stripped == "true":
            return True
        if stripped == "false":
            return False
        raise CanonDecodeError(f"{text!r} is not a boolean ('true'/'false')", path)
    if value_type is Decimal:
        try:
            value = Decimal(stripped)
        except InvalidOperation:
            raise CanonDecodeError(f"{text!r} is not a decimal number", path) from None
        if not value.is_finite():
            raise CanonDecodeError(f"{text!r} is not a finite decimal", path)
        return value
    raise AssertionError(value_type)


def _is_int_text(text: str) -> bool:
    body = text[1:] if text[:1] in "+-" else text
    return body.isdigit()


def _tagged_from_text(text: str, type_name: str, path: str):
    value_type = SCALAR_TYPES_BY_NAME.get(type_name)
    if value_type is None:
        raise CanonDecodeError(f"unknown value type {type_name!r}", path)
    return _scalar_from_text(text, value_type, path)


# --- XML ------------------------------------------------------------------

def _escape_text(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace("\r", "&#13;")
    )


def _escape_attribute(text: str) -> str:
    return (
        _escape_text(text)
        .replace('"', "&quot;")
        .replace("\n", "&#10;")
        .replace("\t", "&#9;")
    )


def to_xml(dataset: EngMetaDataset) -> str:
    """Serialize to canonical XML; rejects structurally invalid documents."""
    report = validate(dataset, "structural")
    if report.errors:
        raise CanonValidationError(report.errors)
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    _write_element(lines, ROOT_ELEMENT, dataset, 0)
    return "\n".join(lines) + "\n"


def _write_element(lines: list[str], tag: str, node, depth: int) -> None:
    pad = _INDENT * depth
    attributes: list[str] = []
    content: str | None = None
    children: list[tuple[FieldSpec, object]] = []

    for spec in schema(type(node)):
        value = getattr(node, spec.attr)
        if value is None or value == ():
            continue
        if spec.placement == ATTRIBUTE:
            attributes.append(f' {spec.element}="{_escape_attribute(scalar_to_text(value))}"')
        elif spec.placement == CONTENT:
            content = scalar_to_text(value)
        else:
            children.append((spec, value))

    attr_text = "".join(attributes)
    if content is not None:
        lines.append(f"{pad}<{tag}{attr_text}>{_escape_text(content)}</{tag}>")
        return
    if not children:
        lines.append(f"{pad}<{tag}{attr_text}/>")
        return

    lines.append(f"{pad}<{tag}{attr_text}>")
    for spec, value in children:
        if spec.kind == SCALAR:
            _write_scalar_element(lines, spec, value, depth + 1)
        elif spec.kind == SCALAR_LIST:
            for item in value:
                _write_scalar_element(lines, spec, item, depth + 1)
        elif spec.kind == NODE:
            _write_element(lines, spec.element, value, depth + 1)
        else:
            for item in value:
                _write_element(lines, spec.element, item, depth + 1)
    lines.append(f"{pad}</{tag}>")


def _write_scalar_element(lines: list[str], spec: FieldSpec, value, depth: int) -> None:
    pad = _INDENT * depth
    attr_text = ""
    if spec.value_type is TAGGED:
        type_name = scalar_type_name(value)
        if type_name != "string":
            attr_text = f' type="{type_name}"'
    lines.append(
        f"{pad}<{spec.element}{attr_text}>{_escape_text(scalar_to_text(value))}</{spec.element}>"
    )


def from_xml(text: str) -> ReadResult:
    """Parse canonical XML; unknown elements become warnings, not errors."""
    try:
        root = ElementTree.fromstring(text)
    except ElementTree.ParseError as exc:
        line, column = exc.position
        raise CanonSyntaxError(f"not well-formed XML: {exc.msg}", line, column) from None
    warnings: list[str] = []
    if _local_name(root.tag) != ROOT_ELEMENT:
        raise CanonDecodeError(
            f"root element must be <{ROOT_ELEMENT}>, got <{root.tag}>", ROOT_ELEMENT
        )
    dataset = _decode_element(root, EngMetaDataset, "", warnings)
    return ReadResult(dataset, tuple(warnings))


def _local_name(tag: str) -> str | None:
    """Strip the namespace; foreign namespaces make the element unknown."""
    if not tag.startswith("{"):
        return tag
    uri, _, local = tag[1:].partition("}")
    if uri == ENGMETA_NAMESPACE:
        return local
    return None


def _decode_element(element, cls: type, path: str, warnings: list[str]):
    by_element = {spec.element: spec for spec in schema(cls)}
    kwargs: dict[str, object] = {}
    lists: dict[str, list] = {}
    label = path or ROOT_ELEMENT

    for name, raw in element.attrib.items():
        spec = by_element.get(name)
        if spec is None or spec.placement != ATTRIBUTE:
            warnings.append(f"{label}: unknown attribute {name!r} skipped")
            continue
        if raw == "":
            warnings.append(f"{label}: empty attribute {name!r} treated as absent")
            continue
        kwargs[spec.attr] = _scalar_from_text(raw, spec.value_type, f"{label}.{name}")

    content_spec = next((s for s in by_element.values() if s.placement == CONTENT), None)
    text = element.text or ""
    if content_spec is not None:
        if text != "":
            kwargs[content_spec.attr] = _scalar_from_text(
                text, content_spec.value_type, f"{label}.{content_spec.element}"
            )
    elif text.strip():
        warnings.append(f"{label}: stray text {text.strip()!r} skipped")

    counters: dict[str, int] = {}
    for child in element:
        if child.tail and child.tail.strip():
            warnings.append(f"{label}: stray text {child.tail.strip()!r} skipped")
        name = _local_name(child.tag)
        spec = by_element.get(name) if name is not None else None
        if spec is None or spec.placement != CHILD:
            shown = name if name is not None else child.tag
            warnings.append(f"{label}: unknown element <{shown}> skipped")
            continue
        index = counters.get(spec.element, 0)
        counters[spec.element] = index + 1
        child_path = f"{path}.{spec.element}" if path else spec.element
        if spec.kind in (SCALAR_LIST, NODE_LIST):
            child_path = f"{child_path}[{index}]"
        elif index > 0:
            warnings.append(f"{label}: repeated element <{spec.element}> skipped")
            continue

        if spec.kind in (SCALAR, SCALAR_LIST):
            value = _decode_scalar_child(child, spec, child_path, warnings)
            if value is None:
                continue
            if spec.kind == SCALAR:
                kwargs[spec.attr] = value
            else:
                lists.setdefault(spec.attr, []).append(value)
        else:
            node = _decode_element(child, spec.value_type, child_path, warnings)
            if spec.kind == NODE:
                kwargs[spec.attr] = node
            else:
                lists.setdefault(spec.attr, []).append(node)

    for attr, items in lists.items():
        kwargs[attr] = tuple(items)
    return cls(**kwargs)


def _decode_scalar_child(child, spec: FieldSpec, path: str, warnings: list[str]):
    if len(child):
        warnings.append(f"{path}: unexpected child elements skipped")
    text = child.text or ""
    if text == "":
        warnings.append(f"{path}: empty element treated as absent")
        return None
    if spec.value_type is TAGGED:
        return _tagged_from_text(text, child.get("type", "string"), path)
    return _scalar_from_text(text, spec.value_type, path)


# --- JSON -----------------------------------------------------------------

def to_json(dataset: EngMetaDataset) -> str:
    """Serialize to canonical JSON (same names and order as the XML form)."""
    report = validate(dataset, "structural")
    if report.errors:
        raise CanonValidationError(report.errors)
    obj = _node_to_obj(dataset)
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _node_to_obj(node) -> dict:
    obj: dict[str, object] = {}
    for spec in schema(type(node)):
        value = getattr(node, spec.attr)
        if value is None or value == ():
            continue
        if spec.kind == SCALAR:
            obj[spec.element] = _scalar_to_json(spec, value)
        elif spec.kind == SCALAR_LIST:
            obj[spec.element] = [_scalar_to_json(spec, item) for item in value]
        elif spec.kind == NODE:
            obj[spec.element] = _node_to_obj(value)
        else:
            obj[spec.element] = [_node_to_obj(item) for item in value]
    return obj


def _scalar_to_json(spec: FieldSpec, value):
    if spec.value_type is TAGGED:
        return {"type": scalar_type_name(value), "text": scalar_to_text(value)}
    if spec.value_type is Decimal:
        return scalar_to_text(value)
    return value


def from_json(text: str) -> ReadResult:
    """Parse canonical JSON; unknown keys become warnings, not errors."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CanonSyntaxError(f"not valid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise CanonDecodeError("document root must be a JSON object", ROOT_ELEMENT)
    warnings: list[str] = []
    dataset = _decode_obj(obj, EngMetaDataset, "", warnings)
    return ReadResult(dataset, tuple(warnings))


def _decode_obj(obj: dict, cls: type, path: str, warnings: list[str]):
    by_element = {spec.element: spec for spec in schema(cls)}
    kwargs: dict[str, object] = {}
    label = path or ROOT_ELEMENT

    for key, raw in obj.items():
        spec = by_element.get(key)
        if spec is None:
            warnings.append(f"{label}: unknown key {key!r} skipped")
            continue
        key_path = f"{path}.{key}" if path else key
        if spec.kind == SCALAR:
            kwargs[spec.attr] = _scalar_from_json(raw, spec, key_path)
        elif spec.kind == SCALAR_LIST:
            items = _expect_array(raw, key_path)
            kwargs[spec.attr] = tuple(
                _scalar_from_json(item, spec, f"{key_path}[{i}]") for i, item in enumerate(items)
            )
        elif spec.kind == NODE:
            kwargs[spec.attr] = _decode_obj(_expect_object(raw, key_path), spec.value_type, key_path, warnings)
        else:
            items = _expect_array(raw, key_path)
            kwargs[spec.attr] = tuple(
                _decode_obj(_expect_object(item, f"{key_path}[{i}]"), spec.value_type, f"{key_path}[{i}]", warnings)
                for i, item in enumerate(items)
            )
    return cls(**kwargs)


def _expect_array(raw, path: str) -> list:
    if not isinstance(raw, list):
        raise CanonDecodeError(f"expected an array, got {type(raw).__name__}", path)
    return raw


def _expect_object(raw, path: str) -> dict:
    if not isinstance(raw, dict):
        raise CanonDecodeError(f"expected an object, got {type(raw).__name__}", path)
    return raw


def _scalar_from_json(raw, spec: FieldSpec, path: str):
    if spec.value_type is TAGGED:
        tagged = _expect_object(raw, path)
        unknown = set(tagged) - {"type", "text"}
        if unknown or "text" not in tagged:
            raise CanonDecodeError("tagged value needs 'type' and 'text' keys", path)
        if not isinstance(tagged["text"], str):
            raise CanonDecodeError("tagged value 'text' must be a string", path)
        type_name = tagged.get("type", "string")
        if not isinstance(type_name, str):
            raise CanonDecodeError("tagged value 'type' must be a string", path)
        return _tagged_from_text(tagged["text"], type_name, path)
    if spec.value_type is str:
        if not isinstance(raw, str):
            raise CanonDecodeError(f"expected a string, got {type(raw).__name__}", path)
        return raw
    if spec.value_type is bool:
        if not isinstance(raw, bool):
            raise CanonDecodeError(f"expected a boolean, got {type(raw).__name__}", path)
        return raw
    if spec.value_type is int:
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise CanonDecodeError(f"expected an integer, got {type(raw).__name__}", path)
        return raw
    if spec.value_type is Decimal:
        if not isinstance(raw, str):
            raise CanonDecodeError(
                f"decimals are carried as strings, got {type(raw).__name__}", path
            )
        return _scalar_from_text(raw, Decimal, path)
    raise AssertionError(spec.value_type)
