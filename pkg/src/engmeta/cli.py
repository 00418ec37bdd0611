"""Command-line interface.

Subcommands tie the library together: ``extract`` runs the config-driven
scanner over a directory tree, ``validate`` checks a document against a
profile, ``to-prov`` emits PROV-N provenance, ``to-dataverse`` emits the
repository block JSON and ``harvest`` collects technical file metadata.

Payload goes to standard output (or --out); everything informational goes
to standard error. Exit codes: 0 success, 1 validation errors found,
2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import canon
from .errors import CanonError, ConfigError, EngMetaError, ExtractionRootError
from .extract import extract as run_extract
from .extract import parse_config
from .flatten import flatten, serialize_blocks_json
from .harvest import harvest as run_harvest
from .merging import merge
from .model import EngMetaDataset
from .prov import serialize_prov_n, to_prov
from .validation import validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_IO = 3

_ALGORITHM_CODES = {"md5": "MD5", "sha256": "SHA-256"}


def _info(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(payload: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(payload)
    else:
        Path(out).write_text(payload, encoding="utf-8")


def _read_document(path: str) -> EngMetaDataset:
    """Load a document from XML or JSON, sniffing the format."""
    text = Path(path).read_text(encoding="utf-8")
    result = canon.from_xml(text) if text.lstrip().startswith("<") else canon.from_json(text)
    for warning in result.warnings:
        _info(f"warning: {path}: {warning}")
    return result.dataset


def _serialize(dataset: EngMetaDataset, fmt: str) -> str:
    return canon.to_xml(dataset) if fmt == "xml" else canon.to_json(dataset)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="engmeta",
        description="Metadata tooling for computational-engineering research data.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("extract", help="extract metadata from files under a directory")
    cmd.add_argument("--config", required=True, help="extraction rule file")
    cmd.add_argument("--root", required=True, help="directory tree to scan")
    cmd.add_argument("--mode", choices=["serial", "parallel"], default="serial")
    cmd.add_argument("--format", choices=["xml", "json"], default="xml")
    cmd.add_argument("--out", help="write the document here instead of stdout")
    cmd.add_argument("--report", help="write the extraction report (JSON) here")

    cmd = commands.add_parser("validate", help="validate a metadata document")
    cmd.add_argument("--in", dest="infile", required=True, help="document (XML or JSON)")
    cmd.add_argument("--profile", choices=["structural", "citable"], default="structural")

    cmd = commands.add_parser("to-prov", help="convert processing steps to PROV-N")
    cmd.add_argument("--in", dest="infile", required=True)
    cmd.add_argument("--out")

    cmd = commands.add_parser("to-dataverse", help="flatten into repository metadata blocks")
    cmd.add_argument("--in", dest="infile", required=True)
    cmd.add_argument("--out")

    cmd = commands.add_parser("harvest", help="collect technical metadata from files")
    cmd.add_argument("--root", required=True)
    cmd.add_argument("--algorithm", choices=sorted(_ALGORITHM_CODES), default="sha256")
    cmd.add_argument("--merge-into", dest="merge_into", help="merge the listing into this document")
    cmd.add_argument("--format", choices=["xml", "json"], default="xml")
    cmd.add_argument("--out")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK

    try:
        if args.command == "extract":
            return _cmd_extract(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "to-prov":
            return _cmd_to_prov(args)
        if args.command == "to-dataverse":
            return _cmd_to_dataverse(args)
        if args.command == "harvest":
            return _cmd_harvest(args)
        raise AssertionError(args.command)
    except ConfigError as exc:
        _info(f"error: config: {exc}")
        return EXIT_USAGE
    except CanonError as exc:
        _info(f"error: {exc}")
        return EXIT_INVALID
    except (ExtractionRootError, NotADirectoryError, OSError) as exc:
        _info(f"error: {exc}")
        return EXIT_IO
    except EngMetaError as exc:
        _info(f"error: {exc}")
        return EXIT_USAGE


def _cmd_extract(args) -> int:
    config = parse_config(Path(args.config).read_text(encoding="utf-8"))
    dataset, report = run_extract(args.root, config, mode=args.mode)
    _emit(_serialize(dataset, args.format), args.out)
    if args.report is not None:
        Path(args.report).write_text(
            json.dumps(report.to_obj(), indent=2) + "\n", encoding="utf-8"
        )
    for warning in report.warnings:
        _info(f"warning: {warning}")
    _info(
        f"extract: {report.filesScanned} files, {len(report.rulesMatched)} of "
        f"{len(report.rulesMatched) + len(report.rulesUnmatched)} rules matched, "
        f"{len(report.conflicts)} conflicts, "
        f"{len(report.coercionFailures)} coercion failures"
    )
    return EXIT_OK


def _cmd_validate(args) -> int:
    dataset = _read_document(args.infile)
    report = validate(dataset, args.profile)
    for finding in report.findings:
        _info(f"{finding.severity}: {finding.path}: {finding.message}")
    payload = {
        "profile": report.profile,
        "findings": [
            {"severity": f.severity, "path": f.path, "message": f.message}
            for f in report.findings
        ],
        "valid": report.ok,
    }
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    _info(f"validate: {len(report.errors)} errors, {len(report.warnings)} warnings")
    return EXIT_OK if report.ok else EXIT_INVALID


def _cmd_to_prov(args) -> int:
    dataset = _read_document(args.infile)
    _emit(serialize_prov_n(to_prov(dataset)), args.out)
    return EXIT_OK


def _cmd_to_dataverse(args) -> int:
    dataset = _read_document(args.infile)
    blocks, report = flatten(dataset)
    _emit(serialize_blocks_json(blocks, report), args.out)
    return EXIT_OK


def _cmd_harvest(args) -> int:
    result = run_harvest(args.root, _ALGORITHM_CODES[args.algorithm])
    for error in result.errors:
        _info(f"warning: {error.path}: {error.message}")
    dataset = result.to_dataset()
    if args.merge_into:
        base = _read_document(args.merge_into)
        dataset, conflicts = merge(base, dataset, "first-wins")
        for conflict in conflicts:
            _info(f"conflict: {conflict.path}: kept {conflict.chosen!r}")
    _emit(_serialize(dataset, args.format), args.out)
    _info(f"harvest: {len(result.files)} files, {len(result.errors)} errors")
    return EXIT_OK


def run() -> None:
    sys.exit(main())
