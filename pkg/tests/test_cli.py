import json

import pytest

from engmeta.canon import from_xml, to_xml
from engmeta.cli import main
from corpus_expected import expected_corpus_dataset


@pytest.fixture()
def empty_xml(tmp_path):
    path = tmp_path / "empty.xml"
    path.write_text('<?xml version="1.0" encoding="UTF-8"?>\n<engMeta/>\n')
    return path


def test_validate_citable_empty_document(empty_xml, capsys):
    code = main(["validate", "--in", str(empty_xml), "--profile", "citable"])
    captured = capsys.readouterr()
    assert code == 1
    findings = [line for line in captured.err.splitlines() if line.startswith("error:")]
    assert len(findings) == 4
    payload = json.loads(captured.out)
    assert payload["valid"] is False
    assert len(payload["findings"]) == 4


def test_validate_structural_empty_document(empty_xml, capsys):
    code = main(["validate", "--in", str(empty_xml)])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["valid"] is True


def test_extract_then_to_prov(tmp_path, corpus_dir, rules_path, capsys):
    out = tmp_path / "doc.xml"
    code = main([
        "extract", "--config", str(rules_path), "--root", str(corpus_dir),
        "--out", str(out),
    ])
    assert code == 0
    capsys.readouterr()

    code = main(["to-prov", "--in", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out.count("activity(") == 1  # production-run rules: one step
    assert "endDocument" in captured.out


def test_extract_step_chain_then_to_prov(tmp_path, corpus_dir, steps_rules_path, capsys):
    """The stage logs document the full three-step process chain."""
    out = tmp_path / "steps.xml"
    assert main([
        "extract", "--config", str(steps_rules_path), "--root", str(corpus_dir),
        "--out", str(out),
    ]) == 0
    capsys.readouterr()

    assert main(["to-prov", "--in", str(out)]) == 0
    captured = capsys.readouterr()
    assert captured.out.count("activity(") == 3
    assert 'ex:stepType="data generation"' in captured.out
    assert 'ex:stepType="post processing"' in captured.out
    assert 'ex:stepType="analysis"' in captured.out


def test_extract_report_written(tmp_path, corpus_dir, rules_path, capsys):
    out = tmp_path / "doc.xml"
    report_path = tmp_path / "report.json"
    code = main([
        "extract", "--config", str(rules_path), "--root", str(corpus_dir),
        "--out", str(out), "--report", str(report_path), "--mode", "parallel",
    ])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["filesScanned"] == 5
    assert report["rulesUnmatched"] == []
    capsys.readouterr()


def test_pipe_composability(tmp_path, corpus_dir, rules_path, capsys):
    """extract output is accepted unchanged by validate, to-prov, to-dataverse."""
    doc_path = tmp_path / "doc.xml"
    assert main([
        "extract", "--config", str(rules_path), "--root", str(corpus_dir),
        "--out", str(doc_path),
    ]) == 0
    capsys.readouterr()

    assert main(["validate", "--in", str(doc_path)]) == 0
    capsys.readouterr()
    assert main(["to-prov", "--in", str(doc_path)]) == 0
    capsys.readouterr()
    assert main(["to-dataverse", "--in", str(doc_path)]) == 0
    blocks = json.loads(capsys.readouterr().out)
    assert set(blocks) == {"citation", "process", "engMeta", "_flattenReport"}


def test_extract_output_matches_library(tmp_path, corpus_dir, rules_path, capsys):
    assert main([
        "extract", "--config", str(rules_path), "--root", str(corpus_dir),
    ]) == 0
    captured = capsys.readouterr()
    assert captured.out == to_xml(expected_corpus_dataset())


def test_extract_json_format(tmp_path, corpus_dir, rules_path, capsys):
    assert main([
        "extract", "--config", str(rules_path), "--root", str(corpus_dir),
        "--format", "json",
    ]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["project"] == "HostGuestMD"


def test_harvest_empty_directory(tmp_path, capsys):
    empty = tmp_path / "emptydir"
    empty.mkdir()
    code = main(["harvest", "--root", str(empty)])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == '<?xml version="1.0" encoding="UTF-8"?>\n<engMeta/>\n'


def test_harvest_lists_files(tmp_path, capsys):
    (tmp_path / "a.log").write_bytes(b"hello")
    code = main(["harvest", "--root", str(tmp_path), "--algorithm", "md5"])
    captured = capsys.readouterr()
    assert code == 0
    dataset = from_xml(captured.out).dataset
    assert dataset.files[0].filename == "a.log"
    assert dataset.files[0].checksum.algorithm == "MD5"


def test_harvest_merge_into(tmp_path, corpus_dir, rules_path, capsys):
    doc_path = tmp_path / "doc.xml"
    assert main([
        "extract", "--config", str(rules_path), "--root", str(corpus_dir),
        "--out", str(doc_path),
    ]) == 0
    capsys.readouterr()

    data_dir = tmp_path / "data"
    data_dir.mkdir()
    (data_dir / "traj.trr").write_bytes(b"binary-ish")
    code = main([
        "harvest", "--root", str(data_dir), "--merge-into", str(doc_path),
    ])
    captured = capsys.readouterr()
    assert code == 0
    merged = from_xml(captured.out).dataset
    assert merged.project == "HostGuestMD"  # base document kept
    assert [info.filename for info in merged.files] == ["traj.trr"]


def test_harvest_merge_equals_library_merge(tmp_path, empty_xml, capsys):
    from engmeta.harvest import harvest
    from engmeta.merging import merge
    from engmeta.model import EngMetaDataset

    (tmp_path / "x.bin").write_bytes(b"1234")
    assert main([
        "harvest", "--root", str(tmp_path), "--merge-into", str(empty_xml),
    ]) == 0
    captured = capsys.readouterr()
    expected, _ = merge(EngMetaDataset(), harvest(tmp_path).to_dataset(), "first-wins")
    assert from_xml(captured.out).dataset == expected


def test_unknown_flag_is_usage_error(capsys):
    assert main(["extract", "--nope"]) == 2
    assert main(["no-such-command"]) == 2
    capsys.readouterr()


def test_missing_input_file_is_io_error(tmp_path, capsys):
    assert main(["validate", "--in", str(tmp_path / "gone.xml")]) == 3
    capsys.readouterr()


def test_missing_root_is_io_error(tmp_path, rules_path, capsys):
    config = rules_path
    assert main([
        "extract", "--config", str(config), "--root", str(tmp_path / "gone"),
    ]) == 3
    capsys.readouterr()


def test_bad_config_is_usage_error(tmp_path, corpus_dir, capsys):
    bad = tmp_path / "bad.conf"
    bad.write_text("[rule x]\nsource = *\nkey = K\n")  # missing target
    assert main(["extract", "--config", str(bad), "--root", str(corpus_dir)]) == 2
    capsys.readouterr()


def test_malformed_document_is_validation_error(tmp_path, capsys):
    path = tmp_path / "broken.xml"
    path.write_text("<engMeta><title>oops</engMeta>")
    assert main(["validate", "--in", str(path)]) == 1
    capsys.readouterr()


def test_json_documents_accepted(tmp_path, capsys):
    path = tmp_path / "doc.json"
    path.write_text('{"project": "DiplIng"}\n')
    assert main(["validate", "--in", str(path)]) == 0
    capsys.readouterr()


def test_repeated_runs_identical(tmp_path, corpus_dir, rules_path, capsys):
    args = ["extract", "--config", str(rules_path), "--root", str(corpus_dir)]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert first == second
