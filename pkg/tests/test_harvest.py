import os
import random
import shutil
import subprocess

import pytest

from engmeta.harvest import harvest
from engmeta.validation import validate

SHA256_EMPTY = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


def test_empty_directory_gives_empty_listing(tmp_path):
    result = harvest(tmp_path)
    assert result.files == ()
    assert result.errors == ()


def test_zero_byte_file_matches_known_empty_digest(tmp_path):
    (tmp_path / "empty.bin").write_bytes(b"")
    result = harvest(tmp_path, "SHA-256")
    assert result.files[0].checksum.digest == SHA256_EMPTY


def test_size_and_extension(tmp_path):
    (tmp_path / "a.log").write_bytes(b"hello")
    result = harvest(tmp_path)
    info = result.files[0]
    assert info.filename == "a.log"
    assert info.sizeBytes == 5
    assert info.fileType == "log"


def test_extensionless_and_hidden_files(tmp_path):
    (tmp_path / "Makefile").write_text("all:\n")
    (tmp_path / ".hidden").write_text("x")
    result = harvest(tmp_path)
    assert [info.filename for info in result.files] == [".hidden", "Makefile"]
    assert result.files[0].fileType is None
    assert result.files[1].fileType is None


def test_listing_sorted_by_relative_path(tmp_path):
    (tmp_path / "b").mkdir()
    (tmp_path / "a").mkdir()
    (tmp_path / "b" / "one.txt").write_text("1")
    (tmp_path / "a" / "two.txt").write_text("2")
    (tmp_path / "zzz.txt").write_text("3")
    result = harvest(tmp_path)
    assert [info.filename for info in result.files] == ["a/two.txt", "b/one.txt", "zzz.txt"]


def test_symlinks_not_followed(tmp_path):
    (tmp_path / "real.txt").write_text("data")
    os.symlink(tmp_path / "real.txt", tmp_path / "alias.txt")
    result = harvest(tmp_path)
    assert [info.filename for info in result.files] == ["real.txt"]


def test_checksums_match_independent_oracle(tmp_path):
    """20 random files checked against the coreutils checksum tools."""
    rng = random.Random(42)
    paths = []
    for i in range(20):
        path = tmp_path / f"blob-{i:02d}.bin"
        path.write_bytes(rng.randbytes(rng.randint(0, 65536)))
        paths.append(path)

    for algorithm, tool in (("SHA-256", "sha256sum"), ("MD5", "md5sum")):
        if shutil.which(tool) is None:
            pytest.skip(f"{tool} not available")
        result = harvest(tmp_path, algorithm)
        assert len(result.files) == 20
        for info in result.files:
            output = subprocess.run(
                [tool, str(tmp_path / info.filename)],
                capture_output=True, text=True, check=True,
            ).stdout
            assert info.checksum.digest == output.split()[0]
            assert info.checksum.algorithm == algorithm


def test_repeated_harvest_is_stable(tmp_path):
    (tmp_path / "x.dat").write_bytes(b"abc")
    (tmp_path / "y.dat").write_bytes(b"def")
    assert harvest(tmp_path) == harvest(tmp_path)


def test_result_dataset_is_structurally_valid(tmp_path):
    (tmp_path / "numbers.csv").write_text("1,2,3\n")
    dataset = harvest(tmp_path).to_dataset()
    assert validate(dataset, "structural").ok


def test_unknown_algorithm_rejected(tmp_path):
    with pytest.raises(ValueError):
        harvest(tmp_path, "SHA-1")


def test_missing_root_rejected(tmp_path):
    with pytest.raises(NotADirectoryError):
        harvest(tmp_path / "nowhere")


def test_unreadable_file_flagged_run_continues(tmp_path):
    if os.geteuid() == 0:
        pytest.skip("file permissions do not bind as root")
    good = tmp_path / "good.txt"
    good.write_text("fine")
    bad = tmp_path / "bad.txt"
    bad.write_text("secret")
    bad.chmod(0)
    try:
        result = harvest(tmp_path)
        assert [e.path for e in result.errors] == ["bad.txt"]
        assert any(info.filename == "good.txt" and info.checksum for info in result.files)
    finally:
        bad.chmod(0o644)
