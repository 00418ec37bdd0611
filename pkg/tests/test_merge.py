from decimal import Decimal

import pytest

from engmeta.merging import merge
from engmeta.model import (
    EngMetaDataset,
    ObservedSystem,
    TemporalResolution,
    Title,
    Variable,
)
from genmodel import dataset_pool


def test_identical_titles_deduplicate():
    base = EngMetaDataset(titles=(Title(text="A"),))
    overlay = EngMetaDataset(titles=(Title(text="A"),))
    merged, conflicts = merge(base, overlay, "first-wins")
    assert merged.titles == (Title(text="A"),)
    assert conflicts == []


def test_differing_titles_concatenate():
    base = EngMetaDataset(titles=(Title(text="A"),))
    overlay = EngMetaDataset(titles=(Title(text="B"),))
    merged, conflicts = merge(base, overlay, "first-wins")
    assert [t.text for t in merged.titles] == ["A", "B"]
    assert conflicts == []


def test_scalar_conflict_first_wins():
    base = EngMetaDataset(project="run-1")
    overlay = EngMetaDataset(project="run-2")
    merged, conflicts = merge(base, overlay, "first-wins")
    assert merged.project == "run-1"
    assert len(conflicts) == 1
    conflict = conflicts[0]
    assert (conflict.path, conflict.base, conflict.overlay, conflict.chosen) == (
        "project", "run-1", "run-2", "run-1",
    )


def test_scalar_conflict_overlay_wins():
    base = EngMetaDataset(project="run-1")
    overlay = EngMetaDataset(project="run-2")
    merged, conflicts = merge(base, overlay, "overlay-wins")
    assert merged.project == "run-2"
    assert conflicts[0].chosen == "run-2"


def test_nested_scalar_conflict_path():
    base = EngMetaDataset(
        system=ObservedSystem(temporalResolution=TemporalResolution(numberOfTimesteps=100))
    )
    overlay = EngMetaDataset(
        system=ObservedSystem(temporalResolution=TemporalResolution(numberOfTimesteps=200))
    )
    merged, conflicts = merge(base, overlay, "first-wins")
    assert merged.system.temporalResolution.numberOfTimesteps == 100
    assert conflicts[0].path == "system.temporalResolution.numberOfTimesteps"


def test_merge_with_empty_is_identity():
    doc = EngMetaDataset(project="x", titles=(Title(text="T"),))
    empty = EngMetaDataset()
    assert merge(empty, doc, "first-wins") == (doc, [])
    assert merge(doc, empty, "first-wins") == (doc, [])
    assert merge(empty, doc, "overlay-wins") == (doc, [])


def test_unknown_policy_rejected():
    with pytest.raises(ValueError):
        merge(EngMetaDataset(), EngMetaDataset(), "newest-wins")


def test_merge_idempotent_on_random_documents():
    for doc in dataset_pool(100, seed=7):
        for policy in ("first-wins", "overlay-wins"):
            merged, conflicts = merge(doc, doc, policy)
            assert merged == doc
            assert conflicts == []


def test_merge_empty_identity_on_random_documents():
    empty = EngMetaDataset()
    for doc in dataset_pool(100, seed=11):
        for policy in ("first-wins", "overlay-wins"):
            assert merge(empty, doc, policy) == (doc, [])
            assert merge(doc, empty, policy) == (doc, [])


def test_merge_type_strict_scalars_conflict():
    base = EngMetaDataset(
        system=ObservedSystem(parameters=(Variable(name="n", value=300),))
    )
    overlay = EngMetaDataset(
        system=ObservedSystem(parameters=(Variable(name="n", value=Decimal("300")),))
    )
    merged, conflicts = merge(base, overlay, "first-wins")
    # int 300 and decimal 300 are different list entries, not a conflict
    assert len(merged.system.parameters) == 2
    assert conflicts == []
