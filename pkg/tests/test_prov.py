import pytest

from engmeta.errors import ProvError
from engmeta.model import EngMetaDataset, FileRef, ProcessingStep
from engmeta.prov import ProvDocument, Relation, serialize_prov_n, to_prov


def relations_of(doc, relation_type):
    return [r for r in doc.relations if r.type == relation_type]


def test_empty_dataset_gives_empty_document():
    doc = to_prov(EngMetaDataset())
    assert doc == ProvDocument()
    assert serialize_prov_n(doc) == "document\nendDocument\n"


def test_one_activity_per_step(gromacs_doc):
    doc = to_prov(gromacs_doc)
    assert len(doc.activities) == 3
    assert [a.id for a in doc.activities] == ["act_0", "act_1", "act_2"]
    assert [a.stepType for a in doc.activities] == [
        "data generation",
        "post processing",
        "analysis",
    ]
    assert doc.activities[0].date == "2019-05-24T18:30:00"


def test_minimal_step_counts():
    doc = to_prov(
        EngMetaDataset(
            processingSteps=(
                ProcessingStep(
                    inputs=(FileRef(name="in.dat"),),
                    outputs=(FileRef(name="out.dat"),),
                ),
            )
        )
    )
    assert len(doc.activities) == 1
    assert len(doc.entities) == 2
    assert len(doc.agents) == 0
    assert len(relations_of(doc, "used")) == 1
    assert len(relations_of(doc, "wasGeneratedBy")) == 1
    assert len(relations_of(doc, "wasAssociatedWith")) == 0


def test_trajectory_files_chain_steps(gromacs_doc):
    doc = to_prov(gromacs_doc)
    by_label = {}
    for entity in doc.entities:
        if entity.kind == "file":
            by_label.setdefault(entity.label, []).append(entity)
    # output of step 1 and input of step 2 are one entity
    assert len(by_label["traj.trr"]) == 1
    traj = by_label["traj.trr"][0]
    assert Relation("wasGeneratedBy", traj.id, "act_0") in doc.relations
    assert Relation("used", "act_1", traj.id) in doc.relations


def test_step_one_used_edges(gromacs_doc):
    doc = to_prov(gromacs_doc)
    used_by_first = [r.object for r in doc.relations if r.type == "used" and r.subject == "act_0"]
    # 2 input files + method + software + environment + execution command
    assert len(used_by_first) == 6
    kinds = {next(e.kind for e in doc.entities if e.id == object_id) for object_id in used_by_first}
    assert kinds == {"file", "method", "software", "environment", "executionCommand"}


def test_agents_deduplicate_across_steps(gromacs_doc):
    doc = to_prov(gromacs_doc)
    assert len(doc.agents) == 1  # same researcher on all three steps
    associations = relations_of(doc, "wasAssociatedWith")
    assert {r.subject for r in associations} == {"act_0", "act_1", "act_2"}
    assert len({r.object for r in associations}) == 1


def test_error_method_is_separate_kind(gromacs_doc):
    doc = to_prov(gromacs_doc)
    kinds = {e.kind for e in doc.entities}
    assert "errorMethod" in kinds


def test_file_identity_prefers_pid_then_link():
    step = ProcessingStep(
        outputs=(FileRef(name="a.dat", pid="10.1/x"),),
    )
    later = ProcessingStep(
        inputs=(FileRef(name="renamed.dat", pid="10.1/x"),),
    )
    doc = to_prov(EngMetaDataset(processingSteps=(step, later)))
    assert len([e for e in doc.entities if e.kind == "file"]) == 1


def test_serialization_is_deterministic(gromacs_doc):
    doc = to_prov(gromacs_doc)
    assert serialize_prov_n(doc) == serialize_prov_n(to_prov(gromacs_doc))


def test_prov_n_statement_shapes(gromacs_doc):
    text = serialize_prov_n(to_prov(gromacs_doc))
    lines = text.splitlines()
    assert lines[0] == "document"
    assert lines[-1] == "endDocument"
    assert lines[1].startswith("prefix ex <")
    assert any(
        line.startswith("activity(ex:act_0, -, 2019-05-24T18:30:00, [ex:stepType=")
        for line in lines
    )
    assert any(line.startswith("agent(ex:agent_") and 'prov:label="Jane Researcher"' in line for line in lines)
    assert any(line.startswith("used(ex:act_0, ex:") for line in lines)
    assert any(line.startswith("wasGeneratedBy(ex:file_") for line in lines)


def test_prov_n_statement_counts_match_document(gromacs_doc):
    doc = to_prov(gromacs_doc)
    lines = serialize_prov_n(doc).splitlines()
    statements = [line for line in lines if "(" in line]
    expected = len(doc.activities) + len(doc.agents) + len(doc.entities) + len(doc.relations)
    assert len(statements) == expected


def test_date_only_attribute_when_not_datetime():
    doc = to_prov(
        EngMetaDataset(processingSteps=(ProcessingStep(stepType="analysis", date="2019-05-24"),))
    )
    text = serialize_prov_n(doc)
    # plain dates stay attributes and do not fill the end-time slot
    assert "activity(ex:act_0, -, -, [" in text
    assert 'ex:date="2019-05-24"' in text


def test_dates_reproduce_step_order(gromacs_doc):
    doc = to_prov(gromacs_doc)
    dated = [(a.date, a.id) for a in doc.activities]
    assert all(date is not None for date, _ in dated)
    assert sorted(dated) == dated  # strictly increasing dates keep step order


def test_dangling_relation_rejected():
    doc = ProvDocument(relations=(Relation("used", "act_0", "file_missing"),))
    with pytest.raises(ProvError):
        serialize_prov_n(doc)


def test_quotes_escaped_in_labels():
    step = ProcessingStep(executionCommand='run --tag "final"')
    text = serialize_prov_n(to_prov(EngMetaDataset(processingSteps=(step,))))
    assert '\\"final\\"' in text
