import pytest

from engmeta.errors import ConfigError
from engmeta.extract import parse_config

MINIMAL = """
[rule nsteps]
target = system.temporalResolution.numberOfTimesteps
source = *.mdp
key = nsteps
type = integer
"""


def test_minimal_rule_gets_defaults():
    config = parse_config(MINIMAL)
    assert len(config.rules) == 1
    rule = config.rules[0]
    assert rule.id == "nsteps"
    assert rule.delimiter == "="
    assert rule.occurrence == "first"
    assert rule.valueType == "integer"
    assert str(rule.target) == "system.temporalResolution.numberOfTimesteps"


def test_empty_config_is_valid():
    assert parse_config("").rules == ()
    assert parse_config("# only comments\n\n").rules == ()


def test_duplicate_rule_id_names_both_lines():
    text = MINIMAL + "\n[rule nsteps]\ntarget = project\nsource = *.txt\nkey = p\n"
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert "line 2" in str(excinfo.value)
    assert excinfo.value.line == 8


def test_unknown_field_rejected_with_line():
    text = MINIMAL + "flavor = vanilla\n"
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert excinfo.value.line == 7


def test_missing_mandatory_field_rejected():
    text = "[rule broken]\nsource = *.log\nkey = K\n"
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert "target" in str(excinfo.value)


def test_bad_target_path_rejected():
    text = "[rule broken]\ntarget = system.unknownThing\nsource = *.log\nkey = K\n"
    with pytest.raises(ConfigError):
        parse_config(text)


def test_non_scalar_target_rejected():
    text = "[rule broken]\ntarget = system\nsource = *.log\nkey = K\n"
    with pytest.raises(ConfigError):
        parse_config(text)


def test_open_list_needs_all_or_group():
    text = "[rule broken]\ntarget = keyword\nsource = *.txt\nkey = K\n"
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert "occurrence=all" in str(excinfo.value)


def test_occurrence_all_allows_open_list():
    text = "[rule kw]\ntarget = keyword\nsource = *.txt\nkey = K\noccurrence = all\n"
    config = parse_config(text)
    assert config.rules[0].shape.open_segment == 0


def test_grouped_rules_must_share_the_open_list():
    text = """
[rule name]
target = system.controlledVariables.name
source = *.mdp
key = N
group = g

[rule value]
target = system.measuredVariables.value
source = *.mdp
key = V
group = g
"""
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert "different lists" in str(excinfo.value)


def test_unit_requires_variable_target():
    text = "[rule r]\ntarget = project\nsource = *.txt\nkey = K\nunit = nm\n"
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert "unit" in str(excinfo.value)


def test_duplicate_field_rejected():
    text = MINIMAL + "key = again\n"
    with pytest.raises(ConfigError):
        parse_config(text)


def test_empty_delimiter_rejected():
    text = "[rule r]\ntarget = project\nsource = *.txt\nkey = K\ndelimiter =\n"
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert "delimiter" in str(excinfo.value)


def test_value_taken_verbatim_after_first_equals():
    text = "[rule r]\ntarget = project\nsource = *.txt\nkey = K\ndelimiter = =\n"
    config = parse_config(text)
    assert config.rules[0].delimiter == "="


def test_field_before_header_rejected():
    with pytest.raises(ConfigError) as excinfo:
        parse_config("target = project\n")
    assert excinfo.value.line == 1


def test_declaration_order_preserved(rules_path):
    config = parse_config(rules_path.read_text())
    assert len(config.rules) == 25
    assert config.rules[0].id == "title"
    assert config.rules[-1].id == "nodes"
    grouped = [rule.id for rule in config.rules if rule.group]
    assert grouped == ["param-name", "param-value", "ctrl-name", "ctrl-value"]
    assert sum(1 for rule in config.rules if rule.occurrence == "all") == 1
