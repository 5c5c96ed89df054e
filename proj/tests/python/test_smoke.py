"""Smoke tests for the _kger extension module."""

import os

import pytest

import _kger

FIXTURES = os.environ.get(
    "KGER_FIXTURES",
    os.path.join(os.path.dirname(__file__), os.pardir, "fixtures"),
)


def read_fixture(name):
    with open(os.path.join(FIXTURES, name), encoding="utf-8") as handle:
        return handle.read()


@pytest.fixture(scope="module")
def schema():
    return _kger.parse_schema(read_fixture("running_example.kger"))


@pytest.fixture(scope="module")
def graph(schema):
    return _kger.load_graph(read_fixture("g0.json"), schema)


def test_parse_and_well_formed(schema):
    assert schema.check_well_formed() == []
    reparsed = _kger.parse_schema(schema.serialize())
    assert reparsed == schema


def test_parse_errors_raise():
    with pytest.raises(ValueError):
        _kger.parse_schema("Entity(")


def test_validate_core_conforms(schema, graph):
    report = _kger.validate_core(schema, graph)
    assert report["conforms"] is True
    assert report["semantics"] == "core"
    assert report["stats"]["entityInstances"] == 4


def test_validate_implicit(schema, graph):
    report = _kger.validate_implicit_disjointness(schema, graph)
    assert report["conforms"] is True
    assert report["semantics"] == "implicit-disjointness"


def test_eval_pattern(schema, graph):
    tuples = _kger.eval_pattern(
        schema, graph, "Message", "msg(author(fname, lname))", "m1"
    )
    assert tuples == [("Ada", "Lovelace")]


def test_emitters(schema):
    sql, unexpressed = _kger.emit_sql(schema)
    assert "CREATE TABLE University(" in sql
    assert unexpressed == []

    shacl, shacl_gaps = _kger.emit_shacl(schema)
    assert "ex:NameTargetShape" in shacl
    assert any("Identity(Person" in d["subject"] for d in shacl_gaps)

    shex, _ = _kger.emit_shex(schema)
    assert "ex:email xsd:string*" in shex

    pg, _ = _kger.emit_pg_schema(schema)
    assert "MANDATORY SINGLETON w" in pg

    assert _kger.emit_dot(schema).startswith("digraph schema {")


def test_verbalize():
    schema = _kger.parse_schema(read_fixture("employee_department.kger"))
    text = _kger.verbalize(schema)
    assert "'Employment' is an relationship." in text
    assert (
        "Every instance of the entity 'Employee' participates in one or more "
        "instances of the relationship 'Employment' through the role 'works_in'."
        in text
    )
