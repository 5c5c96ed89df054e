"""KG-ER conceptual schema toolkit."""

from ._kger import (
    KnowledgeGraph,
    Schema,
    check_well_formed,
    emit_dot,
    emit_pg_schema,
    emit_shacl,
    emit_shex,
    emit_sql,
    eval_pattern,
    load_graph,
    parse_schema,
    serialize_schema,
    validate_core,
    validate_implicit_disjointness,
    verbalize,
)

__all__ = [
    "KnowledgeGraph",
    "Schema",
    "check_well_formed",
    "emit_dot",
    "emit_pg_schema",
    "emit_shacl",
    "emit_shex",
    "emit_sql",
    "eval_pattern",
    "load_graph",
    "parse_schema",
    "serialize_schema",
    "validate_core",
    "validate_implicit_disjointness",
    "verbalize",
]
