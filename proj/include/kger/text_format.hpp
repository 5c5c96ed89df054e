#pragma once

// Concrete textual syntax for schemas (one statement per line, mirroring the
// statement notation) and the JSON-based graph interchange format.

#include "kger/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kger {

struct ParseError {
    std::size_t line = 1;   // 1-based
    std::size_t column = 1; // 1-based
    std::string expected;
    std::string found;

    std::string message() const;
};

struct SchemaParseResult {
    std::optional<Schema> schema; // set iff no parse errors and no build errors
    std::vector<ParseError> parseErrors;
    std::vector<Diagnostic> buildDiagnostics; // from buildSchema

    bool ok() const { return schema.has_value(); }
};

// Parses a whole schema document. Malformed lines produce one ParseError each
// and parsing continues; name checks are delegated to buildSchema.
SchemaParseResult parseSchema(const std::string& source);

// Parses a single pattern term, e.g. "msg(author(fname, lname))".
// Returns std::nullopt and fills `error` on failure.
std::optional<Pattern> parsePattern(const std::string& source, ParseError& error);

// Canonical text: shape statements sorted Entity, Relationship, Attribute,
// Role (each alphabetical), then constraints grouped by kind. Reparsing the
// output yields an equal schema.
std::string serializeSchema(const Schema& schema);

struct GraphLoadResult {
    std::optional<KnowledgeGraph> graph;
    std::vector<Diagnostic> diagnostics; // GRAPH-SYNTAX, GRAPH-UNKNOWN-NAME,
                                         // GRAPH-ID-CLASH, GRAPH-BAD-REF

    bool ok() const { return graph.has_value(); }
};

// Loads the JSON graph format against a schema vocabulary (closed world):
// top-level keys `entities`, `relationships`, `attributes`, `roles`.
GraphLoadResult loadGraph(const std::string& source, const Schema& schema);

// The inverse of loadGraph, used by tooling and tests.
std::string serializeGraph(const KnowledgeGraph& graph);

} // namespace kger
