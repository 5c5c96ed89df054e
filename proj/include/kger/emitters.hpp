#pragma once

// Schema compilers: SQL DDL, SHACL, ShEx, PG-Schema, DOT diagrams, and
// natural-language verbalization. Each compiler reports the constraints its
// target formalism could not express; nothing is silently dropped.

#include "kger/core.hpp"

#include <string>
#include <vector>

namespace kger {

struct EmitterOutput {
    std::string artifact;
    // One UNEXPRESSED diagnostic (warning) per constraint left out, also
    // appended to the artifact as target-appropriate comments.
    std::vector<Diagnostic> unexpressed;
    // Rendered constraint statements encoded in the artifact; together with
    // `unexpressed` this covers every constraint of the schema.
    std::vector<std::string> expressed;
};

// Relational translation. Entities become tables, single-valued attributes
// become columns, set-valued attributes get their own table, identifying
// relationships of weak entities are absorbed, all other relationships get a
// table keyed by their identity. Requires a well-formed schema; type
// hierarchies are reported unexpressed and emitted flat.
EmitterOutput emitSql(const Schema& schema);

// SHACL node shapes in Turtle. Single-attribute unique keys become
// inverse-path maxCount-1 shapes; composite and navigation keys are reported
// unexpressed.
EmitterOutput emitShacl(const Schema& schema);

// ShEx compact syntax, structurally parallel to the SHACL mapping. Key
// constraints are reported unexpressed.
EmitterOutput emitShex(const Schema& schema);

// PG-Schema graph type: node types, edge types for binary relationships,
// IDENTIFIER / MANDATORY / SINGLETON / EXCLUSIVE constraint clauses.
EmitterOutput emitPgSchema(const Schema& schema);

// Graphviz diagram of the shape graph: boxes for entities, ellipses for
// attributes, hexagons for relationships, dashed arrows for Isa.
std::string emitDot(const Schema& schema);

// One English sentence per statement; mandatory/single role pairs fuse with
// the role declaration into a single participation sentence.
std::string verbalize(const Schema& schema);

} // namespace kger
