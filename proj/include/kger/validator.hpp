#pragma once

// Graph validation: data-model conditions, per-statement first-order
// semantics, the core semantics, and the implicit-disjointness variant.

#include "kger/core.hpp"
#include "kger/fol.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace kger {

struct ValidatorOptions {
    // Diagnostics emitted per statement before a truncation marker.
    std::size_t maxDiagnosticsPerStatement = 100;
};

struct ValidationStats {
    std::size_t statements = 0;
    std::size_t entityInstances = 0;
    std::size_t relationshipInstances = 0;
    std::size_t attributeFacts = 0;
    std::size_t roleFacts = 0;

    bool operator==(const ValidationStats&) const = default;
};

struct ValidationReport {
    enum class Semantics { Core, ImplicitDisjointness };

    bool conforms = true; // true iff diagnostics has no error entries
    Semantics semantics = Semantics::Core;
    std::vector<Diagnostic> diagnostics;
    ValidationStats stats;

    std::string renderText() const;
    std::string renderStructured() const; // JSON, parseable by fromStructured
    static std::optional<ValidationReport> fromStructured(const std::string& text);

    bool operator==(const ValidationReport& other) const;
};

// Data-model conditions: facts only on typed instances and matching the declared
// owners (DM1), roles are partial functions (DM2), structural integrity of
// instance sets re-verified (DM3).
std::vector<Diagnostic> checkDataModel(const Schema& schema, const KnowledgeGraph& graph);

// Evaluates the semantics clause of one statement on the graph, one
// diagnostic per violation witness. Entity/Relationship declarations map to
// true. Requires a well-formed schema.
std::vector<Diagnostic> checkStatement(const Schema& schema, const KnowledgeGraph& graph,
                                       const Statement& stmt,
                                       const ValidatorOptions& options = {});

// The statement's first-order clause (used by --explain and as the oracle
// input in tests).
FolFormula statementClause(const Schema& schema, const Statement& stmt);
FolFormula disjointnessClause(const std::string& left, const std::string& right);

// Core semantics: data-model conditions plus every statement clause.
ValidationReport validateCore(const Schema& schema, const KnowledgeGraph& graph,
                              const ValidatorOptions& options = {});

// Unordered entity pairs with no common Isa-ancestor (θ_S).
std::set<std::pair<std::string, std::string>> implicitDisjointPairs(const Schema& schema);

// Core semantics plus implicit disjointness for every θ_S pair.
ValidationReport validateImplicitDisjointness(const Schema& schema,
                                              const KnowledgeGraph& graph,
                                              const ValidatorOptions& options = {});

// Copy of the graph with entity memberships closed upward along Isa.
KnowledgeGraph closeIsaMemberships(const Schema& schema, const KnowledgeGraph& graph);

} // namespace kger
