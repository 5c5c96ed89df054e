#pragma once

// Tree-pattern operations: rootedness in a shape graph, translation to
// first-order formulas, and direct evaluation on knowledge graphs.

#include "kger/core.hpp"
#include "kger/fol.hpp"

#include <set>
#include <string>
#include <vector>

namespace kger {

// Three-case recursive rootedness check. An entity may root patterns through
// attributes and participations of any of its Isa-ancestors.
// Throws Error("UNKNOWN-NAME") if `subject` or a name in `p` is undeclared.
bool isRootedAt(const Schema& schema, const Pattern& p, const std::string& subject);

// Translates a rooted pattern into its formula φ_p^X(x, y1..yk). Fresh
// existential variables are z1, z2, ... in pre-order.
// Throws Error("NOT-ROOTED") when the pattern is not rooted at `subject`.
FolFormula translatePattern(const Schema& schema, const std::string& subject,
                            const Pattern& p);

// Like translatePattern but with caller-controlled variable naming, used to
// assemble statement clauses: answer variables are taken from `answerVars`
// starting at `answerIndex`; bound variables are `<boundPrefix>N`.
FolFormula translatePatternWith(const Schema& schema, const std::string& subject,
                                const Pattern& p, const std::string& instVar,
                                const std::vector<std::string>& answerVars,
                                std::size_t& answerIndex, const std::string& boundPrefix,
                                std::size_t& boundCounter);

// Evaluates a rooted pattern at one instance: exactly the tuples ȳ with
// graph ⊨ φ_p^X(inst, ȳ), components in leaf pre-order.
// Throws Error("NOT-AN-INSTANCE") if `inst` is not an instance of `subject`.
std::set<Tuple> evalPattern(const Schema& schema, const KnowledgeGraph& graph,
                            const std::string& subject, const Pattern& p,
                            const std::string& inst);

// Cartesian product of the per-pattern results, concatenated: the witness
// tuples z̄ with graph ⊨ X(inst) ∧ ⋀_i φ_{p_i}^X(inst, z̄_i).
std::set<Tuple> witnessTuples(const Schema& schema, const KnowledgeGraph& graph,
                              const std::string& subject,
                              const std::vector<Pattern>& patterns, const std::string& inst);

} // namespace kger
