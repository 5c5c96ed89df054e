#pragma once

// First-order formulas over a schema vocabulary, their text rendering, and a
// brute-force model checker used as a testing oracle. Formulas quantify over
// the active domain of a knowledge graph (instance ids plus data values
// occurring in the graph).

#include "kger/core.hpp"

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace kger {

// A domain element: an instance id or a data value.
struct NodeId {
    std::string id;

    bool operator==(const NodeId& o) const { return id == o.id; }
    bool operator<(const NodeId& o) const { return id < o.id; }
};

using Element = std::variant<NodeId, Value>;
using Tuple = std::vector<Element>;
using Assignment = std::map<std::string, Element>;

std::string render(const Element& e);
std::string render(const Tuple& t);

struct FolFormula {
    enum class Kind {
        True,
        False,
        ClassAtom, // E(x) or R(x): predicate + vars[0]
        BinAtom,   // A(x, y) or B(x, y): predicate + vars[0], vars[1]
        Equal,     // vars[0] = vars[1]
        And,
        Or,
        Implies, // children[0] => children[1]
        Exists,  // vars = bound variables, children[0] = body
        Forall
    };

    Kind kind = Kind::True;
    std::string predicate;
    std::vector<std::string> vars;
    std::vector<FolFormula> children;

    static FolFormula mkTrue();
    static FolFormula mkFalse();
    static FolFormula classAtom(std::string predicate, std::string var);
    static FolFormula binAtom(std::string predicate, std::string left, std::string right);
    static FolFormula equal(std::string left, std::string right);
    static FolFormula conj(std::vector<FolFormula> parts); // flattens; empty -> true
    static FolFormula disj(std::vector<FolFormula> parts); // flattens; empty -> false
    static FolFormula implies(FolFormula antecedent, FolFormula consequent);
    static FolFormula exists(std::vector<std::string> vars, FolFormula body);
    static FolFormula forall(std::vector<std::string> vars, FolFormula body);

    // Variables not bound by an enclosing quantifier, in first-use order.
    std::vector<std::string> freeVariables() const;

    // Logic-notation rendering: quantifiers, ∧, ∨, ⇒, predicate(args).
    std::string render() const;
};

// Enumerates every assignment of the formula's free variables over the active
// domain of `graph` that extends `binding` and satisfies the formula.
// Exponential in the number of variables; intended for small graphs.
// Throws Error("UNSUPPORTED-FORMULA") if the formula mentions a binding
// variable pattern outside the toolkit fragment (unknown predicates are
// simply empty relations).
std::set<Assignment> evalFormula(const KnowledgeGraph& graph, const FolFormula& formula,
                                 const Assignment& binding = {});

// True iff the closed formula holds in the graph (convenience wrapper; the
// formula must have no free variables beyond `binding`).
bool satisfies(const KnowledgeGraph& graph, const FolFormula& formula,
               const Assignment& binding = {});

// The active domain: all instance ids and all values occurring in the graph.
std::vector<Element> activeDomain(const KnowledgeGraph& graph);

} // namespace kger
