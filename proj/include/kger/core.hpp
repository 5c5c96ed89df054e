#pragma once

// Core data model: vocabulary, statements, schemas, knowledge graphs and
// diagnostics shared by every other component.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kger {

// Thrown by operations whose preconditions are violated (unknown names,
// non-rooted patterns, ...). `code` is a stable identifier such as
// "UNKNOWN-ENTITY" or "NOT-ROOTED".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// True iff `name` matches [A-Za-z_][A-Za-z0-9_]*.
bool isValidIdentifier(const std::string& name);

// ---------------------------------------------------------------------------
// Values

// A concrete data value. The graph data domain is restricted to four scalar
// kinds with canonical lexical forms so that value equality (needed by key
// checking) is decidable and representation independent.
class Value {
public:
    enum class Tag { Text, Integer, Decimal, Boolean };

    static Value text(std::string s);
    static Value boolean(bool b);
    // Both accept a lexical form and canonicalize it ("007" -> "7",
    // "2.50" -> "2.5", "1e2" -> "100"). Throws Error("BAD-VALUE") on
    // malformed input.
    static Value integer(const std::string& lexical);
    static Value integer(long long v);
    static Value decimal(const std::string& lexical);
    static Value decimal(double v);

    Tag tag() const { return tag_; }
    const std::string& lexical() const { return lexical_; }
    bool isNumeric() const { return tag_ == Tag::Integer || tag_ == Tag::Decimal; }

    // Integers and decimals with the same numeric value compare equal.
    bool operator==(const Value& other) const;
    bool operator!=(const Value& other) const { return !(*this == other); }
    bool operator<(const Value& other) const; // total order consistent with ==

    // Source-style rendering: text quoted, numbers and booleans bare.
    std::string render() const;

private:
    Value(Tag tag, std::string lexical) : tag_(tag), lexical_(std::move(lexical)) {}

    Tag tag_;
    std::string lexical_;
};

// ---------------------------------------------------------------------------
// Patterns

// A tree pattern over role names with attribute names allowed at the leaves.
// Child order is significant: the leaf pre-order fixes the component order of
// extracted tuples.
struct Pattern {
    enum class Kind { AttrLeaf, RoleLeaf, RoleNode };

    Kind kind = Kind::AttrLeaf;
    std::string name;
    std::vector<Pattern> children; // non-empty iff kind == RoleNode

    static Pattern attrLeaf(std::string attribute);
    static Pattern roleLeaf(std::string role);
    static Pattern roleNode(std::string role, std::vector<Pattern> children);

    // Textual form, e.g. "msg(author(fname, lname))".
    std::string render() const;

    bool operator==(const Pattern& other) const;
    bool operator!=(const Pattern& other) const { return !(*this == other); }
    bool operator<(const Pattern& other) const;
};

// Number of leaf nodes.
std::size_t patternArity(const Pattern& p);

// True iff every leaf is an attribute leaf.
bool isGround(const Pattern& p);

// ---------------------------------------------------------------------------
// Statements

struct EntityDecl {
    std::string entity;
};
struct RelationshipDecl {
    std::string relationship;
};
struct AttributeDecl {
    std::string owner; // entity or relationship
    std::string attribute;
};
struct RoleDecl {
    std::string relationship;
    std::string role;
    std::string entity;
};

using ShapeStatement = std::variant<EntityDecl, RelationshipDecl, AttributeDecl, RoleDecl>;

struct MandatoryAttr {
    std::string owner;
    std::string attribute;
};
struct SingleAttr {
    std::string owner;
    std::string attribute;
};
struct MandatoryRole {
    std::string entity;
    std::string role;
    std::string relationship;
};
struct SingleRole {
    std::string entity;
    std::string role;
    std::string relationship;
};
struct KeyConstraint {
    std::string subject; // entity or relationship
    std::vector<Pattern> patterns; // non-empty
};
struct IdentityConstraint {
    std::string subject;
    std::vector<Pattern> patterns; // non-empty
};
struct IsaConstraint {
    std::string sub;
    std::string super;
};
struct DisjointConstraint {
    std::string left;
    std::string right;
};
struct CoverConstraint {
    std::vector<std::string> members; // non-empty, kept sorted and unique
    std::string covered;
};

using ConstraintStatement =
    std::variant<MandatoryAttr, SingleAttr, MandatoryRole, SingleRole, KeyConstraint,
                 IdentityConstraint, IsaConstraint, DisjointConstraint, CoverConstraint>;

using Statement = std::variant<ShapeStatement, ConstraintStatement>;

// Canonical one-line rendering, identical to the text format (core of
// serialization, deduplication and canonical ordering).
std::string render(const ShapeStatement& s);
std::string render(const ConstraintStatement& s);
std::string render(const Statement& s);

// Rank used for canonical grouping: Entity < Relationship < Attribute < Role,
// then MandatoryAttr < SingleAttr < MandatoryRole < SingleRole < Key <
// Identity < Isa < Disjoint < Cover.
int kindRank(const ShapeStatement& s);
int kindRank(const ConstraintStatement& s);

// ---------------------------------------------------------------------------
// Diagnostics

struct Diagnostic {
    enum class Severity { Error, Warning };

    Severity severity = Severity::Error;
    std::string code;    // stable identifier, e.g. "WF4", "DM2", "VIOL-KEY"
    std::string subject; // statement rendering or instance ids involved
    std::string message;
    std::vector<std::string> witnesses; // ids / rendered values

    bool isError() const { return severity == Severity::Error; }
};

bool hasErrors(const std::vector<Diagnostic>& diagnostics);

// ---------------------------------------------------------------------------
// Schema

// A deduplicated, canonically ordered statement set plus lookup indexes.
// Immutable after construction by buildSchema; all lookups are const.
struct Schema {
    std::vector<ShapeStatement> shape;
    std::vector<ConstraintStatement> constraints;

    // Vocabulary (pairwise disjoint name classes).
    std::set<std::string> entities;
    std::set<std::string> relationships;
    std::set<std::string> attributes;
    std::set<std::string> roles;

    // Derived indexes, rebuildable from the statement lists.
    std::map<std::string, std::set<std::string>> attrsOf;  // X -> attribute names
    std::map<std::string, std::set<std::string>> rolesOf;  // R -> role names
    std::map<std::string, std::set<std::pair<std::string, std::string>>>
        participations;                                    // E -> {(R, B)}
    std::map<std::string, std::string> ownerOfAttr;        // A -> X
    std::map<std::string, std::pair<std::string, std::string>> ownerOfRole; // B -> (R, E)

    bool isEntity(const std::string& name) const { return entities.count(name) > 0; }
    bool isRelationship(const std::string& name) const {
        return relationships.count(name) > 0;
    }
    bool isDeclared(const std::string& name) const {
        return isEntity(name) || isRelationship(name);
    }

    // Constraint lookups used across the checker and the emitters.
    bool hasMandatoryAttr(const std::string& owner, const std::string& attribute) const;
    bool hasSingleAttr(const std::string& owner, const std::string& attribute) const;
    bool hasMandatoryRole(const std::string& entity, const std::string& role,
                          const std::string& relationship) const;
    bool hasSingleRole(const std::string& entity, const std::string& role,
                       const std::string& relationship) const;
    const IdentityConstraint* identityOf(const std::string& subject) const;
    std::vector<const KeyConstraint*> keysOf(const std::string& subject) const;
    std::vector<std::pair<std::string, std::string>> isaEdges() const; // (sub, super)

    bool operator==(const Schema& other) const {
        return shape == other.shape && constraints == other.constraints;
    }
    bool operator!=(const Schema& other) const { return !(*this == other); }
};

bool operator==(const ShapeStatement& a, const ShapeStatement& b);
bool operator==(const ConstraintStatement& a, const ConstraintStatement& b);

struct BuildResult {
    std::optional<Schema> schema;          // set iff diagnostics has no errors
    std::vector<Diagnostic> diagnostics;   // DUP-ATTR-OWNER, DUP-ROLE-OWNER,
                                           // NAME-CLASS-OVERLAP, BAD-STATEMENT

    bool ok() const { return schema.has_value(); }
};

// Builds a schema from raw statements: deduplicates, canonically orders, and
// rejects global-uniqueness violations. Deterministic and order-insensitive.
BuildResult buildSchema(const std::vector<ShapeStatement>& shape,
                        const std::vector<ConstraintStatement>& constraints);

// Reflexive-transitive closure of Isa starting from `entity`.
// Throws Error("UNKNOWN-ENTITY") if the entity is not declared.
std::set<std::string> ancestorsOf(const Schema& schema, const std::string& entity);

// Entities with no outgoing Isa edge (their own roots when unrelated).
std::set<std::string> rootsOf(const Schema& schema);

// ---------------------------------------------------------------------------
// Knowledge graphs

// A finite relational structure over a schema vocabulary. Entity ids and
// relationship ids are disjoint; every relationship instance has exactly one
// relationship name; fact lists are deduplicated and sorted.
struct KnowledgeGraph {
    struct AttrFact {
        std::string owner;
        std::string attribute;
        Value value;

        bool operator==(const AttrFact& o) const {
            return owner == o.owner && attribute == o.attribute && value == o.value;
        }
        bool operator<(const AttrFact& o) const;
    };
    struct RoleFact {
        std::string rel;
        std::string role;
        std::string target;

        bool operator==(const RoleFact& o) const {
            return rel == o.rel && role == o.role && target == o.target;
        }
        bool operator<(const RoleFact& o) const;
    };

    std::set<std::string> entityIds;
    std::set<std::string> relIds;
    std::map<std::string, std::set<std::string>> entityMembership; // id -> entity names
    std::map<std::string, std::string> relMembership;              // id -> relationship
    std::vector<AttrFact> attrFacts; // sorted, unique
    std::vector<RoleFact> roleFacts; // sorted, unique

    // Mutation helpers for programmatic construction (tests, generators).
    // They maintain the sorted-unique fact invariants.
    void addEntity(const std::string& id, const std::set<std::string>& types);
    void addRelationship(const std::string& id, const std::string& type);
    void addAttrFact(const std::string& owner, const std::string& attribute, Value value);
    void addRoleFact(const std::string& rel, const std::string& role,
                     const std::string& target);
    void removeAttrFact(const std::string& owner, const std::string& attribute,
                        const Value& value);

    bool isEntityInstanceOf(const std::string& id, const std::string& entity) const;
    bool isRelInstanceOf(const std::string& id, const std::string& relationship) const;

    // Instances of an entity or relationship name, sorted.
    std::vector<std::string> instancesOf(const Schema& schema,
                                         const std::string& name) const;

    std::vector<Value> attrValues(const std::string& owner,
                                  const std::string& attribute) const;
    // Fillers of `role` on relationship instance `rel` (more than one only in
    // graphs that violate the partial-function condition).
    std::vector<std::string> roleFillers(const std::string& rel,
                                         const std::string& role) const;
    // Relationship instances r with a fact (r, role, target).
    std::vector<std::string> relsWithFiller(const std::string& role,
                                            const std::string& target) const;

    std::size_t nodeCount() const { return entityIds.size() + relIds.size(); }
};

} // namespace kger
