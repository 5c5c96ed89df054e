#pragma once

// Shared schema analysis for the emitters: weak-entity detection, identity
// column derivation, and naming rules.

#include "kger/core.hpp"
#include "kger/emitters.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kger::emit {

// A weak entity per the relational absorption rule: its identity is exactly
// one depth-1 navigation to the full identity of a strong parent plus local
// attribute leaves, and the navigated participation is mandatory and single.
struct WeakLink {
    std::string entity;       // the weak entity E
    std::string viaRole;      // role of R pointing at E
    std::string relationship; // the absorbed identifying relationship R
    std::string parentRole;   // role of R pointing at the parent
    std::string parent;       // strong parent entity P
    std::vector<std::string> parentLeaves; // P's identity attribute leaves
    std::size_t navIndex = 0; // position of the navigation in E's identity
};

struct Analysis {
    bool hasHierarchy = false;
    std::map<std::string, WeakLink> weakOf;         // weak entity -> link
    std::map<std::string, std::string> absorbedRel; // relationship -> weak entity
};

Analysis analyze(const Schema& schema);

// True iff the identity consists solely of attribute leaves.
bool hasFlatAttrIdentity(const Schema& schema, const std::string& entity);

// Attribute multiplicity shorthand: single-valued means SingleAttr declared.
bool isSingleValued(const Schema& schema, const std::string& owner,
                    const std::string& attribute);

// Attribute bound implied by constraints and identity membership: an
// attribute leaf occurring at the top level of the owner's identity is
// forced to exactly one value.
bool isIdentityAttrLeaf(const Schema& schema, const std::string& owner,
                        const std::string& attribute);
bool attrMinOne(const Schema& schema, const std::string& owner,
                const std::string& attribute);
bool attrMaxOne(const Schema& schema, const std::string& owner,
                const std::string& attribute);

// Sorted single-valued / set-valued attribute names of an owner.
std::vector<std::string> singleValuedAttrs(const Schema& schema, const std::string& owner);
std::vector<std::string> multiValuedAttrs(const Schema& schema, const std::string& owner);

// Roles of a relationship in identity-navigation order, remaining roles
// alphabetical.
std::vector<std::string> orderedRoles(const Schema& schema,
                                      const std::string& relationship);

// True iff `p` is a depth-1 navigation RoleNode whose children equal the
// identity pattern list of the role's filler.
bool navigatesFullIdentity(const Schema& schema, const Pattern& p);

// For a binary relationship, the role chosen as the edge/property subject:
// the non-dependent side of an absorbed relationship, otherwise the
// alphabetically first role. Returns nullopt for non-binary relationships.
std::optional<std::pair<std::string, std::string>> // (subjectRole, objectRole)
subjectObjectRoles(const Schema& schema, const Analysis& analysis,
                   const std::string& relationship);

std::string capitalize(const std::string& name);
std::string lowercaseFirst(const std::string& name);

Diagnostic unexpressed(const ConstraintStatement& c, const std::string& reason);

// Marks every hierarchy statement unexpressed (shared by all compilers).
void reportHierarchyUnexpressed(const Schema& schema, EmitterOutput& out,
                                const std::string& target);

} // namespace kger::emit
