#include "emit_common.hpp"

#include <algorithm>
#include <cctype>

namespace kger::emit {

bool isSingleValued(const Schema& schema, const std::string& owner,
                    const std::string& attribute) {
    // An identity leaf is forced to exactly one value, so the compilers may
    // treat it as single-valued even without an explicit Single statement.
    return schema.hasSingleAttr(owner, attribute) ||
           isIdentityAttrLeaf(schema, owner, attribute);
}

bool isIdentityAttrLeaf(const Schema& schema, const std::string& owner,
                        const std::string& attribute) {
    const IdentityConstraint* id = schema.identityOf(owner);
    if (id == nullptr) return false;
    return std::any_of(id->patterns.begin(), id->patterns.end(), [&](const Pattern& p) {
        return p.kind == Pattern::Kind::AttrLeaf && p.name == attribute;
    });
}

bool attrMinOne(const Schema& schema, const std::string& owner,
                const std::string& attribute) {
    return schema.hasMandatoryAttr(owner, attribute) ||
           isIdentityAttrLeaf(schema, owner, attribute);
}

bool attrMaxOne(const Schema& schema, const std::string& owner,
                const std::string& attribute) {
    return schema.hasSingleAttr(owner, attribute) ||
           isIdentityAttrLeaf(schema, owner, attribute);
}

bool hasFlatAttrIdentity(const Schema& schema, const std::string& entity) {
    const IdentityConstraint* id = schema.identityOf(entity);
    if (id == nullptr) return false;
    return std::all_of(id->patterns.begin(), id->patterns.end(), [](const Pattern& p) {
        return p.kind == Pattern::Kind::AttrLeaf;
    });
}

std::vector<std::string> singleValuedAttrs(const Schema& schema, const std::string& owner) {
    std::vector<std::string> out;
    auto it = schema.attrsOf.find(owner);
    if (it == schema.attrsOf.end()) return out;
    for (const auto& a : it->second) {
        if (isSingleValued(schema, owner, a)) out.push_back(a);
    }
    return out;
}

std::vector<std::string> multiValuedAttrs(const Schema& schema, const std::string& owner) {
    std::vector<std::string> out;
    auto it = schema.attrsOf.find(owner);
    if (it == schema.attrsOf.end()) return out;
    for (const auto& a : it->second) {
        if (!isSingleValued(schema, owner, a)) out.push_back(a);
    }
    return out;
}

bool navigatesFullIdentity(const Schema& schema, const Pattern& p) {
    if (p.kind != Pattern::Kind::RoleNode) return false;
    auto owner = schema.ownerOfRole.find(p.name);
    if (owner == schema.ownerOfRole.end()) return false;
    const IdentityConstraint* fillerId = schema.identityOf(owner->second.second);
    if (fillerId == nullptr) return false;
    return p.children == fillerId->patterns;
}

Analysis analyze(const Schema& schema) {
    Analysis analysis;
    analysis.hasHierarchy = !schema.isaEdges().empty();
    for (const auto& c : schema.constraints) {
        if (std::holds_alternative<DisjointConstraint>(c) ||
            std::holds_alternative<CoverConstraint>(c)) {
            analysis.hasHierarchy = true;
        }
    }

    for (const auto& entity : schema.entities) {
        const IdentityConstraint* id = schema.identityOf(entity);
        if (id == nullptr) continue;

        const Pattern* nav = nullptr;
        std::size_t navIndex = 0;
        bool othersFlat = true;
        for (std::size_t i = 0; i < id->patterns.size(); ++i) {
            const Pattern& p = id->patterns[i];
            if (p.kind == Pattern::Kind::AttrLeaf) continue;
            if (nav != nullptr || p.kind != Pattern::Kind::RoleNode) {
                othersFlat = false;
                break;
            }
            nav = &p;
            navIndex = i;
        }
        if (!othersFlat || nav == nullptr) continue;

        // The navigation must be B(C(parent identity leaves)) through a
        // binary relationship with mandatory single participation.
        auto viaOwner = schema.ownerOfRole.find(nav->name);
        if (viaOwner == schema.ownerOfRole.end()) continue;
        const auto& [rel, navEntity] = viaOwner->second;
        if (navEntity != entity) continue;
        auto rolesIt = schema.rolesOf.find(rel);
        if (rolesIt == schema.rolesOf.end() || rolesIt->second.size() != 2) continue;
        std::string parentRole;
        for (const auto& r : rolesIt->second) {
            if (r != nav->name) parentRole = r;
        }
        if (parentRole.empty()) continue;
        if (nav->children.size() != 1) continue;
        const Pattern& inner = nav->children.front();
        if (inner.kind != Pattern::Kind::RoleNode || inner.name != parentRole) continue;
        std::string parent = schema.ownerOfRole.at(parentRole).second;
        if (!hasFlatAttrIdentity(schema, parent)) continue;
        const IdentityConstraint* parentId = schema.identityOf(parent);
        if (inner.children != parentId->patterns) continue;
        if (!schema.hasMandatoryRole(entity, nav->name, rel) ||
            !schema.hasSingleRole(entity, nav->name, rel)) {
            continue;
        }

        WeakLink link;
        link.entity = entity;
        link.viaRole = nav->name;
        link.relationship = rel;
        link.parentRole = parentRole;
        link.parent = parent;
        for (const auto& leaf : parentId->patterns) link.parentLeaves.push_back(leaf.name);
        link.navIndex = navIndex;
        analysis.weakOf[entity] = link;
        analysis.absorbedRel[rel] = entity;
    }
    return analysis;
}

std::vector<std::string> orderedRoles(const Schema& schema,
                                      const std::string& relationship) {
    std::vector<std::string> out;
    auto rolesIt = schema.rolesOf.find(relationship);
    if (rolesIt == schema.rolesOf.end()) return out;

    const IdentityConstraint* id = schema.identityOf(relationship);
    if (id != nullptr) {
        for (const auto& p : id->patterns) {
            if (p.kind == Pattern::Kind::AttrLeaf) continue;
            if (rolesIt->second.count(p.name) > 0 &&
                std::find(out.begin(), out.end(), p.name) == out.end()) {
                out.push_back(p.name);
            }
        }
    }
    for (const auto& role : rolesIt->second) {
        if (std::find(out.begin(), out.end(), role) == out.end()) out.push_back(role);
    }
    return out;
}

std::optional<std::pair<std::string, std::string>>
subjectObjectRoles(const Schema& schema, const Analysis& analysis,
                   const std::string& relationship) {
    auto rolesIt = schema.rolesOf.find(relationship);
    if (rolesIt == schema.rolesOf.end() || rolesIt->second.size() != 2) return std::nullopt;
    std::vector<std::string> roles(rolesIt->second.begin(), rolesIt->second.end());
    auto absorbed = analysis.absorbedRel.find(relationship);
    if (absorbed != analysis.absorbedRel.end()) {
        const WeakLink& link = analysis.weakOf.at(absorbed->second);
        return std::make_pair(link.parentRole, link.viaRole);
    }
    return std::make_pair(roles[0], roles[1]); // alphabetical (set order)
}

std::string capitalize(const std::string& name) {
    std::string out = name;
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::string lowercaseFirst(const std::string& name) {
    std::string out = name;
    if (!out.empty()) out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
    return out;
}

Diagnostic unexpressed(const ConstraintStatement& c, const std::string& reason) {
    Diagnostic d;
    d.severity = Diagnostic::Severity::Warning;
    d.code = "UNEXPRESSED";
    d.subject = render(c);
    d.message = reason;
    return d;
}

void reportHierarchyUnexpressed(const Schema& schema, EmitterOutput& out,
                                const std::string& target) {
    for (const auto& c : schema.constraints) {
        if (std::holds_alternative<IsaConstraint>(c) ||
            std::holds_alternative<DisjointConstraint>(c) ||
            std::holds_alternative<CoverConstraint>(c)) {
            out.unexpressed.push_back(
                unexpressed(c, "type hierarchies are not compiled to " + target));
        }
    }
}

} // namespace kger::emit
